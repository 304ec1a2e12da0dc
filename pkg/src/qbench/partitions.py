"""Partition enumeration for the combinatorial side of the mod 5 identities.

Every count here comes from explicit backtracking.  Generating functions are
only used on the other side of the dual check, never to produce a count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        p = tuple(sorted(self.parts, reverse=True))
        if any(x <= 0 for x in p):
            raise ValueError("parts must be positive")
        object.__setattr__(self, "parts", p)

    @property
    def norm(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict:
        m: dict = {}
        for x in self.parts:
            m[x] = m.get(x, 0) + 1
        return m


def conjugate(p: Partition) -> Partition:
    if not p.parts:
        return p
    return Partition(tuple(sum(1 for x in p.parts if x >= j) for j in range(1, p.parts[0] + 1)))


@dataclass(frozen=True)
class MarkedPartition:
    base: Partition
    marked_index: int | None   # position in increasing order, 1-based; None when nothing is marked
    k: int

    @property
    def norm(self) -> int:
        return self.base.norm


# -- enumeration primitives ----------------------------------------------------------

def _descending(n: int, max_part: int, ok) -> Iterator[tuple]:
    """Weakly decreasing tuples of parts accepted by ``ok`` summing to n."""
    if n == 0:
        yield ()
        return
    for x in range(min(n, max_part), 0, -1):
        if ok(x):
            for rest in _descending(n - x, x, ok):
                yield (x,) + rest


def _gapped(n: int, max_part: int, gap: int, min_part: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for x in range(min(n, max_part), min_part - 1, -1):
        for rest in _gapped(n - x, x - gap, gap, min_part):
            yield (x,) + rest


def all_partitions(n: int) -> Iterator[Partition]:
    for p in _descending(n, n, lambda x: True):
        yield Partition(p)


# -- constraint descriptors ----------------------------------------------------------

class PartitionConstraint:
    name: str = ""
    empty_ok: bool = True

    def enumerate(self, n: int) -> Iterator:
        raise NotImplementedError

    def admits(self, p) -> bool:
        raise NotImplementedError

    def count(self, n: int) -> int:
        return count_partitions(n, self)


@dataclass(frozen=True)
class Congruence(PartitionConstraint):
    """Parts lying in any of the given (residue, modulus) classes."""

    classes: tuple
    name: str = ""

    def part_ok(self, x: int) -> bool:
        return any(x % m == c % m for c, m in self.classes)

    def enumerate(self, n):
        for p in _descending(n, n, self.part_ok):
            yield Partition(p)

    def admits(self, p):
        return all(self.part_ok(x) for x in p.parts)


@dataclass(frozen=True)
class GapCondition(PartitionConstraint):
    """Distinct parts, consecutive sizes differing by at least ``gap``, all at least ``min_part``."""

    gap: int = 2
    min_part: int = 1
    name: str = ""

    def enumerate(self, n):
        for p in _gapped(n, n, self.gap, self.min_part):
            yield Partition(p)

    def admits(self, p):
        ps = p.parts
        return all(x >= self.min_part for x in ps) and all(a - b >= self.gap for a, b in zip(ps, ps[1:]))


@dataclass(frozen=True)
class MultiplicityPattern(PartitionConstraint):
    """Largest part with multiplicity ``top``, every other size with multiplicity ``rest``,
    distinct sizes at least ``gap`` apart, parts at least ``min_part``.  Never empty."""

    top: int
    rest: int = 5
    gap: int = 2
    min_part: int = 1
    name: str = ""
    empty_ok: bool = False

    def enumerate(self, n):
        for s in range(n // self.top, self.min_part - 1, -1):
            left = n - self.top * s
            if left % self.rest:
                continue
            # remaining sizes form a gapped partition of left/rest below s
            for sizes in _gapped(left // self.rest, s - self.gap, self.gap, self.min_part):
                yield Partition((s,) * self.top + tuple(x for x in sizes for _ in range(self.rest)))

    def admits(self, p):
        if not p.parts:
            return False
        m = p.multiplicities()
        sizes = sorted(m, reverse=True)
        if m[sizes[0]] != self.top or any(m[x] != self.rest for x in sizes[1:]):
            return False
        if sizes[-1] < self.min_part:
            return False
        return all(a - b >= self.gap for a, b in zip(sizes, sizes[1:]))

    def base_partition(self, k: int) -> Partition:
        """Smallest member with k - 1 groups below the top part."""
        m0 = self.min_part
        sizes = [m0 + self.gap * j for j in range(k)]
        return Partition((sizes[-1],) * self.top + tuple(x for x in sizes[:-1] for _ in range(self.rest)))


@dataclass(frozen=True)
class MarkedFamily(PartitionConstraint):
    """Partitions into parts congruent to ``residue`` mod ``modulus`` with one marked part.

    For an admissible index k the ``position(k)``-th smallest part is marked and
    has size ``modulus*k + size_offset``; the parts below it are distinct.  Parts
    above it are at least the marked size, or strictly larger when
    ``strict_above`` is set.  An index with position 0 marks nothing and admits
    every partition of the class whose parts exceed the (non-positive) nominal
    size.  Members are (partition, k) pairs, so one partition may count for
    several k.

    ``empty_only_at_zero`` switches to the alternative reading in which the
    position-0 index contributes only the empty partition.
    """

    residue: int
    size_offset: int
    position_shift: int          # position(k) = k + position_shift
    parity: int                  # k % 2 must equal this
    kmin: int = 0
    strict_above: bool = True
    modulus: int = 5
    positive_sizes_only: bool = False
    empty_only_at_zero: bool = False
    name: str = ""

    def size(self, k: int) -> int:
        return self.modulus * k + self.size_offset

    def position(self, k: int) -> int:
        return k + self.position_shift

    def index_range(self, n: int) -> range:
        return range(self.kmin, n + 2)

    def _k_ok(self, k: int) -> bool:
        if k < self.kmin or k % 2 != self.parity:
            return False
        if self.positive_sizes_only and self.size(k) <= 0:
            return False
        return True

    def forced_norm(self, k: int) -> int:
        j = self.position(k)
        return sum(self.size(k) - self.modulus * i for i in range(j))

    def marks(self, p: Partition) -> list:
        """Admissible k for which p carries a valid marking."""
        asc = p.parts[::-1]
        out = []
        for k in self.index_range(p.norm):
            if not self._k_ok(k):
                continue
            j = self.position(k)
            s = self.size(k)
            if j == 0:
                if self.empty_only_at_zero:
                    ok = not asc
                else:
                    ok = all(x > s for x in asc)
            else:
                if len(asc) < j or asc[j - 1] != s:
                    continue
                below = asc[:j - 1]
                ok = len(set(below)) == len(below) and all(x < s for x in below)
                if ok and self.strict_above and len(asc) > j:
                    ok = asc[j] > s
            if ok:
                out.append(k)
        return out

    def part_ok(self, x: int) -> bool:
        return x % self.modulus == self.residue % self.modulus

    def enumerate(self, n):
        for p in _descending(n, n, self.part_ok):
            part = Partition(p)
            for k in self.marks(part):
                j = self.position(k)
                yield MarkedPartition(part, j if j > 0 else None, k)

    def admits(self, mp) -> bool:
        if not isinstance(mp, MarkedPartition):
            return False
        if not all(self.part_ok(x) for x in mp.base.parts):
            return False
        return mp.k in self.marks(mp.base)


@dataclass(frozen=True)
class Union(PartitionConstraint):
    """Parts from the union of several congruence constraints (classes must be disjoint)."""

    members: tuple
    name: str = ""

    def part_ok(self, x):
        return any(m.part_ok(x) for m in self.members)

    def enumerate(self, n):
        for p in _descending(n, n, self.part_ok):
            yield Partition(p)

    def admits(self, p):
        return all(self.part_ok(x) for x in p.parts)


@dataclass(frozen=True)
class PairConstraint:
    first: PartitionConstraint
    second: PartitionConstraint

    def count(self, n: int) -> int:
        return count_pairs(n, self.first, self.second)


def count_partitions(n: int, c: PartitionConstraint) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum(1 for _ in c.enumerate(n))


def count_table(nmax: int, c: PartitionConstraint) -> list[int]:
    return [count_partitions(n, c) for n in range(nmax + 1)]


def count_pairs(n: int, c1: PartitionConstraint, c2: PartitionConstraint) -> int:
    if n < 0:
        return 0
    a = count_table(n, c1)
    b = count_table(n, c2)
    return sum(a[m] * b[n - m] for m in range(n + 1))


def _pair_table(nmax: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return [sum(a[m] * b[n - m] for m in range(n + 1)) for n in range(nmax + 1)]


# -- the family registry ---------------------------------------------------------------

TH_10_15 = ((10, 25), (15, 25), (0, 25))
TH_5_20 = ((5, 25), (20, 25), (0, 25))


@dataclass(frozen=True)
class Family:
    name: str
    constraint: PartitionConstraint
    gf: str                 # generating function in the DSL, the series side of the check
    description: str = ""


def _f(name, constraint, gf, description):
    return Family(name, constraint, gf, description)


FAMILIES: dict = {f.name: f for f in [
    _f("gap2", GapCondition(2, 1, "gap2"),
       "sum(k = 0..inf) { q^(k^2) / qp(q; q)_k }",
       "distinct parts differing by at least 2"),
    _f("gap2-min2", GapCondition(2, 2, "gap2-min2"),
       "sum(k = 0..inf) { q^(k^2+k) / qp(q; q)_k }",
       "distinct parts at least 2 differing by at least 2"),
    _f("mod5-1-4", Congruence(((1, 5), (4, 5)), "mod5-1-4"),
       "1 / qp(q, q^4; q^5)_inf", "parts congruent to 1 or 4 mod 5"),
    _f("mod5-2-3", Congruence(((2, 5), (3, 5)), "mod5-2-3"),
       "1 / qp(q^2, q^3; q^5)_inf", "parts congruent to 2 or 3 mod 5"),
    _f("alpha", Congruence(((4, 5),) + TH_10_15, "alpha"),
       "1 / (qp(q^4; q^5)_inf * qp(q^10, q^15, q^25; q^25)_inf)",
       "parts 4 mod 5 or 10, 15, 0 mod 25"),
    _f("beta", Congruence(((3, 5),) + TH_5_20, "beta"),
       "1 / (qp(q^3; q^5)_inf * qp(q^5, q^20, q^25; q^25)_inf)",
       "parts 3 mod 5 or 5, 20, 0 mod 25"),
    _f("gamma", Congruence(((2, 5),) + TH_5_20, "gamma"),
       "1 / (qp(q^2; q^5)_inf * qp(q^5, q^20, q^25; q^25)_inf)",
       "parts 2 mod 5 or 5, 20, 0 mod 25"),
    _f("delta", Congruence(((1, 5),) + TH_10_15, "delta"),
       "1 / (qp(q; q^5)_inf * qp(q^10, q^15, q^25; q^25)_inf)",
       "parts 1 mod 5 or 10, 15, 0 mod 25"),
    _f("epsilon", Congruence(TH_10_15, "epsilon"),
       "1 / qp(q^10, q^15, q^25; q^25)_inf", "parts 10, 15, 0 mod 25"),
    _f("zeta", Congruence(TH_10_15, "zeta"),
       "1 / qp(q^10, q^15, q^25; q^25)_inf", "parts 10, 15, 0 mod 25"),
    _f("eta", Congruence(TH_5_20, "eta"),
       "1 / qp(q^5, q^20, q^25; q^25)_inf", "parts 5, 20, 0 mod 25"),
    _f("theta", Congruence(TH_5_20, "theta"),
       "1 / qp(q^5, q^20, q^25; q^25)_inf", "parts 5, 20, 0 mod 25"),
    _f("iota", Congruence(((2, 5), (3, 5)), "iota"),
       "1 / qp(q^2, q^3; q^5)_inf", "parts 2 or 3 mod 5"),
    _f("kappa", Congruence(((1, 5), (4, 5)), "kappa"),
       "1 / qp(q, q^4; q^5)_inf", "parts 1 or 4 mod 5"),
    _f("lambda", MultiplicityPattern(1, 5, 2, 2, "lambda"),
       "sum(k = 1..inf) { q^(k*(5*k-3)) / qp(q; q^5)_k }",
       "top part once, other sizes five times, gaps at least 2, parts at least 2"),
    _f("mu", MultiplicityPattern(2, 5, 2, 1, "mu"),
       "sum(k = 1..inf) { q^((k-1)*(5*k-1)+2) / qp(q^2; q^5)_k }",
       "top part twice, other sizes five times, gaps at least 2"),
    _f("nu", MultiplicityPattern(3, 5, 2, 1, "nu"),
       "sum(k = 1..inf) { q^(k*(5*k-4)+2) / qp(q^3; q^5)_k }",
       "top part three times, other sizes five times, gaps at least 2"),
    _f("xi", MultiplicityPattern(4, 5, 2, 2, "xi"),
       "sum(k = 1..inf) { q^(k*(5*k+3)) / qp(q^4; q^5)_k }",
       "top part four times, other sizes five times, gaps at least 2, parts at least 2"),
    _f("pi", MarkedFamily(4, -1, 0, 0, name="pi"),
       "sum(k = 0..inf step 2) { q^(k*(5*k+3)/2) / qp(q^(4+5*k); q^5)_inf }",
       "parts 4 mod 5, k even, k-th smallest part marked of size 5k-1"),
    _f("rho", MarkedFamily(4, -1, 0, 1, kmin=1, name="rho"),
       "sum(k = 1..inf step 2) { q^(k*(5*k+3)/2) / qp(q^(4+5*k); q^5)_inf }",
       "parts 4 mod 5, k odd, k-th smallest part marked of size 5k-1"),
    _f("sigma", MarkedFamily(3, 3, 1, 0, strict_above=False, name="sigma"),
       "sum(k = 0..inf step 2) { q^(k*(5*k+11)/2+3) / qp(q^(3+5*k); q^5)_inf }",
       "parts 3 mod 5, k even, (k+1)st smallest part marked of size 5k+3"),
    _f("tau", MarkedFamily(3, 3, 1, 1, kmin=1, strict_above=False, name="tau"),
       "sum(k = 1..inf step 2) { q^(k*(5*k+11)/2+3) / qp(q^(3+5*k); q^5)_inf }",
       "parts 3 mod 5, k odd, (k+1)st smallest part marked of size 5k+3"),
    _f("phi", MarkedFamily(2, 2, 1, 0, strict_above=False, name="phi"),
       "sum(k = 0..inf step 2) { q^(k*(5*k+9)/2+2) / qp(q^(2+5*k); q^5)_inf }",
       "parts 2 mod 5, k even, (k+1)st smallest part marked of size 5k+2"),
    _f("chi", MarkedFamily(2, 2, 1, 1, kmin=1, strict_above=False, name="chi"),
       "sum(k = 1..inf step 2) { q^(k*(5*k+9)/2+2) / qp(q^(2+5*k); q^5)_inf }",
       "parts 2 mod 5, k odd, (k+1)st smallest part marked of size 5k+2"),
    _f("psi", MarkedFamily(1, -4, 0, 0, name="psi"),
       "sum(k = 0..inf step 2) { q^(k*(5*k-3)/2) / qp(q^(1+5*k); q^5)_inf }",
       "parts 1 mod 5, k even, k-th smallest part marked of size 5k-4"),
    _f("omega", MarkedFamily(1, -4, 0, 1, kmin=1, name="omega"),
       "sum(k = 1..inf step 2) { q^(k*(5*k-3)/2) / qp(q^(1+5*k); q^5)_inf }",
       "parts 1 mod 5, k odd, k-th smallest part marked of size 5k-4"),
]}

# Alternative readings of the marked families, kept for the diagnostic report.
LITERAL_READINGS: dict = {
    # "possibly empty": the unmarked index contributes only the empty partition
    "pi": MarkedFamily(4, -1, 0, 0, empty_only_at_zero=True, name="pi-empty"),
    "psi": MarkedFamily(1, -4, 0, 0, empty_only_at_zero=True, name="psi-empty"),
    # k+1 even / odd with marked size 5k-3, positive sizes only
    "phi": MarkedFamily(2, -3, 1, 1, kmin=1, strict_above=False, positive_sizes_only=True, name="phi-literal"),
    "chi": MarkedFamily(2, -3, 1, 0, kmin=0, strict_above=False, positive_sizes_only=True, name="chi-literal"),
}


def family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown partition family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None


def family_series(name: str, order: int):
    from .dsl import evaluate
    return evaluate(family(name).gf, order)


# -- the classical pair ---------------------------------------------------------------

@dataclass
class ClassicalRow:
    n: int
    left: int
    right: int

    @property
    def ok(self) -> bool:
        return self.left == self.right


def verify_macmahon_schur(which: str, nmax: int) -> list[ClassicalRow]:
    """'A': gap-2 partitions vs parts 1,4 mod 5; 'B': gap-2, parts >= 2 vs parts 2,3 mod 5."""
    left, right = {"A": ("gap2", "mod5-1-4"), "B": ("gap2-min2", "mod5-2-3")}[which.upper()]
    a = count_table(nmax, family(left).constraint)
    b = count_table(nmax, family(right).constraint)
    return [ClassicalRow(n, a[n], b[n]) for n in range(nmax + 1)]


# -- the four bilateral companions ----------------------------------------------------

@dataclass(frozen=True)
class Comb5Variant:
    name: str
    record: str                 # catalog id of the rearranged identity
    lhs_pairs: tuple            # ((fam1, fam2, shift), ...): pairs at combined norm n + shift
    single: str                 # single family at norm n on the right
    rhs_pair: tuple             # (fam1, fam2, shift)


VARIANTS = {
    "A": Comb5Variant("A", "comb-a", (("alpha", "lambda", 0), ("epsilon", "pi", 0)), "iota", ("zeta", "rho", 0)),
    "B": Comb5Variant("B", "comb-b", (("beta", "mu", 2), ("eta", "sigma", 2)), "kappa", ("theta", "tau", 2)),
    "C": Comb5Variant("C", "comb-c", (("gamma", "nu", 2), ("eta", "phi", 2)), "kappa", ("theta", "chi", 2)),
    "D": Comb5Variant("D", "comb-d", (("delta", "xi", 0), ("epsilon", "psi", 0)), "iota", ("zeta", "omega", 0)),
}


@dataclass
class Comb5Row:
    n: int
    pair1: int
    pair2: int
    single: int
    pair3: int
    series_lhs: object = None
    series_rhs: object = None

    @property
    def balanced(self) -> bool:
        return self.pair1 + self.pair2 == self.single + self.pair3

    @property
    def series_ok(self) -> bool:
        return self.series_lhs == self.pair1 + self.pair2 and self.series_rhs == self.single + self.pair3

    @property
    def ok(self) -> bool:
        return self.balanced and self.series_ok

    def to_dict(self) -> dict:
        return {"n": self.n, "pair1": self.pair1, "pair2": self.pair2, "single": self.single,
                "pair3": self.pair3, "series_lhs": str(self.series_lhs),
                "series_rhs": str(self.series_rhs), "balanced": self.balanced,
                "series_ok": self.series_ok}


@dataclass
class Comb5Report:
    variant: str
    nmax: int
    rows: list = field(default_factory=list)
    families: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self) -> Comb5Row | None:
        return next((r for r in self.rows if not r.ok), None)

    def to_dict(self) -> dict:
        f = self.first_failure
        return {"variant": self.variant, "nmax": self.nmax, "ok": self.ok, "families": self.families,
                "first_failure": f.to_dict() if f else None, "rows": [r.to_dict() for r in self.rows]}


def _tables(v: Comb5Variant, nmax: int, constraints: dict) -> tuple:
    def pair(spec):
        a, b, s = spec
        top = nmax + s
        return _pair_table(top, count_table(top, constraints[a]), count_table(top, constraints[b])), s
    p1, p2 = (pair(x) for x in v.lhs_pairs)
    p3 = pair(v.rhs_pair)
    single = count_table(nmax, constraints[v.single])
    return p1, p2, single, p3


def verify_comb5(variant, nmax: int, records=None, overrides: dict | None = None) -> Comb5Report:
    """Balance of the count equation for n <= nmax, by enumeration, plus agreement of
    each side with the q^n coefficient of the rearranged identity.

    ``overrides`` maps family names to alternative constraints (see LITERAL_READINGS).
    """
    from .catalog import get_record
    from .summation import EngineConfig

    v = variant if isinstance(variant, Comb5Variant) else VARIANTS[variant.upper()]
    names = {x for spec in v.lhs_pairs + (v.rhs_pair,) for x in spec[:2]} | {v.single}
    constraints = {n: family(n).constraint for n in names}
    for k, c in (overrides or {}).items():
        constraints[k] = c
    (t1, s1), (t2, s2), single, (t3, s3) = _tables(v, nmax, constraints)

    rec = get_record(v.record, records)
    lhs, rhs = rec.sides(rec.get_sample(None))
    cfg = EngineConfig()
    sl = lhs.series(nmax, cfg, [])
    sr = rhs.series(nmax, cfg, [])

    rep = Comb5Report(v.name, nmax, families={n: getattr(c, "name", n) for n, c in constraints.items()})
    for n in range(nmax + 1):
        rep.rows.append(Comb5Row(n, t1[n + s1], t2[n + s2], single[n], t3[n + s3],
                                 sl.coeff(n), sr.coeff(n)))
    return rep


def reading_disagreements(variant: str, nmax: int, records=None) -> list[int]:
    """n at which the literal readings of the marked families break the balance."""
    v = VARIANTS[variant.upper()]
    used = {x for spec in v.lhs_pairs + (v.rhs_pair,) for x in spec[:2]}
    overrides = {k: c for k, c in LITERAL_READINGS.items() if k in used}
    if not overrides:
        return []
    rep = verify_comb5(variant, nmax, records, overrides)
    return [r.n for r in rep.rows if not r.balanced]

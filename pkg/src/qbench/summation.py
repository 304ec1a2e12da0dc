"""Unilateral, bilateral and multilateral sums described as data.

A :class:`SumSpec` is a list of :class:`Summand` product forms evaluated at
each lattice point ``k``. Term valuations come from monomial bookkeeping
(see :class:`qbench.qfactorial.Run`), so the truncation search never expands
a term it will discard.

Truncation is certified empirically. One-dimensional sums are scanned
outward along each unbounded ray until ``margin`` consecutive terms lie
beyond the working order, then probed out to twice that distance.
Higher-dimensional sums enumerate a box ``[-K, K]^d`` intersected with the
range and double ``K`` until a doubling adds no term inside the window.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import FormalDivergence, NonIntegralExponent, PoleAtTerm
from .qfactorial import INFINITE, FactoredTerm, Run, poch_run
from .series import Exact, Monomial, QSeries, _canon

DEFAULT_MARGIN = 5
DEFAULT_CAP_FACTOR = 10


@dataclass(frozen=True)
class AffineForm:
    """``constant + sum_j coeffs[j] * k_j`` with integer coefficients."""

    constant: int = 0
    coeffs: tuple = ()

    def at(self, k: Sequence[int]) -> int:
        v = self.constant
        for c, x in zip(self.coeffs, k):
            if c:
                v += c * x
        return v

    def is_constant(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class QuadraticForm:
    """``k^T quad k + linear . k + constant`` with rational entries, integral on the range."""

    quad: tuple = ()
    linear: tuple = ()
    constant: Exact = 0

    def at(self, k: Sequence[int]) -> int:
        v = Fraction(self.constant)
        for j, row in enumerate(self.quad):
            kj = k[j]
            if not kj:
                continue
            for l, a in enumerate(row):
                if a:
                    v += a * kj * k[l]
        for b, x in zip(self.linear, k):
            if b:
                v += b * x
        if v.denominator != 1:
            raise NonIntegralExponent(f"q-exponent evaluates to {v} at k={tuple(k)}", point=list(k))
        return v.numerator

    def leading_minors(self) -> list:
        n = len(self.quad)
        return [_det([[Fraction(self.quad[i][j]) for j in range(m)] for i in range(m)]) for m in range(1, n + 1)]

    def is_positive_definite(self) -> bool:
        return bool(self.quad) and all(m > 0 for m in self.leading_minors())


def _det(a: list) -> Fraction:
    n = len(a)
    a = [row[:] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


@dataclass(frozen=True)
class PochFactor:
    """``(arg * q^argForm(k); q^base)_{length(k)}``; length None means infinite."""

    arg: Monomial
    arg_form: AffineForm
    base: int
    length: AffineForm | None

    def run(self, k: Sequence[int], sign: int) -> Run | None:
        n = INFINITE if self.length is None else self.length.at(k)
        a = Monomial(self.arg.coeff, self.arg.exp + self.arg_form.at(k))
        return poch_run(a, self.base, n, sign)


@dataclass(frozen=True)
class Summand:
    """``coeff * q^qexp(k) * prod_j bases[j]^k_j * prod numer / prod denom``."""

    coeff: Exact
    qexp: QuadraticForm
    numer: tuple = ()
    denom: tuple = ()
    bases: tuple = ()   # per-index exact coefficients; their q-parts live in qexp

    def factored(self, k: Sequence[int]) -> FactoredTerm:
        c = Fraction(self.coeff)
        for b, x in zip(self.bases, k):
            if b != 1 and x:
                c *= Fraction(b) ** x
        t = FactoredTerm(_canon(c), self.qexp.at(k))
        for f in self.numer:
            r = f.run(k, +1)
            if r is not None:
                t.runs.append(r)
        for f in self.denom:
            r = f.run(k, -1)
            if r is not None:
                t.runs.append(r)
        return t


@dataclass(frozen=True)
class RangeSpec:
    """``upper >= k_1 >= k_2 >= ... >= k_d >= lower``; either bound may be None."""

    dim: int = 1
    lower: int | None = None
    upper: int | None = None

    @property
    def kind(self) -> str:
        if self.dim > 1:
            return "LATTICE"
        if self.lower is not None and self.upper is not None:
            return "FINITE"
        if self.lower is None and self.upper is None:
            return "BILATERAL"
        return "UNILATERAL"

    def contains(self, k: Sequence[int]) -> bool:
        if self.upper is not None and k[0] > self.upper:
            return False
        if self.lower is not None and k[-1] < self.lower:
            return False
        return all(k[j] >= k[j + 1] for j in range(len(k) - 1))


UNILATERAL = RangeSpec(1, 0, None)
BILATERAL = RangeSpec(1, None, None)


def lattice(dim: int, lower: int | None = None, upper: int | None = None) -> RangeSpec:
    return RangeSpec(dim, lower, upper)


@dataclass(frozen=True)
class SumSpec:
    range: RangeSpec
    summands: tuple
    index_names: tuple = ()

    @property
    def dim(self) -> int:
        return self.range.dim


@dataclass
class ConvergenceCertificate:
    """Evidence that every omitted term lies beyond the working order."""

    probed_range: int
    min_excess_valuation: int | None
    monotone_beyond: int
    terms_included: int
    terms_probed: int
    method: str
    positive_definite: bool | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class EngineConfig:
    margin: int = DEFAULT_MARGIN
    cap_factor: float = DEFAULT_CAP_FACTOR

    def cap(self, order: int) -> int:
        # the order term admits sums whose valuations grow only linearly in |k|
        return math.ceil(self.cap_factor * math.sqrt(max(order, 1))) + max(order, 0) + 2 * self.margin


def term_factored(s: SumSpec, k: Sequence[int]) -> list:
    out = []
    for sm in s.summands:
        t = sm.factored(k)
        st = t.status()
        if st == "pole":
            raise PoleAtTerm(f"a denominator Pochhammer vanishes at k={tuple(k)}", point=list(k))
        if st == "ok":
            out.append(t)
    return out


def term_valuation(s: SumSpec, k: Sequence[int]) -> int | None:
    """Valuation of the k-th summand (None when it vanishes identically).

    Exact for single-summand specs; with several summands it is the minimum
    over them, a lower bound that is exact unless leading terms cancel.
    """
    vals = [t.profile()[1] for t in term_factored(s, k)]
    return min(vals) if vals else None


def term_eval(s: SumSpec, k: Sequence[int], order: int) -> QSeries:
    parts = [t.expand(order) for t in term_factored(s, k)]
    return add_all(parts, order)


def add_all(parts: Sequence[QSeries], order: int) -> QSeries:
    """Sum of many series in one allocation; result order is the min of the inputs."""
    if not parts:
        return QSeries.zero(order)
    order = min([order] + [p.order for p in parts])
    lo = min(p.vmin for p in parts)
    if lo > order:
        return QSeries.zero(order)
    buf = [0] * (order - lo + 1)
    for p in parts:
        off = p.vmin - lo
        for j, c in enumerate(p.coeffs[: order - p.vmin + 1]):
            buf[off + j] += c
    return QSeries(lo, order, buf)


def _beyond(v: int | None, order: int) -> bool:
    return v is None or v > order


def _scan_ray(s: SumSpec, start: int, step: int, stop: int | None, order: int,
              cfg: EngineConfig, keep: dict) -> tuple[int, int | None, int]:
    """Walk k = start, start+step, ... collecting terms with valuation <= order.

    Returns (furthest |k| probed, smallest excess valuation seen, cutoff).
    """
    cap = cfg.cap(order)
    k = start
    run_beyond = 0
    min_excess = None
    probed = 0
    cutoff = None
    while True:
        if stop is not None and (k - stop) * step > 0:
            return probed, min_excess, (cutoff if cutoff is not None else abs(k))
        if abs(k) > cap:
            if cutoff is not None:
                # cutoff found; the confirming probe is clamped to the cap
                return probed, min_excess, cutoff
            raise FormalDivergence(
                f"term valuations do not exceed order {order} within |k| <= {cap}",
                order=order, cap=cap, direction=step)
        v = term_valuation(s, (k,))
        probed = max(probed, abs(k))
        if _beyond(v, order):
            if v is not None:
                min_excess = v - order if min_excess is None else min(min_excess, v - order)
            run_beyond += 1
            if run_beyond >= cfg.margin:
                if cutoff is None:
                    cutoff = abs(k)
                    probe_to = max(2 * abs(k), abs(k) + cfg.margin)
                if abs(k) >= probe_to:
                    return probed, min_excess, cutoff
        else:
            keep[(k,)] = v
            run_beyond = 0
            cutoff = None
        k += step


def _certify_1d(s: SumSpec, order: int, cfg: EngineConfig) -> tuple[dict, ConvergenceCertificate]:
    r = s.range
    keep: dict = {}
    probed_total = 0
    if r.lower is not None and r.upper is not None:
        for k in range(r.lower, r.upper + 1):
            v = term_valuation(s, (k,))
            if not _beyond(v, order):
                keep[(k,)] = v
        cert = ConvergenceCertificate(max(abs(r.lower), abs(r.upper)), None, max(abs(r.lower), abs(r.upper)),
                                      len(keep), r.upper - r.lower + 1, "finite")
        return keep, cert
    rays = []
    if r.lower is not None:
        rays.append((r.lower, 1, None))
    elif r.upper is not None:
        rays.append((r.upper, -1, None))
    else:
        rays.append((0, 1, None))
        rays.append((-1, -1, None))
    probed = 0
    excess = None
    beyond = 0
    for start, step, stop in rays:
        p, e, c = _scan_ray(s, start, step, stop, order, cfg, keep)
        probed = max(probed, p)
        beyond = max(beyond, c)
        if e is not None:
            excess = e if excess is None else min(excess, e)
        probed_total += p + 1
    return keep, ConvergenceCertificate(probed, excess, beyond, len(keep), probed_total, "ray-scan")


def _lattice_points(dim: int, lo: int, hi: int, rng: RangeSpec) -> Iterator[tuple]:
    """Points hi >= k_1 >= ... >= k_d >= lo, clipped to the range bounds."""
    if rng.upper is not None:
        hi = min(hi, rng.upper)
    if rng.lower is not None:
        lo = max(lo, rng.lower)

    def rec(prefix, top, left):
        if left == 0:
            yield tuple(prefix)
            return
        for x in range(top, lo - 1, -1):
            prefix.append(x)
            yield from rec(prefix, x, left - 1)
            prefix.pop()

    yield from rec([], hi, dim)


def _certify_lattice(s: SumSpec, order: int, cfg: EngineConfig) -> tuple[dict, ConvergenceCertificate]:
    r = s.range
    d = r.dim
    cap = cfg.cap(order)
    keep: dict = {}
    seen: set = set()
    excess = None
    K = 2
    last_hit = 0
    probed = 0
    finite = r.lower is not None and r.upper is not None
    while True:
        new_hits = 0
        for k in _lattice_points(d, -K, K, r):
            if k in seen:
                continue
            seen.add(k)
            probed += 1
            v = term_valuation(s, k)
            if _beyond(v, order):
                if v is not None:
                    excess = v - order if excess is None else min(excess, v - order)
            else:
                keep[k] = v
                new_hits += 1
                last_hit = max(last_hit, max(abs(x) for x in k))
        if finite and (r.upper <= K and r.lower >= -K):
            break
        if new_hits == 0 and K > 2:
            break
        if new_hits == 0 and K == 2 and keep:
            K *= 2
            continue
        if K >= cap:
            raise FormalDivergence(f"lattice sum still has terms of valuation <= {order} at box size {K}",
                                   order=order, box=K)
        # the last box is clamped to the cap rather than overshooting it
        K = min(2 * K, cap)
    qf = s.summands[0].qexp if s.summands else None
    pd = qf.is_positive_definite() if qf is not None and qf.quad else None
    return keep, ConvergenceCertificate(K, excess, last_hit, len(keep), probed, "box-doubling", pd)


def certify(s: SumSpec, order: int, cfg: EngineConfig | None = None) -> tuple[dict, ConvergenceCertificate]:
    """Lattice points whose terms reach the window, plus the cutoff evidence."""
    cfg = cfg or EngineConfig()
    if s.dim == 1:
        return _certify_1d(s, order, cfg)
    return _certify_lattice(s, order, cfg)


def eval_sum(s: SumSpec, order: int, cfg: EngineConfig | None = None) -> tuple[QSeries, ConvergenceCertificate]:
    keep, cert = certify(s, order, cfg)
    parts = []
    for k in sorted(keep):
        parts.extend(t.expand(order) for t in term_factored(s, k))
    return add_all(parts, order), cert


def eval_multilateral(s: SumSpec, order: int, cfg: EngineConfig | None = None) -> tuple[QSeries, ConvergenceCertificate]:
    if s.dim < 2 and s.range.kind != "LATTICE":
        # a one-dimensional lattice is just a bilateral sum
        return eval_sum(s, order, cfg)
    keep, cert = _certify_lattice(s, order, cfg or EngineConfig())
    parts = []
    for k in sorted(keep):
        parts.extend(t.expand(order) for t in term_factored(s, k))
    return add_all(parts, order), cert

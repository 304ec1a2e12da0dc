"""Identity registry and coefficient-comparison verifier."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from typing import Iterable, Sequence

import yaml

from ..dsl import compile_expr, monomial, parse
from ..dsl.parser import tokenize
from ..errors import CatalogCorrupt, QBenchError
from ..series import Monomial, format_rational
from ..summation import EngineConfig

DEFAULT_ORDER = 200
GROUPS = ("parameter-free", "parametrized", "transformation", "multilateral")


@dataclass(frozen=True)
class Sample:
    name: str
    values: tuple          # ((param, source text), ...)

    def bindings(self) -> dict:
        return {k: monomial(v) for k, v in self.values}

    def to_dict(self) -> dict:
        return {"name": self.name, **dict(self.values)}


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    citation: str
    lhs: str
    rhs: str
    group: str
    order: int = DEFAULT_ORDER
    params: tuple = ()
    samples: tuple = ()
    ints: tuple = ()           # ((name, value), ...) fixed family integers
    excluded: tuple = ()       # declared pole values, informational
    q_scale: int = 1
    family: str = ""
    note: str = ""

    @property
    def int_params(self) -> dict:
        return dict(self.ints)

    def sample_list(self) -> list:
        return list(self.samples) if self.samples else [Sample("-", ())]

    def get_sample(self, name: str | None) -> Sample:
        if name is None:
            return self.sample_list()[0]
        for s in self.sample_list():
            if s.name == name:
                return s
        raise KeyError(f"record {self.id} has no sample {name!r}")

    def sides(self, sample: Sample):
        b = sample.bindings()
        ints = self.int_params
        return (compile_expr(self.lhs, b, ints, self.q_scale),
                compile_expr(self.rhs, b, ints, self.q_scale))


@dataclass
class VerificationReport:
    id: str
    sample: str
    order: int
    verdict: str                       # PASS | FAIL | ERROR
    first_mismatch: int | None = None
    lhs_coeff: str | None = None
    rhs_coeff: str | None = None
    error: dict | None = None
    certificates: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        s = f"{self.verdict:5} {self.id} [{self.sample}] order={self.order}"
        if self.verdict == "FAIL":
            s += f" first mismatch at q^{self.first_mismatch}: lhs={self.lhs_coeff} rhs={self.rhs_coeff}"
        elif self.verdict == "ERROR":
            s += f" {self.error.get('kind')}: {self.error.get('message')}"
        return s + f" ({self.elapsed:.2f}s)"


# -- loading -----------------------------------------------------------------------

_REQUIRED = ("id", "citation", "lhs", "rhs", "group")


def _expand_grid(grid: dict) -> list[dict]:
    """``{r: [2, 3], i: "1..r"}`` -> list of assignments; later keys may use earlier ones."""
    combos = [{}]
    for name, spec in grid.items():
        nxt = []
        for c in combos:
            if isinstance(spec, list):
                vals = spec
            elif isinstance(spec, str) and ".." in spec:
                lo, hi = spec.split("..")
                vals = range(_int_expr(lo, c), _int_expr(hi, c) + 1)
            else:
                vals = [int(spec)]
            nxt.extend({**c, name: int(v)} for v in vals)
        combos = nxt
    return combos


def _int_expr(src: str, env: dict) -> int:
    from ..dsl.compile import Scope, scalar
    return scalar(parse(src), Scope({}, env, {})).int_value("grid bound")


def _fmt_id(template: str, env: dict) -> str:
    return template.format(**env)


def _record(entry: dict, ints: dict, where: str) -> IdentityRecord:
    for key in _REQUIRED:
        if not entry.get(key):
            raise CatalogCorrupt(f"{where}: missing field {key!r}")
    if entry["group"] not in GROUPS:
        raise CatalogCorrupt(f"{where}: unknown group {entry['group']!r}")
    params = tuple(entry.get("params", ()))
    samples = []
    for s in entry.get("samples", ()):
        s = dict(s)
        name = str(s.pop("name", ",".join(f"{k}={v}" for k, v in s.items())))
        if set(s) != set(params):
            raise CatalogCorrupt(f"{where}: sample {name} binds {sorted(s)}, expected {sorted(params)}")
        samples.append(Sample(name, tuple((k, str(s[k])) for k in params)))
    if params and len(samples) < 3 and not entry.get("allow_few_samples"):
        raise CatalogCorrupt(f"{where}: parametrized record needs at least 3 samples")
    if not params and samples:
        raise CatalogCorrupt(f"{where}: samples given for a record without parameters")
    for side in ("lhs", "rhs"):
        try:
            parse(entry[side])
        except QBenchError as e:
            raise CatalogCorrupt(f"{where}: {side} does not parse: {e}") from e
    order = int(entry.get("order", DEFAULT_ORDER))
    if order < 1:
        raise CatalogCorrupt(f"{where}: order must be positive")
    return IdentityRecord(
        id=_fmt_id(entry["id"], ints), citation=str(entry["citation"]),
        lhs=entry["lhs"], rhs=entry["rhs"], group=entry["group"], order=order,
        params=params, samples=tuple(samples), ints=tuple(sorted(ints.items())),
        excluded=tuple(str(x) for x in entry.get("excluded", ())),
        q_scale=int(entry.get("q_scale", 1)), family=entry.get("family", entry["id"]),
        note=entry.get("note", ""))


def parse_catalog(text: str, source: str = "<catalog>") -> list[IdentityRecord]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise CatalogCorrupt(f"{source}: not valid YAML: {e}") from e
    if not isinstance(data, dict) or not isinstance(data.get("records"), list):
        raise CatalogCorrupt(f"{source}: expected a mapping with a 'records' list")
    out = []
    for n, entry in enumerate(data["records"]):
        if not isinstance(entry, dict):
            raise CatalogCorrupt(f"{source}: entry {n} is not a mapping")
        where = f"{source}: entry {n} ({entry.get('id', '?')})"
        grid = entry.get("grid")
        for ints in (_expand_grid(grid) if grid else [dict(entry.get("ints", {}))]):
            if grid and entry.get("ints"):
                ints = {**entry["ints"], **ints}
            out.append(_record(entry, ints, where))
    ids = [r.id for r in out]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise CatalogCorrupt(f"{source}: duplicate ids {sorted(dup)}")
    return out


_CACHE: list | None = None


def catalog_path() -> str:
    return str(resources.files(__package__).joinpath("catalog.yaml"))


def catalog_load(path: str | None = None) -> list[IdentityRecord]:
    global _CACHE
    if path is None and _CACHE is not None:
        return list(_CACHE)
    p = path or catalog_path()
    with open(p, encoding="utf-8") as fh:
        recs = parse_catalog(fh.read(), os.path.basename(p))
    if path is None:
        _CACHE = recs
    return list(recs)


def get_record(rid: str, records: Sequence[IdentityRecord] | None = None) -> IdentityRecord:
    for r in records if records is not None else catalog_load():
        if r.id == rid:
            return r
    raise KeyError(f"no catalog record {rid!r}")


# -- verification ------------------------------------------------------------------

def verify_record(rec: IdentityRecord, order: int | None = None, sample: str | None = None,
                  cfg: EngineConfig | None = None) -> VerificationReport:
    cfg = cfg or EngineConfig()
    smp = rec.get_sample(sample)
    n = order if order is not None else rec.order
    t0 = time.perf_counter()
    certs: list = []
    try:
        lhs, rhs = rec.sides(smp)
        a = lhs.series(n, cfg, certs)
        b = rhs.series(n, cfg, certs)
    except QBenchError as e:
        return VerificationReport(rec.id, smp.name, n, "ERROR", error=e.to_dict(),
                                  certificates=certs, elapsed=time.perf_counter() - t0)
    e = a.first_mismatch(b, n)
    rep = VerificationReport(rec.id, smp.name, n, "PASS", certificates=certs,
                             elapsed=time.perf_counter() - t0)
    if e is not None:
        rep.verdict = "FAIL"
        rep.first_mismatch = e
        rep.lhs_coeff = format_rational(a.coeff(e))
        rep.rhs_coeff = format_rational(b.coeff(e))
    return rep


def verify(rid: str, order: int | None = None, sample: str | None = None,
           records: Sequence[IdentityRecord] | None = None,
           cfg: EngineConfig | None = None) -> VerificationReport:
    return verify_record(get_record(rid, records), order, sample, cfg)


def _job(args):
    rec, order, sample, cfg = args
    return verify_record(rec, order, sample, cfg)


def schedule(records: Iterable[IdentityRecord], order: int | None = None) -> list:
    jobs = []
    for r in records:
        for s in r.sample_list():
            jobs.append((r, order, s.name))
    return jobs


def verify_all(order: int | None = None, records: Sequence[IdentityRecord] | None = None,
               cfg: EngineConfig | None = None, workers: int | None = None) -> list[VerificationReport]:
    """Every record at every sample; reports sorted by (id, sample)."""
    recs = list(records) if records is not None else catalog_load()
    cfg = cfg or EngineConfig()
    jobs = [(r, order, s, cfg) for r, order, s in schedule(recs, order)]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        # longest jobs first keeps the pool busy
        jobs.sort(key=lambda j: -(j[1] or j[0].order) * len(j[0].lhs))
        with ProcessPoolExecutor(workers) as ex:
            reports = list(ex.map(_job, jobs, chunksize=1))
    else:
        reports = [_job(j) for j in jobs]
    reports.sort(key=lambda r: (r.id, r.sample))
    return reports


# -- mutation support ----------------------------------------------------------------

def mutate_integer(rec: IdentityRecord, side: str, old: int, new: int, occurrence: int = 0) -> IdentityRecord:
    """Copy of ``rec`` with the ``occurrence``-th integer literal ``old`` on ``side`` replaced by ``new``."""
    src = getattr(rec, side)
    seen = 0
    for tok in tokenize(src):
        if tok.kind == "num" and int(tok.text) == old:
            if seen == occurrence:
                mutated = src[:tok.pos] + str(new) + src[tok.pos + len(tok.text):]
                return replace(rec, **{side: mutated})
            seen += 1
    raise ValueError(f"{rec.id}: no occurrence {occurrence} of {old} on the {side}")

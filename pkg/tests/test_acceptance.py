"""Acceptance suite. Each test prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Run with ``pytest -s tests/test_acceptance.py`` to see them as they come.

The full catalog run is serial and takes a few minutes.
"""
import itertools
import time
from dataclasses import replace
from fractions import Fraction

import pytest

import oracle
from qbench.catalog import catalog_load, get_record, mutate_integer, verify_all, verify_record
from qbench.dsl import evaluate
from qbench.errors import ZeroFactorInDenominator
from qbench.partitions import verify_comb5, verify_macmahon_schur
from qbench.qfactorial import PochSpec, jtp_product, jtp_theta, poch_eval
from qbench.series import Monomial
from qbench.summation import EngineConfig
from test_catalog import R2_PAIRS, R2_SAMPLED

LINES: list[str] = []
CFG = EngineConfig()


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print("\n" + line)
    assert ok, line


def failures(reports) -> list[str]:
    return [r.line() for r in reports if not r.ok]


def group(name: str) -> list:
    return [r for r in catalog_load() if r.group == name]


# 1 -------------------------------------------------------------------------------

def test_parameter_free_records_to_order_200():
    recs = group("parameter-free")
    t0 = time.perf_counter()
    reps = verify_all(200, recs, workers=1)
    dt = time.perf_counter() - t0
    bad = failures(reps)
    report(1, not bad and len(reps) == len(recs) and dt < 600,
           f"{len(reps)} parameter-free records exact through q^200 in {dt:.0f}s {bad[:3]}")


# 2 -------------------------------------------------------------------------------

def test_parametrized_records():
    recs = group("parametrized")
    for r in recs:
        assert r.order >= 120 and len(r.samples) >= 3, r.id
        values = [v for s in r.samples for _, v in s.values]
        # some sample binds a plain constant, some a power of q
        assert any("q" in v for v in values) and any("q" not in v for v in values), r.id
    reps = verify_all(None, recs, workers=1)
    bad = failures(reps)
    report(2, not bad, f"{len(recs)} records, {len(reps)} samples at order >= 120 {bad[:3]}")


# 3 -------------------------------------------------------------------------------

def test_transformations():
    recs = [r for r in group("transformation") if r.id in ("bil68", "bil58") or r.id.startswith("aab(")]
    ids = {r.id for r in recs}
    assert {"bil68", "bil58"} <= ids
    assert sum(i.startswith("aab(") for i in ids) == 2 * 7 + 3 * 7     # r = 2, 3; all i; n = 0..6
    for r in recs:
        assert len(r.samples) >= 3, r.id
    reps = verify_all(80, recs, workers=1)
    bad = failures(reps)
    report(3, not bad, f"{len(recs)} records, {len(reps)} samples at order 80 {bad[:3]}")


# 4 -------------------------------------------------------------------------------

def _lhs(rid: str, order: int, sample: str | None = None):
    rec = get_record(rid)
    lhs, _ = rec.sides(rec.get_sample(sample))
    return lhs.series(order, CFG, [])


def test_multilateral_suite():
    recs = group("multilateral") + [r for r in group("transformation") if r.id.startswith("mult")]
    reps = verify_all(60, recs, workers=1)
    bad = failures(reps)
    rs = {int(r.int_params["r"]) for r in recs if "r" in r.int_params}
    assert rs == {2, 3, 4}

    mismatched = []
    for multi, bil in R2_PAIRS:
        if _lhs(multi, 60) != _lhs(bil, 60):
            mismatched.append(multi)
    for multi, bil in R2_SAMPLED:
        for s in get_record(multi).samples:
            if _lhs(multi, 60, s.name) != _lhs(bil, 60, s.name):
                mismatched.append(f"{multi}[{s.name}]")
    for s in get_record("mbress(r=2)").samples:
        one_dim = evaluate("sum(k = -inf..inf){ q^(k^2) * z^k / qp(z*q^2; q^2)_k }", 60, s.bindings())
        if _lhs("mbress(r=2)", 60, s.name) != one_dim:
            mismatched.append(f"mbress(r=2)[{s.name}]")
    pairs = len(R2_PAIRS) + len(R2_SAMPLED) + 1
    report(4, not bad and not mismatched,
           f"{len(recs)} records, {len(reps)} samples at order 60; {pairs} r=2 equivalences "
           f"{bad[:3]} {mismatched[:3]}")


# 5 -------------------------------------------------------------------------------

JTP_CASES = [(Monomial(2, 0), 1), (Monomial(-1, 0), 2), (Monomial(Fraction(1, 3), 0), 1),
             (Monomial(3, 1), 1), (Monomial(1, 1), 2), (Monomial(-2, -1), 1),
             (Monomial(Fraction(5, 2), 2), 3), (Monomial(1, -3), 2), (Monomial(Fraction(-1, 4), 1), 4),
             (Monomial(7, 0), 5), (Monomial(1, 2), 5), (Monomial(-3, -2), 3)]


def test_triple_product_oracle():
    bad = [(str(z), b) for z, b in JTP_CASES if jtp_theta(z, b, 200) != jtp_product(z, b, 200)]
    report(5, not bad and len(JTP_CASES) >= 10, f"{len(JTP_CASES)} (z, base) pairs through q^200 {bad}")


# 6 -------------------------------------------------------------------------------

COEFFS = [1, -1, 2, Fraction(1, 2), Fraction(-1, 3)]
EXPS = range(-3, 4)
BASES = (1, 2, 3)
ORDER = 30


def _negative_index_cases():
    """(a; q^b)_-n * (a q^-bn; q^b)_n = 1, the second factor multiplied out by hand."""
    checked = failed = 0
    for c, e, b, n in itertools.product(COEFFS, EXPS, BASES, range(1, 5)):
        shifted = oracle.finite_poch(c, e - b * n, b, n)
        if not shifted:
            continue
        v = min(shifted)
        try:
            neg = poch_eval(PochSpec(Monomial(c, e), b, -n), ORDER - v)
        except ZeroFactorInDenominator:
            continue
        prod = oracle.mul(oracle.as_dict(neg, ORDER - v), shifted, ORDER)
        checked += 1
        failed += oracle.window(prod, -1000, ORDER) != {0: 1}
    return checked, failed


def _splitting_cases():
    """(a; q^b)_{m+n} = (a; q^b)_m (a q^bm; q^b)_n for m, n of either sign."""
    checked = failed = 0
    for c, e, b, m, n in itertools.product(COEFFS[:3], range(-2, 3), BASES, range(-3, 4), range(-3, 4)):
        a = Monomial(c, e)
        try:
            whole = poch_eval(PochSpec(a, b, m + n), ORDER)
            prod = poch_eval(PochSpec(a, b, m), ORDER) * poch_eval(PochSpec(a * Monomial(1, b * m), b, n), ORDER)
        except ZeroFactorInDenominator:
            continue
        hi = min(prod.order, whole.order)
        checked += 1
        failed += prod.truncate(hi) != whole.truncate(hi)
    return checked, failed


def test_pochhammer_laws():
    n1, f1 = _negative_index_cases()
    n2, f2 = _splitting_cases()
    report(6, n1 >= 200 and n2 >= 200 and not f1 and not f2,
           f"negative-index law {n1 - f1}/{n1}, splitting law {n2 - f2}/{n2}")


# 7 -------------------------------------------------------------------------------

def test_partition_interpretations():
    classical = {w: verify_macmahon_schur(w, 60) for w in "AB"}
    comb = {v: verify_comb5(v, 40) for v in "ABCD"}
    ok = all(all(r.ok for r in rows) and len(rows) == 61 for rows in classical.values())
    ok &= all(len(rep.rows) == 41 and all(r.balanced and r.series_ok for r in rep.rows) for rep in comb.values())
    # the classical counts also agree with the coin-change oracle
    ok &= [r.right for r in classical["A"]] == oracle.restricted_partitions(60, lambda p: p % 5 in (1, 4))
    ok &= [r.right for r in classical["B"]] == oracle.restricted_partitions(60, lambda p: p % 5 in (2, 3))
    report(7, ok, "MacMahon/Schur A, B for n <= 60; bilateral variants A-D for n <= 40, "
                  "enumeration balance and series agreement")


# 8 -------------------------------------------------------------------------------

def _product_dict(factors, upto):
    """Naive product for [(modulus, residue, sign)] over all parts m = residue mod modulus."""
    flat = [(1, m, s) for mod, res, s in factors for m in range(1, upto + 1) if m % mod == res % mod]
    return oracle.window(oracle.infinite_product(flat, upto), 0, upto)


def _first_difference(a: dict, b: dict, upto: int):
    return next((n for n in range(upto + 1) if a.get(n, 0) != b.get(n, 0)), None)


def _partition_difference(old, new, upto):
    a = oracle.restricted_partitions(upto, old)
    b = oracle.restricted_partitions(upto, new)
    return next(n for n in range(upto + 1) if a[n] != b[n])


def _bilrr_a_difference(upto):
    base = [(5, 4, 1), (25, 15, 1), (25, 0, 1), (5, 2, -1), (5, 3, -1)]
    return _first_difference(_product_dict(base + [(25, 10, 1)], upto),
                             _product_dict(base + [(25, 11, 1)], upto), upto)


# (record, side, old literal, new literal, occurrence, expected first mismatch)
MUTATIONS = [
    ("rr-a", "rhs", 4, 3, 0, 3),
    ("rr-b", "rhs", 3, 4, 0, _partition_difference(lambda p: p % 5 in (2, 3), lambda p: p % 5 in (2, 4), 60)),
    ("gg-a", "rhs", 7, 6, 0, _partition_difference(lambda p: p % 8 in (1, 4, 7), lambda p: p % 8 in (1, 4, 6), 60)),
    ("gg-b", "rhs", 5, 6, 0, _partition_difference(lambda p: p % 8 in (3, 4, 5), lambda p: p % 8 in (3, 4, 6), 60)),
    ("gollnitz", "rhs", 7, 5, 0,
     _partition_difference(lambda p: p % 8 in (2, 3, 7), lambda p: p % 8 in (2, 3, 5), 60)),
    ("bilrr-a", "rhs", 10, 11, 0, _bilrr_a_difference(60)),
]


@pytest.fixture(scope="module")
def parameter_free():
    return group("parameter-free")


def test_mutation_sensitivity(parameter_free):
    problems = []
    for rid, side, old, new, occ, want in MUTATIONS:
        recs = [mutate_integer(r, side, old, new, occ) if r.id == rid else r for r in parameter_free]
        reps = verify_all(60, recs, workers=1)
        fails = [r for r in reps if r.verdict != "PASS"]
        if len(fails) != 1 or fails[0].id != rid or fails[0].verdict != "FAIL" or fails[0].first_mismatch != want:
            problems.append((rid, want, [(f.id, f.verdict, f.first_mismatch) for f in fails]))
    assert MUTATIONS[0][-1] == 3
    report(8, not problems and len(MUTATIONS) >= 5,
           f"{len(MUTATIONS)} single-literal mutations, each exactly one FAIL at the expected exponent {problems}")


def test_mutation_only_touches_one_literal():
    rec = get_record("rr-a")
    mutated = mutate_integer(rec, "rhs", 4, 3)
    assert replace(mutated, rhs=rec.rhs) == rec and mutated.rhs == "1 / qp(q, q^3; q^5)_inf"
    assert verify_record(mutated, 10).first_mismatch == 3

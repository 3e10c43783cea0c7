"""Acceptance criteria 1-10, one PASS/FAIL line each in the terminal summary.

Criteria with a clause that cannot hold as worded are split: the attainable
part must pass, the unattainable clause is a strict xfail.
"""

import json
import math
import os
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from quasisubfield.algebra import FpPoly, ext_field_make, format_poly, x_power_order
from quasisubfield.ecdlp import (
    Curve,
    bsgs,
    build_factor_base,
    complexity_estimate,
    default_demo_qsp,
    exponent_table,
    find_prime_order_curve,
    generator,
    generic_threshold,
    index_calculus,
    run_demo,
    validate_s3,
)
from quasisubfield.families import (
    gen_mult,
    heuristic_density,
    mersenne_divisor_count,
    mersenne_sparse_enumerate,
    mult_root_count,
    sparsity,
)
from quasisubfield.qsp import (
    LinearizedQsp,
    linearize,
    min_n,
    root_count_with_route,
    search_representatives,
    split_test_companion,
    split_test_div,
    split_test_div_linearized,
    table_columns,
    trinomial_classification_check,
)
from quasisubfield.symbolic import (
    chen_louck_entry,
    identity_representable,
    sym_companion,
    sym_powers,
    witness_index,
)

FIXTURES = Path(__file__).parent / "fixtures"
WORKERS = os.cpu_count() or 1
RESULTS: dict[str, bool] = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is None:
        return
    reporter.write_line("")
    by_criterion: dict[int, list[tuple[str, bool]]] = {}
    for label, ok in RESULTS.items():
        by_criterion.setdefault(int(label.split()[1].rstrip("ab:")), []).append((label, ok))
    for number in sorted(by_criterion):
        parts = by_criterion[number]
        verdict = "PASS" if all(ok for _, ok in parts) else "FAIL"
        detail = "; ".join(f"{label} {'PASS' if ok else 'FAIL'}" for label, ok in parts)
        reporter.write_line(f"criterion {number}: {verdict}  ({detail})")


@contextmanager
def criterion(label: str, capsys, *, expected_failure: bool = False):
    """Record and print PASS/FAIL for one criterion (or one clause of it)."""
    try:
        yield
    except AssertionError:
        RESULTS[label] = False
        note = " (strict xfail, analysis in the decisions ledger)" if expected_failure else ""
        with capsys.disabled():
            print(f"\n{label}: FAIL{note}")
        raise
    RESULTS[label] = True
    with capsys.disabled():
        print(f"\n{label}: PASS")


def timed(limit: float):
    started = time.perf_counter()
    return lambda: (elapsed := time.perf_counter() - started) <= limit or pytest.fail(
        f"runtime {elapsed:.1f}s over the {limit:.0f}s budget"
    )


# ---------------------------------------------------------------- 1


SCOPE = {2: (16, (0, 1)), 3: (10, (0, 1, -1)), 5: (8, (0, 1, -1)), 7: (8, (0, 1, -1))}


def in_scope(row) -> bool:
    p = row["p"]
    n_prime_max, coeffs = SCOPE[p]
    allowed = {c % p for c in coeffs}
    return len(row["coeffs"]) - 1 <= n_prime_max and set(row["coeffs"]) <= allowed


def test_criterion_1_table_reproduction(capsys):
    check_time = timed(600)
    rows = json.loads((FIXTURES / "table_b1.json").read_text())["rows"]
    with criterion("criterion 1 table rows", capsys):
        found = {}
        for p, (n_prime_max, coeffs) in SCOPE.items():
            for rec in search_representatives(p, n_prime_max, coeffs, workers=WORKERS):
                found[(p, format_poly(rec.f), rec.n)] = rec
        scoped = [r for r in rows if in_scope(r)]
        assert scoped
        for row in scoped:
            rec = found.get((row["p"], row["f"], row["n"]))
            assert rec is not None, row
            assert rec.beta == Fraction(rec.ell * rec.n, rec.n_prime**2)
            assert abs(float(rec.beta) - row["beta"]) <= 0.1, row
            t1, t2, t3 = table_columns(rec.p, rec.tags)
            assert (t1, t2) == (row["T1"], row["T2"]), (row, rec.tags)
            shown = format_poly(rec.inverse) if t3 and rec.inverse is not None else None
            assert shown == row["T3"], (row, rec.tags)
        check_time()


# ---------------------------------------------------------------- 2


def test_criterion_2_three_quarters_floor(capsys):
    check_time = timed(60)
    with criterion("criterion 2 beta floor", capsys):
        for p in (2, 3):
            for n_prime in range(1, 7):
                total = (p - 1) * p ** (n_prime - 1)
                for idx in range(total):
                    a0, rest = divmod(idx, p ** (n_prime - 1))
                    coeffs = [a0 + 1] + [(rest // p**j) % p for j in range(n_prime - 1)] + [1]
                    f = FpPoly(p, coeffs)
                    ell = max(i for i in range(n_prime) if f[i]) if n_prime > 1 else 0
                    if ell < 1:
                        continue
                    # Every n with ell*n/n'^2 < 3/4.
                    for n in range(1, -(-3 * n_prime * n_prime // (4 * ell))):
                        assert not split_test_div(f, n), (f, n)
            recs = search_representatives(p, 6, None, workers=WORKERS)
            assert all(r.beta >= Fraction(3, 4) for r in recs)
        for p in (2, 3, 5, 7):
            equality = [r for r in search_representatives(p, 2, None, Fraction(3, 4)) if r.n == 3]
            assert any(r.beta == Fraction(3, 4) and r.ell == 1 for r in equality), p
        check_time()


# ---------------------------------------------------------------- 3


def test_criterion_3_symbolic_oracles(capsys):
    check_time = timed(120)
    with criterion("criterion 3 bound machinery", capsys):
        for n_prime in range(2, 9):
            for ell in range(1, n_prime):
                bound = min_n(n_prime, ell)
                assert bound == n_prime + (n_prime - ell) * ((n_prime - 1) // ell)
                powers = sym_powers(sym_companion(n_prime, ell), n_prime * n_prime)
                for n, power in enumerate(powers, start=1):
                    for i in range(n_prime):
                        for j in range(n_prime):
                            assert chen_louck_entry(n_prime, ell, n, i + 1, j + 1) is power[i][j], (n_prime, ell, n, i, j)
                    if n < bound:
                        assert not identity_representable(power)
                        i_n, symbol = witness_index(n, n_prime, ell)
                        assert power[i_n - 1][0] is symbol
        check_time()


# ---------------------------------------------------------------- 4


def random_instance(rng: random.Random) -> tuple[LinearizedQsp, FpPoly | None]:
    p = rng.choice([2, 3, 5])
    n_prime = rng.randrange(1, 6)
    n = rng.randrange(1, 21)
    if rng.random() < 0.5:
        f = FpPoly(p, [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(n_prime - 1)] + [1])
        # Bias toward splitting cases: half the time pick n as a multiple of ord(X mod f).
        if rng.random() < 0.5:
            k = x_power_order(f, 20)
            if k is not None:
                n = k * rng.randrange(1, 20 // k + 1)
        return linearize(f, n), f
    fld = ext_field_make(p, n, cap=5**20)
    lam = [fld.random(rng) for _ in range(n_prime)]
    if not any(not c.in_prime_field() for c in lam) and n > 1:
        lam[-1] = lam[-1] + fld.gen
    lam[0] = lam[0] or fld.one
    return LinearizedQsp(p, n, n_prime, tuple(lam)), None


def test_criterion_4_split_test_agreement(capsys):
    rng = random.Random(2024)
    disagreements = []
    twisted = splitting = 0
    with criterion("criterion 4 split-test agreement", capsys):
        for _ in range(1000):
            q, f = random_instance(rng)
            full = q.p**q.n_prime
            count, route = root_count_with_route(q, cap=5**20)
            companion = split_test_companion(q)
            verdicts = {
                "linearized division": split_test_div_linearized(q),
                "companion": companion == full,
                "root oracle": count == full,
            }
            if f is not None:
                verdicts["division"] = split_test_div(f, q.n)
            twisted += not q.in_prime_subfield
            splitting += verdicts["companion"]
            if len(set(verdicts.values())) != 1 or companion != count:
                disagreements.append((q, verdicts, companion, count, route))
        assert not disagreements, disagreements[:3]
        assert twisted > 300 and splitting > 100


# ---------------------------------------------------------------- 5


FURTHER_MULT_PARAMS = [
    (1, {"p": 2, "i": 1, "k": 3}),
    (1, {"p": 2, "i": 1, "k": 4}),
    (1, {"p": 2, "i": 2, "k": 2}),
    (1, {"p": 2, "i": 2, "k": 3}),
    (1, {"p": 2, "i": 3, "k": 2}),
    (1, {"p": 3, "i": 1, "k": 2}),
    (1, {"p": 3, "i": 1, "k": 3}),
    (1, {"p": 3, "i": 1, "k": 4}),
    (1, {"p": 3, "i": 2, "k": 2}),
    (1, {"p": 5, "i": 1, "k": 2}),
    (1, {"p": 5, "i": 1, "k": 3}),
    (1, {"p": 7, "i": 1, "k": 2}),
    (2, {"k": 2, "n": 4}),
    (2, {"k": 3, "n": 2}),
    (2, {"k": 3, "n": 3}),
    (2, {"k": 3, "n": 4}),
    (2, {"k": 4, "n": 2}),
    (2, {"k": 4, "n": 3}),
    (2, {"k": 5, "n": 2}),
    (3, {"k": 4, "n": 3}),
]


def test_criterion_5_multiplicative_families(capsys):
    check_time = timed(60)
    with criterion("criterion 5 multiplicative families", capsys):
        m = gen_mult(1, p=2, i=1, k=2)
        assert (m.p, m.n_prime, m.a) == (2, 3, 3)
        assert mult_root_count(m) == m.root_count == 6
        exact = 4 * math.log2(3) / 9
        assert abs(m.beta - exact) < 1e-9 and math.floor(exact * 1e5) == 70442
        for family, params, p in [(2, {"k": 2, "n": 2}, 5), (3, {"k": 2, "n": 3}, 7)]:
            m = gen_mult(family, **params)
            assert m.p == p
            assert (p**m.n - 1) % m.r == 0
            assert pow(p, m.n_prime, m.r) == m.a
            assert (p**m.n - 1) % (p**m.n_prime - m.a) == 0
            assert mult_root_count(m) == m.root_count
        assert len(FURTHER_MULT_PARAMS) == 20
        for family, params in FURTHER_MULT_PARAMS:
            m = gen_mult(family, **params)
            assert m.a**m.n <= m.p ** (m.n_prime**2)
            assert m.beta <= 1
            assert mult_root_count(m) == m.p**m.n_prime - m.a + 1, (family, params)
        check_time()


# ---------------------------------------------------------------- 6


def test_criterion_6_complexity_table(capsys):
    check_time = timed(1)
    fixture = json.loads((FIXTURES / "exponent_table.json").read_text())
    with criterion("criterion 6 complexity table", capsys):
        rows = exponent_table(c=fixture["c"])
        assert len(rows) == len(fixture["rows"]) == 7
        for row, want in zip(rows, fixture["rows"]):
            assert row["beta"] == want["beta"]
            assert abs(row["exponent"] - want["exponent"]) <= 0.001
        threshold = generic_threshold(4.876)
        assert threshold < 0.1026 and round(threshold, 3) == 0.103
        assert complexity_estimate(0.1025).beats_generic
        assert not complexity_estimate(0.1026).beats_generic
        check_time()


# ---------------------------------------------------------------- 7


@pytest.fixture(scope="module")
def demo_setup():
    fld = ext_field_make(5, 3)
    curve = find_prime_order_curve(fld)
    fb = build_factor_base(curve, default_demo_qsp(5, 3))
    return curve, fb


def test_criterion_7a_ecdlp_pipeline(capsys, demo_setup):
    check_time = timed(60)
    curve, fb = demo_setup
    with criterion("criterion 7a relations and 20/20 BSGS agreement", capsys):
        N = curve.point_count
        assert curve.order_factors == [N]
        assert str(fb.qsp) == "X^25+X^5+X"
        P = generator(curve)
        rng = random.Random(7)
        for inst in range(20):
            k_true = rng.randrange(1, N)
            Q = curve.mul(k_true, P)
            k, rels = index_calculus(P, Q, fb, seed=inst)
            assert len(rels) >= len(fb.F) + 10
            for rel in rels:
                lhs = curve.add(curve.mul(rel.a, P), curve.mul(rel.b, Q))
                assert lhs == curve.sum(fb.F[i] for i in rel.indices)
            assert k == bsgs(P, Q, N, curve) == k_true
        report = run_demo(p=5, n=3, seed=0)
        assert report.agreement == len(report.instances) == 20
        # The measured rate tracks the exact fraction of E covered by F + F.
        sums = {curve.add(a, b) for a in fb.F for b in fb.F}
        exact = len(sums) / N
        sigma = math.sqrt(exact * (1 - exact) / report.trials)
        assert abs(report.success_rate - exact) <= 3 * sigma
        check_time()


@pytest.mark.xfail(strict=True, reason="|F|^2/(2q) exceeds 1 at this size; see decisions ledger")
def test_criterion_7b_rate_matches_counting_formula(capsys, demo_setup):
    curve, fb = demo_setup
    with criterion("criterion 7b rate within 3 sigma of |F|^2/(2q)", capsys, expected_failure=True):
        report = run_demo(p=5, n=3, seed=0, instances=1)
        predicted = len(fb.F) ** 2 / (2 * curve.field.order)
        assert predicted <= 1, f"|F|^2/(2q) = {predicted:.3f} is not a probability"
        sigma = math.sqrt(predicted * (1 - predicted) / report.trials)
        assert abs(report.success_rate - predicted) <= 3 * sigma


# ---------------------------------------------------------------- 8


def test_criterion_8_summation_polynomial(capsys):
    with criterion("criterion 8 S_3 lift-sum equivalence", capsys):
        f7 = ext_field_make(7, 1)
        f25 = ext_field_make(5, 2)
        for curve in (Curve(f7, f7(1), f7(3)), Curve(f25, f25.from_int(1), f25.from_int(7))):
            report = validate_s3(curve)
            q = curve.field.order
            assert report["triples"] == q**3
            assert report["mismatches"] == 0


# ---------------------------------------------------------------- 9


def test_criterion_9a_mersenne_counterexample(capsys):
    check_time = timed(30)
    with criterion("criterion 9a sparse divisor exists where the heuristic predicts none", capsys):
        found = mersenne_sparse_enumerate(5, 7, 15)
        texts = {format_poly(f) for f in found}
        assert "X^15+X^7+X^3+X+1" in texts
        assert all(f.degree == 15 and sparsity(f) <= 7 for f in found)
        count, exists = heuristic_density(31, 15, 5, 7)
        assert not exists
        assert count == mersenne_divisor_count(5, 15) * 2.0 ** (7 - 15)
        check_time()


@pytest.mark.xfail(strict=True, reason="heuristic count at ell=7 is 20/256 = 0.078; see decisions ledger")
def test_criterion_9b_heuristic_count_below_one_percent(capsys):
    with criterion("criterion 9b heuristic expected count < 0.01", capsys, expected_failure=True):
        count, _ = heuristic_density(31, 15, 5, 7)
        assert count < 0.01, f"expected count {count:.4f}"


# ---------------------------------------------------------------- 10


def brute_trinomial_splits(fld, a, b, q: int, d: int) -> bool:
    target = q**d
    roots = sum(1 for x in fld.elements() if not (x ** (q**d) - b * x**q - a * x))
    return roots == target


def test_criterion_10a_trinomials_in_classified_range(capsys):
    check_time = timed(60)
    with criterion("criterion 10a classified range", capsys):
        bound = 2 * 2 - 2 + 1
        for n_tilde in range(2, 8):
            report = trinomial_classification_check(2, 1, 2, n_tilde)
            if n_tilde < bound:
                assert report.count == 0
            if n_tilde <= bound:
                assert report.in_classified_range and report.consistent
        at_bound = trinomial_classification_check(2, 1, 2, bound)
        assert at_bound.count > 0 and at_bound.consistent
        fld = ext_field_make(2, bound)
        brute = sum(
            brute_trinomial_splits(fld, a, b, 2, 2) for b in list(fld.elements())[1:] for a in fld.elements()
        )
        assert brute == at_bound.count
        check_time()


@pytest.mark.xfail(strict=True, reason="b != 0 splitting trinomials exist for n~ = 4..7; see decisions ledger")
def test_criterion_10b_splitting_only_at_bound(capsys):
    with criterion("criterion 10b b != 0 splits only at n~ = 3", capsys, expected_failure=True):
        counts = {nt: trinomial_classification_check(2, 1, 2, nt).count for nt in range(2, 8)}
        fld = ext_field_make(2, 4)
        sample = next((a, b) for b in list(fld.elements())[1:] for a in fld.elements()
                      if brute_trinomial_splits(fld, a, b, 2, 2))
        assert sample is not None
        assert [nt for nt, c in counts.items() if c] == [3], counts

"""Acceptance criteria, one test each.

Every test prints a single ``[criterion k] PASS|FAIL ...`` line (shown even
under output capture). Run the file directly to print the lines without
pytest.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from _helpers import exact_det, random_antisymmetric, random_convergent_spec, random_spec, window_edges
from railyard import fock
from railyard.aztec import (
    admissible_grid,
    aztec_spec,
    boundary_sample,
    circle_residual,
    creation_brute_coeffs,
    creation_rate,
    creation_rate_definitional,
    empirical_arctic,
    epgf_brute_coeffs,
    epgf_coeffs,
    to_uv,
)
from railyard.graph import enumerate_coverings, flip_bfs, q_weight
from railyard.kasteleyn import max_error, verify_all_orientations, verify_inverse
from railyard.kernel import KernelContext, edge_probability
from railyard.partition_fn import (
    NumericOracle,
    q_specialize,
    w_brute,
    w_constrained,
    z_brute,
    z_hook_q,
    z_product,
    z_transfer,
)
from railyard.sampler import (
    build_backward,
    covering_probability,
    exact_z,
    fitted_window,
    sample_batch,
    empirical_stats,
)
from railyard.series import TruncatedSeries

_lines = []


def report(k: int, ok: bool, detail: str, gate: bool = True):
    line = f"[criterion {k:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    _lines.append(line)
    print("\n" + line, flush=True)
    if gate:
        assert ok, line


@pytest.fixture
def say(capsys):
    """``report`` with output capture suspended, so the line always shows."""
    def _say(*args, **kwargs):
        with capsys.disabled():
            report(*args, **kwargs)
    return _say


# -- 1 -----------------------------------------------------------------------

def check_three_way_partition_function():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(50):
        sp = random_spec(rng, max_span=4)
        zp, zt, zb = z_product(sp, 6), z_transfer(sp, 6), z_brute(sp, 6)
        bad += not (zp == zt == zb)
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 60, f"50 random specs at D=6, {bad} mismatches, {dt:.1f} s (limit 60 s)"


def test_criterion_01_three_way_partition_function(say):
    say(1, *check_three_way_partition_function())


# -- 2 -----------------------------------------------------------------------

def check_hook_counts():
    details = []
    ok = True
    for n in (1, 2, 3, 4):
        sp = aztec_spec(n)
        target = 2 ** (n * (n + 1) // 2)
        z_hook = exact_z(sp)
        z_table = build_backward(sp, exact=True).mass
        ok &= z_hook == target == z_table
        if n <= 3:
            count = len(enumerate_coverings(sp, n + 1))
            ok &= count == target
        details.append(f"n={n}:{z_hook}")
    sp = aztec_spec(2)
    q = TruncatedSeries.var("q", 8)
    expect = (1 + q) ** 2 * (1 + q ** 3)
    zq = z_hook_q(sp, 8)
    zq_brute = q_specialize(z_brute(sp.symbolic(), 16, H=3), sp, 8)
    at_one = sum(expect.terms.values())
    ok &= zq == expect == zq_brute and at_one == 8
    details.append(f"q-hook n=2: {zq}")
    return ok, "Z(Aztec n)=2^(n(n+1)/2) " + ", ".join(details)


def test_criterion_02_hook_counts(say):
    say(2, *check_hook_counts())


# -- 3 -----------------------------------------------------------------------

def check_flip_lattice():
    ok = True
    details = []
    for n in (1, 2, 3):
        sp = aztec_spec(n)
        H = n + 1
        dist = flip_bfs(sp, H)
        every = set(enumerate_coverings(sp, H))
        reached = set(dist) == every
        exponents = all(q_weight(c) == d for c, d in dist.items())
        ok &= reached and exponents
        details.append(f"n={n}: {len(dist)}/{len(every)} reached, q-exponent=distance {exponents}")
    return ok, "; ".join(details)


def test_criterion_03_flip_lattice(say):
    say(3, *check_flip_lattice())


# -- 4 -----------------------------------------------------------------------

def check_correlation_oracle():
    rng = random.Random(4)
    worst = worst_series = 0.0
    n_single = n_pairs = 0
    for _ in range(20):
        sp = random_convergent_spec(rng, max_span=3)
        ctx = KernelContext(sp)
        oracle = NumericOracle(sp, 40)
        edges = window_edges(sp, 3)
        for e in edges:
            p = edge_probability(ctx, [e])
            worst = max(worst, abs(p - oracle.probability([e])))
            worst_series = max(worst_series, abs(p - edge_probability(ctx, [e], "series")))
            n_single += 1
        for _ in range(100):
            pair = rng.sample(edges, 2)
            worst = max(worst, abs(edge_probability(ctx, pair) - oracle.probability(pair)))
            n_pairs += 1
    ok = worst <= 1e-9 and worst_series <= 1e-8
    return ok, (f"{n_single} single edges, {n_pairs} pairs on 20 specs: "
                f"max |kernel - oracle| {worst:.2e} (<=1e-9), max |series - numeric| {worst_series:.2e} (<=1e-8)")


def test_criterion_04_correlation_oracle(say):
    say(4, *check_correlation_oracle())


# -- 5 -----------------------------------------------------------------------

def check_constrained_transfer():
    rng = random.Random(5)
    D = 4
    tested = bad = nonzero = multi = 0
    for _ in range(40):
        sp = random_spec(rng, max_span=3)
        edges = window_edges(sp, 2)
        for size in (1, 2, 3):
            for _ in range(6):
                es = rng.sample(edges, min(size, len(edges)))
                a = w_constrained(sp, es, D)
                b = w_brute(sp, es, D)
                tested += 1
                bad += a != b
                nonzero += not a.is_zero()
                cols = [e.even.x for e in es]
                multi += len(set(cols)) < len(cols) and not a.is_zero()
    ok = bad == 0 and multi > 0
    return ok, (f"{tested} edge sets at D={D}, {bad} mismatches "
                f"({nonzero} nonzero, {multi} nonzero with several edges in one column)")


def test_criterion_05_constrained_transfer(say):
    say(5, *check_constrained_transfer())


# -- 6 -----------------------------------------------------------------------

def check_commutation_suite():
    rep = fock.commutation_suite(D=6, max_charge=2)
    failed = [k for k, r in rep.items() if not r["pass"]]
    checked = sum(r["checked"] for r in rep.values())
    return not failed, f"{len(rep)} relations, {checked} state checks, failing: {failed or 'none'}"


def test_criterion_06_commutation_suite(say):
    say(6, *check_commutation_suite())


# -- 7 -----------------------------------------------------------------------

def _random_linear(rng):
    # modes near the Fermi level, so that many vacuum expectations survive
    terms = {}
    for _ in range(rng.randint(2, 5)):
        kind = rng.choice(("psi", "psi*"))
        k = Fraction(2 * rng.randint(-2, 1) + 1, 2)
        terms[(kind, k)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return fock.linear_fermion(terms)


def check_wick_pfaffian():
    rng = random.Random(7)
    wick_bad = wick_nonzero = 0
    wick_total = 0
    for s in (1, 2, 3):
        for _ in range(60):
            Xs = [_random_linear(rng) for _ in range(2 * s)]
            lhs, rhs = fock.wick_sides(Xs)
            wick_total += 1
            wick_bad += lhs != rhs
            wick_nonzero += lhs != 0
    pf_bad = 0
    for n in range(0, 9, 2):
        for _ in range(10):
            A = random_antisymmetric(rng, n)
            pf = fock.pfaffian(A) if n else 1
            pf_bad += pf * pf != exact_det(A)
            if n <= 6:
                pf_bad += pf != (fock.pfaffian_by_pairings(A) if n else 1)
    ok = wick_bad == 0 and pf_bad == 0 and wick_nonzero > 0
    return ok, (f"Wick: {wick_total} products (s<=3), {wick_bad} mismatches, {wick_nonzero} nonzero; "
                f"Pf^2=det on sizes 0..8: {pf_bad} mismatches")


def test_criterion_07_wick_pfaffian(say):
    say(7, *check_wick_pfaffian())


# -- 8 -----------------------------------------------------------------------

def check_inverse_kasteleyn():
    worst = 0.0
    face_failures = faces = 0
    specs = [aztec_spec(n) for n in (1, 2, 3)]
    rng = random.Random(8)
    specs += [random_convergent_spec(rng, max_span=3, min_boxes=2) for _ in range(10)]
    for sp in specs:
        worst = max(worst, max_error(verify_inverse(KernelContext(sp), 3)))
        r = verify_all_orientations(sp, 5)
        faces += r["faces"]
        face_failures += r["failures"]
    for _ in range(40):
        sp = random_spec(rng, max_span=5)
        r = verify_all_orientations(sp, 4)
        faces += r["faces"]
        face_failures += r["failures"]
    ok = worst <= 1e-8 and face_failures == 0
    return ok, (f"Aztec n<=3 and 10 random specs: max |CK-1|,|KC-1| {worst:.2e} (<=1e-8); "
                f"{faces} faces, {face_failures} orientation failures")


def test_criterion_08_inverse_kasteleyn(say):
    say(8, *check_inverse_kasteleyn())


# -- 9 -----------------------------------------------------------------------

def check_aztec_formulas():
    worst = 0.0
    points = 0
    for n in range(1, 7):
        for lam in (Fraction(1, 2), Fraction(1), Fraction(2)):
            for x, y in admissible_grid(n):
                a = float(creation_rate(x, y, n, lam))
                b = creation_rate_definitional(x, y, n, float(lam))
                worst = max(worst, abs(a - b))
                points += 1
    epgf_ok = all(epgf_coeffs(lam, 4) == epgf_brute_coeffs(lam, 4)
                  and epgf_coeffs(lam, 4, creation=True) == creation_brute_coeffs(lam, 4)
                  for lam in (Fraction(1, 2), Fraction(1), Fraction(2)))
    ok = worst <= 1e-8 and epgf_ok
    return ok, (f"creation rate closed vs definitional on {points} grid points (n<=6): max diff {worst:.2e} "
                f"(<=1e-8); EPGF through t^4 exact at lambda in {{1/2,1,2}}: {epgf_ok}")


def test_criterion_09_aztec_formulas(say):
    say(9, *check_aztec_formulas())


# -- 10 ----------------------------------------------------------------------

def check_arctic_boundary():
    pts = boundary_sample(10 ** 4)
    u, v = to_uv(pts[:, 0], pts[:, 1])
    res = float(np.max(np.abs(circle_residual(u, v))))
    ok = res <= 1e-12 and len(pts) == 10 ** 4
    return ok, f"{len(pts)} boundary points, max circle residual {res:.2e} (<=1e-12)"


def check_arctic_empirical():
    r = empirical_arctic(64, 20, seed=10, statistic="flips")
    verdict = "PASS" if r["passes"] else "FAIL"
    return r["passes"], (f"empirical {verdict} (reported, not gating): n=64, {r['samples']} shuffled tilings, "
                         f"max misplacement {r['max_distance']:.2f} = {r['max_distance_over_n']:.3f} n (<=0.05 n)")


def test_criterion_10_arctic_circle(say):
    ok, detail = check_arctic_boundary()
    _, detail_emp = check_arctic_empirical()
    say(10, ok, f"{detail}; {detail_emp}")


# -- 11 ----------------------------------------------------------------------

def check_sampler_exactness():
    exact_ok = True
    checked = 0
    for n in (1, 2, 3):
        for lam in (1, Fraction(2)):
            sp = aztec_spec(n, lam)
            table = build_backward(sp, exact=True)
            Z = exact_z(sp)
            xs = {i: Fraction(sp.weight(i)) for i in sp.columns}
            total = Fraction(0)
            for c in enumerate_coverings(sp, n + 1):
                w = math.prod((xs[i] ** d for i, d in c.degrees().items()), start=Fraction(1))
                p = covering_probability(table, c)
                exact_ok &= p == w / Z
                total += p
                checked += 1
            exact_ok &= total == 1
    n, count = 8, 10 ** 4
    sp = aztec_spec(n)
    table = build_backward(sp, H=fitted_window(sp))
    samples = sample_batch(table, count, seed=11)
    ctx = KernelContext(sp)
    rng = random.Random(11)
    pool = [e for e in window_edges(sp, n) if 0.02 < edge_probability(ctx, [e]) < 0.98]
    probes = rng.sample(pool, 20)
    stats = empirical_stats(samples, probes)
    worst_z = 0.0
    for e in probes:
        p = edge_probability(ctx, [e])
        sigma = math.sqrt(p * (1 - p) / count)
        worst_z = max(worst_z, abs(stats[e]["frequency"] - p) / sigma)
    ok = exact_ok and worst_z <= 3
    return ok, (f"n<=3: {checked} coverings with probability = weight/Z exactly: {exact_ok}; "
                f"n=8, {count} samples, 20 non-frozen edges: max |freq - p|/sigma {worst_z:.2f} (<=3)")


def test_criterion_11_sampler_exactness(say):
    say(11, *check_sampler_exactness())


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(report)
            except AssertionError:
                pass

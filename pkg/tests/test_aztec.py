import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from railyard.aztec import (
    BOUNDARY,
    FROZEN,
    LIQUID,
    AztecParams,
    _weighted_tilings,
    admissible_grid,
    arctic_classify,
    arctic_discriminant,
    aztec_spec,
    block_cells,
    boundary_sample,
    circle_residual,
    creation_brute_coeffs,
    creation_rate,
    creation_rate_definitional,
    creation_rate_square_check,
    diamond_cells,
    empirical_arctic,
    epgf,
    epgf_brute_coeffs,
    epgf_coeffs,
    krawtchouk_c,
    shuffle_distribution,
    shuffle_sample,
    tiling_dominos,
    to_uv,
    west_edge,
    west_prob,
    west_prob_exact,
)
from railyard.graph import enumerate_coverings
from railyard.partition_fn import z_value

F = Fraction


def test_params_validation():
    with pytest.raises(ValueError):
        AztecParams(0)
    with pytest.raises(ValueError):
        AztecParams(2, weighting="nope")
    with pytest.raises(ValueError):
        AztecParams(2, lam=-1)
    with pytest.raises(ValueError):
        AztecParams(2, weighting="stanley", custom=(1, 2))
    sp = aztec_spec(AztecParams(2, lam=F(1, 2), weighting="biased"))
    assert [sp.weight(i) for i in sp.columns] == [1, F(1, 2), 1, F(1, 2)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tiling_count(n):
    assert len(enumerate_coverings(aztec_spec(n), n + 1)) == 2 ** (n * (n + 1) // 2)


def test_tiling_dominos_fill_the_diamond():
    n = 3
    for p, doms in _weighted_tilings(n, F(1)):
        cells = [c for d in doms for c in block_cells(d)]
        assert len(cells) == len(set(cells))
        assert set(cells) == set(diamond_cells(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_shuffle_law_equals_weighted_tilings(n):
    for lam in (F(1), F(1, 3)):
        law = shuffle_distribution(n, lam)
        ref = {}
        for p, doms in _weighted_tilings(n, lam):
            k = frozenset(doms)
            ref[k] = ref.get(k, 0) + p
        assert law == ref
        assert sum(law.values()) == 1


def test_shuffle_sample_is_deterministic_and_a_tiling():
    n = 6
    a = shuffle_sample(n, 1.0, seed=3)
    assert sorted(a) == sorted(shuffle_sample(n, 1.0, seed=3))
    cells = [c for d in a for c in block_cells(d)]
    assert sorted(cells) == sorted(diamond_cells(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_created_blocks_match_squares(n):
    table = creation_rate_square_check(n, F(1, 2))
    for k, row in table.items():
        assert row["square"] == row["shuffled"], k
        if n <= 2:
            assert row["closed"] == row["square"], k


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_creation_rates_sum_to_n(n):
    assert sum(creation_rate(x, y, n, F(2, 3)) for x, y in admissible_grid(n)) == n


def test_krawtchouk_generating_function():
    lam, n = F(2, 5), 4
    for B in range(n + 1):
        # (1 - z)^B (1 + z/lam)^(n-B) at z = 1/7 from the coefficients
        total = sum(krawtchouk_c(lam, A, B, n) * F(1, 7) ** A for A in range(n + 1))
        assert total == (1 - F(1, 7)) ** B * (1 + F(1, 7) / lam) ** (n - B)


@pytest.mark.parametrize("n, lam", [(2, 1.0), (3, 0.5)])
def test_west_probability_three_routes(n, lam):
    for x, y in admissible_grid(n):
        exact = float(west_prob_exact(x, y, n, F(lam)))
        assert west_prob(x, y, n, lam, "kernel") == pytest.approx(exact, abs=1e-10)
        assert west_prob(x, y, n, lam, "contour") == pytest.approx(exact, abs=1e-10)


def test_west_edge_parity():
    assert west_edge(0, 0, 2) is None
    assert west_prob(0, 0, 2) == 0.0
    with pytest.raises(ValueError):
        west_prob(0, 0, 1, method="bogus")


def test_west_probabilities_sum_to_quarter_of_dominos():
    # each tiling has n(n+1) dominos and a quarter of them go west
    n = 3
    total = sum(west_prob_exact(x, y, n) for x, y in admissible_grid(n))
    assert total == F(n * (n + 1), 4)


@pytest.mark.parametrize("n", [2, 3])
def test_creation_closed_form_against_definition(n):
    for x, y in admissible_grid(n):
        got = creation_rate_definitional(x, y, n, 0.5, "kernel")
        assert got == pytest.approx(float(creation_rate(x, y, n, F(1, 2))), abs=1e-9)


def test_epgf_series_matches_enumeration():
    lam = F(1, 2)
    D = 4
    got = epgf_coeffs(lam, D)
    ref = epgf_brute_coeffs(lam, D)
    for n in range(1, D + 1):
        assert {k: v for k, v in got[n].items() if v} == ref[n]


def test_creation_series_matches_closed_form():
    lam = F(3, 2)
    D = 5
    got = epgf_coeffs(lam, D, creation=True)
    ref = creation_brute_coeffs(lam, D)
    for n in range(1, D + 1):
        assert {k: v for k, v in got[n].items() if v} == ref[n]


def test_epgf_closed_form_evaluation():
    lam, u, v, t = F(1, 2), F(3, 2), F(4, 5), F(1, 20)
    coeffs = epgf_coeffs(lam, 12)
    s = sum(c * u ** i * v ** j * t ** n for n, p in enumerate(coeffs) for (i, j), c in p.items())
    assert float(s) == pytest.approx(float(epgf(u, v, t, lam)), rel=1e-12)
    with pytest.raises(ZeroDivisionError):
        epgf(1.0, 1.0, 1.0, 1.0)


def test_arctic_classify_examples():
    assert arctic_classify(0.5, 0.0) == LIQUID
    assert arctic_classify(0.5, 0.5) == BOUNDARY
    assert arctic_classify(0.0, 0.0) == FROZEN


@given(st.floats(0, 1), st.floats(-1, 1))
def test_discriminant_is_circle(tau, chi):
    u, v = to_uv(tau, chi)
    assert arctic_discriminant(tau, chi) == pytest.approx(circle_residual(u, v), abs=1e-12)


def test_boundary_sample_on_circle():
    pts = boundary_sample(400)
    assert len(pts) > 100
    u, v = to_uv(pts[:, 0], pts[:, 1])
    assert np.max(np.abs(circle_residual(u, v))) < 1e-12


def test_empirical_arctic_report_keys():
    rep = empirical_arctic(6, 4, seed=0)
    assert {"n", "samples", "cells", "liquid_cells", "misplaced_cells",
            "max_distance", "max_distance_over_n", "passes"} <= set(rep)
    assert rep["cells"] == 2 * 6 * 7
    rep = empirical_arctic(3, 4, seed=0, method="transfer", statistic="cluster")
    assert rep["method"] == "transfer"
    with pytest.raises(ValueError):
        empirical_arctic(3, 1, 0, method="nope")


def test_uniform_partition_function_numeric():
    assert z_value(aztec_spec(3)) == pytest.approx(64, rel=1e-12)

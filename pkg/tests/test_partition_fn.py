import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from _helpers import random_convergent_spec, random_spec, window_edges
from railyard.graph import Edge, Vertex, build, enumerate_coverings
from railyard.partition_fn import (
    NumericOracle,
    finite_support,
    hook_boxes,
    normalize,
    q_specialize,
    w_brute,
    w_constrained,
    z_brute,
    z_hook_q,
    z_product,
    z_transfer,
    z_value,
)
from railyard.sampler import exact_z
from railyard.series import TruncatedSeries

F = Fraction
specs = st.integers(0, 10 ** 6).map(lambda s: random_spec(random.Random(s), max_span=4))


def all_three(sp, D):
    return z_product(sp, D), z_transfer(sp, D), z_brute(sp, D)


def test_examples():
    D = 6
    x1, x2 = TruncatedSeries.var(1, D), TruncatedSeries.var(2, D)
    p = x1 * x2
    for z in all_three(build(1, 2, "LR", "+-"), D):
        assert z == 1 + p
    for z in all_three(build(1, 2, "LL", "+-"), D):
        assert z == 1 + p + p ** 2 + p ** 3
    for z in all_three(build(1, 2, "LR", "-+"), D):
        assert z == TruncatedSeries.one(D)


@given(specs, st.integers(0, 6))
def test_three_routes_agree(sp, D):
    zp, zt, zb = all_three(sp, D)
    assert zp == zt == zb


def test_hook_q_examples():
    q = TruncatedSeries.var("q", 6)
    assert z_hook_q(build(1, 2, "LL", "+-"), 6) == (1 - q).inverse()
    assert z_hook_q(build(1, 2, "LR", "+-"), 6) == 1 + q
    az = build(0, 3, "LRLR", "+-+-")
    assert z_hook_q(az, 6) == (1 + q) ** 2 * (1 + q ** 3)
    assert z_brute(az, 6).evaluate({i: 1 for i in az.columns}) == 8


@given(specs)
def test_hook_q_is_flip_specialization(sp):
    D = 5
    assert z_hook_q(sp, D) == q_specialize(z_product(sp, 2 * D), sp, D)


def test_hook_boxes():
    boxes = hook_boxes(build(0, 3, "LRLR", "+-+-"))
    assert sorted((b.i, b.j, b.hook, b.same_letter) for b in boxes) == [
        (0, 1, 1, False), (0, 3, 3, False), (2, 3, 1, False)]


def test_constrained_examples():
    sp = build(0, 1, "LR", "+-")
    D = 4
    diag = Edge(Vertex(0, F(-1, 2)), Vertex(-1, F(1, 2)))
    x0, x1 = TruncatedSeries.var(0, D), TruncatedSeries.var(1, D)
    assert w_constrained(sp, [], D) == z_product(sp, D)
    assert w_constrained(sp, [diag], D) == w_brute(sp, [diag], D) == x0 * x1
    clash = [diag, Edge(Vertex(0, F(-1, 2)), Vertex(1, F(-1, 2)))]
    assert w_constrained(sp, clash, D).is_zero() and w_brute(sp, clash, D).is_zero()


@pytest.mark.parametrize("seed", range(15))
def test_constrained_sums_are_dominated_by_z(seed):
    rng = random.Random(seed)
    sp = random_spec(rng, max_span=3)
    D = 4
    Z = z_product(sp, D)
    edges = window_edges(sp, 2)
    for _ in range(6):
        es = rng.sample(edges, rng.randint(1, 2))
        W = w_constrained(sp, es, D)
        assert W == w_brute(sp, es, D)
        assert all(c >= 0 for c in (Z - W).terms.values())


@given(specs)
def test_normalize_keeps_z(sp):
    assert z_product(normalize(sp), 6) == z_product(sp, 6)
    assert len(hook_boxes(normalize(sp))) == len(hook_boxes(sp))


def test_finite_support_and_numeric_value():
    az = build(0, 3, "LRLR", "+-+-", [1, 1, 1, 1])
    assert finite_support(az) and z_value(az) == 8
    ll = build(0, 1, "LL", "+-", [F(1, 2), F(1, 2)])
    assert not finite_support(ll)
    assert z_value(ll) == pytest.approx(4 / 3)
    with pytest.raises(ValueError):
        z_value(build(0, 1, "LL", "+-", [2, 1]))


@pytest.mark.parametrize("seed", range(5))
def test_numeric_oracle(seed):
    sp = random_convergent_spec(random.Random(seed))
    orc = NumericOracle(sp, 45)
    assert orc.Z == pytest.approx(float(exact_z(sp)), rel=1e-11)
    assert orc.probability([]) == 1.0
    # a finite support spec has an exact enumeration to compare against
    az = build(0, 3, "LRLR", "+-+-", ["1/2", 2, 1, "1/3"])
    orc = NumericOracle(az, 4)
    cs = enumerate_coverings(az, 4)
    xs = {i: az.weight(i) for i in az.columns}
    w = lambda c: float(eval_weight(c, xs))
    Z = sum(w(c) for c in cs)
    for e in window_edges(az, 2):
        assert orc.probability([e]) == pytest.approx(sum(w(c) for c in cs if e in c.edges) / Z, abs=1e-14)


def eval_weight(c, xs):
    out = F(1)
    for i, d in c.degrees().items():
        out *= xs[i] ** d
    return out


def test_numeric_oracle_requires_weights():
    with pytest.raises(ValueError):
        NumericOracle(build(0, 1, "LR", "+-"), 3)

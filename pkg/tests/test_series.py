from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from railyard.series import LaurentSeries, QPower, TruncatedSeries, expand_factor, specialize

F = Fraction
CAP = 6


def monomials(nvars=3, maxdeg=4):
    return st.lists(st.tuples(st.integers(0, nvars - 1), st.integers(1, 3)), max_size=3).map(
        lambda ps: tuple(sorted(dict(ps).items()))).filter(lambda m: sum(e for _, e in m) <= maxdeg)


series = st.dictionaries(
    monomials(),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=6,
).map(lambda d: TruncatedSeries(d, CAP))


def x(i, cap=CAP):
    return TruncatedSeries.var(i, cap)


# -- ring axioms ------------------------------------------------------------

@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * TruncatedSeries.one(CAP) == a
    assert (a - a).is_zero()


@given(series)
def test_truncation_drops_exactly_the_high_degrees(a):
    for m in (a * a).terms:
        assert sum(e for _, e in m) <= CAP
    full = TruncatedSeries(a.terms, None) * TruncatedSeries(a.terms, None)
    assert (a * a).terms == {m: c for m, c in full.terms.items() if sum(e for _, e in m) <= CAP}


@given(series)
def test_inverse(a):
    unit = a + 1 - a.coeff(())  # constant term forced to 1
    assert unit * unit.inverse() == TruncatedSeries.one(CAP)


def test_zero_coefficients_are_not_stored():
    s = TruncatedSeries({((0, 1),): F(0), (): F(2)}, 3)
    assert s.terms == {(): F(2)}
    with pytest.raises(ZeroDivisionError):
        x(0).inverse()
    with pytest.raises(ValueError):
        x(0, 3) + x(0, 4)


def test_difference_of_squares():
    p = x(0) * x(1)
    assert (1 + p) * (1 - p) == 1 - p * p
    assert (1 + p) * (1 - p) == TruncatedSeries({(): F(1), ((0, 2), (1, 2)): F(-1)}, CAP)


# -- factors ----------------------------------------------------------------

@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("D", [0, 1, 2, 5, 8])
def test_factor_times_inverse_is_one(sign, D):
    assert expand_factor(sign, 0, 1, True, D) * expand_factor(sign, 0, 1, False, D) == TruncatedSeries.one(D)


def test_factor_expansions():
    p = x(0, 6) * x(1, 6)
    assert expand_factor(-1, 0, 1, True, 6) == 1 + p + p ** 2 + p ** 3
    assert expand_factor(1, 0, 1, True, 6) == 1 - p + p ** 2 - p ** 3
    assert expand_factor(1, 0, 1, False, 6) == 1 + p
    with pytest.raises(ValueError):
        expand_factor(1, 0, 1, True, None)


# -- specialization ---------------------------------------------------------

def test_specialize_to_numbers_and_zero():
    s = (1 + x(1) * x(2)) * (1 + x(0))
    assert specialize(s, {0: 1, 1: 1, 2: 1}) == 4
    killed = specialize(s, {0: 0})
    assert killed == 1 + x(1) * x(2)


def test_q_specialization_example():
    s = 1 + x(1) * x(2)
    out = specialize(s, {1: QPower(-1), 2: QPower(2)}, q_cap=4)
    assert out == 1 + TruncatedSeries.var("q", 4)


@given(series, st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_specialize_agrees_with_evaluate(a, t):
    vals = {0: t, 1: 1 - t, 2: F(1, 2)}
    assert specialize(a, vals) == a.evaluate(vals)


def test_canonical_text_form():
    s = (1 + x(0)) ** 2 - x(0) * x(1) * 3
    assert str(s) == "1 + 2*x[0] + x[0]^2 - 3*x[0]*x[1]"


# -- Laurent polynomials ----------------------------------------------------

def test_laurent_product_and_clip():
    a = LaurentSeries(-1, [1.0, 2.0])     # z^-1 + 2
    b = LaurentSeries(0, [1.0, 0.0, 3.0])  # 1 + 3 z^2
    c = a.mul(b)
    assert [c[k] for k in range(-1, 3)] == [1.0, 2.0, 3.0, 6.0]
    d = a.mul(b, lo=0, hi=1)
    assert (d.lo, d.hi) == (0, 1) and d[0] == 2.0 and d[1] == 3.0 and d[2] == 0.0


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=5), st.lists(st.floats(-3, 3), min_size=1, max_size=5),
       st.integers(-3, 3), st.integers(-3, 3))
def test_laurent_product_evaluates_pointwise(ca, cb, oa, ob):
    a, b = LaurentSeries(oa, ca), LaurentSeries(ob, cb)
    z = 0.7 + 0.2j
    ev = lambda s: sum(s[k] * z ** k for k in range(s.lo, s.hi + 1))
    assert np.isclose(ev(a.mul(b)), ev(a) * ev(b), rtol=1e-9, atol=1e-9)

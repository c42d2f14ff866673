"""Truncated series, coefficient fields and Laurent expansions."""
from flint import fmpq
from hypothesis import given, settings, strategies as st

from chowdilog.fields import QQ, NumberField, RationalFunctionField, field_trace, normalized_trace
from chowdilog.laurent import ClosedPoint, laurent_expand
from chowdilog.series import TSeries, log_circ, series_exp, star_scale, truncate_below
from flint import fmpq_poly

from conftest import ser

rats = st.builds(fmpq, st.integers(-9, 9), st.integers(1, 5))
nonzero = rats.filter(lambda v: v != 0)


def qser(cs):
    return TSeries(QQ, list(cs))


def test_log_circ_mercator():
    assert log_circ(ser(QQ, 2, 2, 0, 0)) == ser(QQ, 0, 1, fmpq(-1, 2), fmpq(1, 3))


def test_log_circ_constant():
    assert log_circ(ser(QQ, 5, 0, 0)) == ser(QQ, 0, 0, 0)


def test_log_circ_of_two_exp_minus_one():
    x = series_exp(ser(QQ, 0, 1, 0)) * 2 - 1
    assert log_circ(x) == ser(QQ, 0, 2, -1)


def test_series_exp_examples():
    assert series_exp(ser(QQ, 0, 0, 0)) == ser(QQ, 1, 0, 0)
    assert series_exp(ser(QQ, 0, 1, 0, 0)) == ser(QQ, 1, 1, fmpq(1, 2), fmpq(1, 6))


def test_truncate_below():
    a = ser(QQ, 1, 1, 1)
    assert truncate_below(a, 2) == ser(QQ, 1, 1, 0)
    assert truncate_below(a, 1) == ser(QQ, 1, 0, 0)


def test_star_scale_examples():
    a = ser(QQ, 1, 1, 1)
    assert star_scale(1, a) == a
    assert star_scale(2, a) == ser(QQ, 1, 2, 4)
    assert star_scale(fmpq(3), ser(QQ, 0, 0, 1)) == ser(QQ, 0, 0, 9)


def test_normalized_trace_quadratic():
    K = NumberField(fmpq_poly([-2, 0, 1]))
    a = K.gen
    assert normalized_trace(a, K) == 0
    assert normalized_trace(a * a, K) == 2
    assert field_trace(a * a, K) == 4
    assert normalized_trace(K.one, K) == 1


def test_laurent_geometric():
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    e = laurent_expand(1 / (1 - s), ClosedPoint.rational(0), window=(0, 3))
    assert [e.coeff(k) for k in range(4)] == [1, 1, 1, 1]


def test_laurent_at_infinity():
    F = RationalFunctionField(("s",))
    e = laurent_expand(F.gen("s"), ClosedPoint.infinity(), window=(-1, 0))
    assert e.valuation() == -1 and e.coeff(-1) == 1 and e.coeff(0) == 0


def test_laurent_quadratic_point():
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    pt = ClosedPoint.from_poly([-2, 0, 1])
    e = laurent_expand(s / (s * s - 2), pt, window=(-1, 1))
    K = pt.residue_field
    assert e.valuation() == -1
    # s/(s^2-2) = 1/(2 z) + ... at s = alpha + z, with alpha^2 = 2
    assert K.is_zero(e.coeff(-1) - K(fmpq(1, 2)))


@settings(max_examples=60, deadline=None)
@given(st.lists(rats, min_size=1, max_size=5))
def test_exp_log_round_trip(cs):
    u = qser([0] + cs)
    assert log_circ(series_exp(u)) == u


@settings(max_examples=60, deadline=None)
@given(st.lists(rats, min_size=4, max_size=4), st.lists(rats, min_size=4, max_size=4), nonzero)
def test_star_scale_is_multiplicative(a, b, lam):
    p, r = qser(a), qser(b)
    assert star_scale(lam, p * r) == star_scale(lam, p) * star_scale(lam, r)


@settings(max_examples=40, deadline=None)
@given(rats, rats, rats, rats)
def test_normalized_trace_linear(a, b, c, d):
    K = NumberField(fmpq_poly([-3, 1, 0, 1]))
    x, y = K(a) + K(b) * K.gen, K(c) * K.gen ** 2 + K(d)
    assert normalized_trace(x * 2 + y, K) == 2 * normalized_trace(x, K) + normalized_trace(y, K)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 4), st.integers(-3, 3))
def test_laurent_multiplicative(a, b, c, pt):
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    f = (s - a) / (s - c + 7)
    g = (s * s + b) / (s - c)
    P = ClosedPoint.rational(pt)
    ef, eg, efg = (laurent_expand(h, P, rel=6) for h in (f, g, f * g))
    assert efg.agrees(ef * eg)

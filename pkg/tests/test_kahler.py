"""alpha_j, M_(m,r), L_(m,r), residues of 1-forms."""
import random

import pytest
from flint import fmpq
from hypothesis import given, settings, strategies as st

from chowdilog.bloch import B2Elt, B2Tensor, delta_b2, delta_b2_tensor, li_mr
from chowdilog.fields import QQ, RationalFunctionField
from chowdilog.forms import Form1, d, poles, residue_form
from chowdilog.kahler import L_mr, M_mr, alpha_j, composite_route, surjectivity_witness
from chowdilog.laurent import ClosedPoint
from chowdilog.multiplicative import wedge_is_zero
from chowdilog.series import TSeries, exp_monomial, series_exp
from chowdilog.suites import random_flat, random_unit

from conftest import MR_PAIRS


def ds(F, g):
    return Form1(F, {"s": g})


def test_alpha_2_examples(F, s):
    x = exp_monomial(F, 1, 1, 3) * s
    assert alpha_j(delta_b2(B2Elt.symbol(x)), 2) == ds(F, -1 / (1 - s) ** 2)
    y = exp_monomial(F, 1, 1, 3) * 2
    assert alpha_j(delta_b2(B2Elt.symbol(y)), 2).is_zero()


def test_L_examples(F, s):
    x = exp_monomial(F, 1, 1, 2) * s
    assert L_mr(B2Tensor.symbol(x, TSeries.const(F, s, 2)), 2, 3) == ds(F, -1 / (2 * (1 - s) ** 2))
    u = fmpq(5, 3)
    y = exp_monomial(F, u, 1, 2)
    assert L_mr(B2Tensor.symbol(x, y), 2, 3) == ds(F, u / (2 * (1 - s) ** 2))


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_M_vanishes_on_pure_symbols(m, r):
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    rng = random.Random(r)
    for _ in range(3):
        u = TSeries(F, [0] + [F(fmpq(rng.randint(-3, 3))) * s + rng.randint(-2, 2) for _ in range(m - 1)]
                    + [F(0)] * (r - m))
        x = series_exp(u) * s
        assert M_mr(B2Tensor.symbol(x, x), m, r).is_zero()


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_L_vanishes_on_boundaries(m, r):
    rng = random.Random(100 + r)
    F = RationalFunctionField(("s",))
    for _ in range(10):
        x = random_flat(rng, F, m)
        assert L_mr(B2Tensor.symbol(x, x), m, r).is_zero()


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_commutative_diagram(m, r):
    rng = random.Random(200 + r)
    F = RationalFunctionField(("s",))
    for _ in range(5):
        x, y = random_flat(rng, F, r), random_unit(rng, F, r)
        lhs = L_mr(B2Tensor.symbol(x.reduce(m), y.reduce(m)), m, r)
        assert lhs == composite_route(x, y, m, r)


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_L_and_M_star_weight(m, r):
    rng = random.Random(300 + r)
    F = RationalFunctionField(("s",))
    for lam in (fmpq(2), fmpq(3), fmpq(-1), fmpq(1, 2)):
        x, y = random_flat(rng, F, r), random_unit(rng, F, r)
        T = B2Tensor.symbol(x, y)
        Ts = B2Tensor.symbol(x.star_scale(lam), y.star_scale(lam))
        assert L_mr(Ts, m, r) == L_mr(T, m, r) * lam ** r
        assert M_mr(Ts, m, r) == M_mr(T, m, r) * lam ** r


@pytest.mark.parametrize("m", [2, 3, 4])
def test_jt_lemma(m):
    """j t_j(f) = s t_{j-1}(f_s u_t) for f = log(1 - s e^u), u = u|_m with constant coefficients."""
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    rng = random.Random(m)
    N = 2 * m
    u = TSeries(F, [0] + [F(fmpq(rng.randint(-4, 4), rng.randint(1, 3))) for _ in range(m - 1)] + [F(0)] * (N - m))
    e = series_exp(u)
    one_minus = 1 - e * s
    f = one_minus.log_circ()
    f_s = (-e) * one_minus.inv()
    ut = u.deriv_t()
    prod = f_s.reduce(N - 1) * ut
    for j in range(m, 2 * m):
        assert f.c[j] * j == s * prod.c[j - 1]


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_surjectivity_witness(m, r):
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    a = surjectivity_witness(m, r, F)
    assert wedge_is_zero(delta_b2(a))
    assert li_mr(a, m, r) == s
    T = B2Tensor([(c, x, TSeries.const(F, s, m)) for c, x in a.items()])
    assert L_mr(T, m, r) == ds(F, F(1))


def test_residue_examples(F, s):
    assert residue_form(ds(F, 1 / s), ClosedPoint.rational(0)) == 1
    assert residue_form(ds(F, s * s), ClosedPoint.rational(0)) == 0
    w = ds(F, 1 / (s * (1 - s)))
    pts = [ClosedPoint.rational(0), ClosedPoint.rational(1), ClosedPoint.infinity()]
    assert sum(residue_form(w, p) for p in pts) == 0


def _total_residue(w):
    tot = 0
    for p in poles(w):
        v = residue_form(w, p)
        tot += p.residue_field.trace(v) if p.degree > 1 else v
    return tot


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4),
       st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_global_residue_theorem(num, den):
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    n = sum((F(c) * s ** i for i, c in enumerate(num)), F(0))
    dd = sum((F(c) * s ** i for i, c in enumerate(den)), F(0)) * (s * s + 1)
    if F.is_zero(n) or F.is_zero(dd):
        return
    assert _total_residue(ds(F, n / dd)) == 0

"""Bloch symbols, wedges, l_(m,r), li_(m,r) and the Milnor coordinates."""
import random

import pytest
from flint import fmpq
from hypothesis import given, settings, strategies as st

from chowdilog.bloch import (B2Elt, B2Tensor, WedgeSum, delta_b2, delta_b2_tensor, ell_mr,
                             five_term, lambda_i_milnor, li_direct, li_mr, star)
from chowdilog.errors import BadModulus, FlatViolation, NonUnit
from chowdilog.fields import QQ, RationalFunctionField
from chowdilog.multiplicative import wedge_is_zero
from chowdilog.series import TSeries, ell_i, exp_monomial, series_exp
from chowdilog.suites import milnor_sides, random_flat, random_unit

from conftest import MR_PAIRS, ser


def E(dom, a, i, N):
    return exp_monomial(dom, a, i, N)


def test_delta_constant_symbol_vanishes():
    assert delta_b2(B2Elt.symbol(ser(QQ, fmpq(1, 2), 0))).is_zero()


def test_delta_definition():
    x = E(QQ, 1, 1, 3) * 2
    assert wedge_is_zero(delta_b2(B2Elt.symbol(x)) - WedgeSum.single(1 - x, x))


def test_delta_tensor_constant():
    x = ser(QQ, 3, 0)
    assert delta_b2_tensor(B2Tensor.symbol(x, x)).is_zero()


def test_delta_tensor_definition(F, s):
    x = E(F, 1, 1, 3) * 2
    y = TSeries.const(F, s, 3)
    assert delta_b2_tensor(B2Tensor.symbol(x, y)) == WedgeSum.single(1 - x, x, y)


def test_ell_i_examples():
    x = E(QQ, 1, 1, 3) * 2
    assert ell_i(x, 1) == 1
    assert ell_i(1 - x, 2) == -1
    assert ell_i(ser(QQ, 7, 0, 0), 1) == 0


def test_ell_mr_examples():
    assert ell_mr(WedgeSum.single(E(QQ, 3, 2, 3), E(QQ, 5, 1, 3)), 2, 3) == 15
    assert ell_mr(WedgeSum.single(E(QQ, 1, 1, 3), E(QQ, 1, 2, 3)), 2, 3) == -1
    a = ser(QQ, 2, 1, 1)
    assert ell_mr(WedgeSum.single(a, a), 2, 3) == 0


def test_li_examples(F, s):
    assert li_mr(B2Elt.symbol(E(QQ, 1, 1, 2) * 2), 2, 3) == -1
    x = E(F, 1, 1, 2) * s
    assert li_mr(B2Elt.symbol(x), 2, 3) == -s / (2 * (1 - s) ** 2)
    assert li_mr(B2Elt.symbol(ser(QQ, 5, 0, 0)), 2, 3) == 0


def test_li_mm_is_zero():
    assert li_mr(B2Elt.symbol(E(QQ, 1, 1, 2) * 2), 2, 2) == 0


def test_bad_modulus():
    with pytest.raises(BadModulus):
        li_mr(B2Elt.symbol(E(QQ, 1, 1, 4) * 2), 2, 4)


def test_flat_violation():
    with pytest.raises(FlatViolation):
        B2Elt.symbol(ser(QQ, 1, 1))


def test_wedge_rejects_non_units():
    with pytest.raises(NonUnit):
        WedgeSum.single(ser(QQ, 0, 1), ser(QQ, 2, 0))


def test_lambda_i_exp_generator(F, s):
    # lambda_i(e^{u t^i} ^ v ^ lam) = i u dlog v ^ dlog lam
    D = RationalFunctionField(("x", "s"))
    x, sv = D.gen("x"), D.gen("s")
    w = WedgeSum.single(E(D, sv, 2, 4), TSeries.const(D, x, 4), TSeries.const(D, sv + 1, 4))
    f = lambda_i_milnor(w, 2)
    expect = 2 * sv / (x * (sv + 1))
    assert f.coef[("x", "s")] == expect and len(f.coef) == 1
    assert lambda_i_milnor(w, 1).is_zero()


def test_lambda_1_constants_vanish():
    w = WedgeSum.single(ser(QQ, 1, 1, 0), ser(QQ, 2, 0, 0))
    f = lambda_i_milnor(w, 1)
    assert f is None or f.is_zero()


def test_milnor_identity():
    for i, lhs, rhs in milnor_sides(3):
        assert lhs == rhs
    assert not milnor_sides(3)[1][1].is_zero()


def test_five_term_examples():
    x, y = E(QQ, 1, 1, 3) * 2, E(QQ, 1, 2, 3) * 3
    e = five_term(x, y)
    assert li_mr(e, 2, 3) == 0
    assert not delta_b2(e).is_zero()


@pytest.mark.parametrize("m,r", [(3, 4), (3, 5)])
def test_five_term_randomized(m, r):
    rng = random.Random(m * 10 + r)
    F = RationalFunctionField(("s",))
    done = 0
    while done < 50:
        x, y = random_flat(rng, F, m), random_flat(rng, F, m)
        try:
            e = five_term(x, y)
        except FlatViolation:
            continue
        assert F.is_zero(li_mr(e, m, r))
        done += 1


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_two_paths_agree(m, r):
    rng = random.Random(r)
    F = RationalFunctionField(("s",))
    for _ in range(10):
        x = random_flat(rng, F, r)
        assert li_mr(B2Elt.symbol(x), m, r) == li_direct(x, m, r)


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_ell_depends_on_precision_r_only(m, r):
    rng = random.Random(7 * r)
    F = RationalFunctionField(("s",))
    for _ in range(5):
        a, b = random_unit(rng, F, r + 2), random_unit(rng, F, r + 2)
        w = WedgeSum.single(a, b)
        assert ell_mr(w, m, r) == ell_mr(WedgeSum.single(a.reduce(r), b.reduce(r)), m, r)


rats = st.builds(fmpq, st.integers(-6, 6), st.integers(1, 4))


@settings(max_examples=40, deadline=None)
@given(st.lists(rats, min_size=3, max_size=3), st.lists(rats, min_size=3, max_size=3),
       st.lists(rats, min_size=3, max_size=3), st.sampled_from([2, 3, -1, fmpq(1, 2)]))
def test_wedge_normal_form_idempotent_and_star_weight(a, b, c, lam):
    xs = [TSeries(QQ, [fmpq(k + 2)] + v) for k, v in enumerate((a, b, c))]
    w = WedgeSum(2, [(1, (xs[0], xs[1])), (2, (xs[2], xs[0])), (-1, (xs[1], xs[0]))])
    again = WedgeSum(2, [(cf, ents) for cf, ents in w.items()])
    assert again == w
    assert ell_mr(star(lam, w), 2, 3) == lam ** 3 * ell_mr(w, 2, 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, -1, fmpq(1, 2)]))
def test_li_star_weight(seed, lam):
    rng = random.Random(seed)
    F = RationalFunctionField(("s",))
    x = random_flat(rng, F, 3)
    assert li_mr(star(lam, B2Elt.symbol(x)), 3, 5) == lam ** 5 * li_mr(B2Elt.symbol(x), 3, 5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_lambda_additive_in_first_slot(seed):
    rng = random.Random(seed)
    D = RationalFunctionField(("s",))
    a, b, c = (random_unit(rng, D, 4) for _ in range(3))
    for i in (1, 2, 3):
        lhs = lambda_i_milnor(WedgeSum.single(a * b, c), i)
        rhs = lambda_i_milnor(WedgeSum.single(a, c), i) + lambda_i_milnor(WedgeSum.single(b, c), i)
        assert (lhs - rhs).is_zero()

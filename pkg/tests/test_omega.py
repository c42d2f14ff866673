"""Omega_(m,r) on exponential generators, the pair route, reparametrization, hOmega_(3,5)."""
import random

import pytest
from flint import fmpq
from hypothesis import given, settings, strategies as st

from chowdilog.bloch import B2Tensor, WedgeSum, delta_b2_tensor
from chowdilog.errors import BadModulus, NotInImage
from chowdilog.fields import QQ, RationalFunctionField
from chowdilog.forms import Form1, d, poles, residue_form
from chowdilog.laurent import ClosedPoint
from chowdilog.omega import (ExpGenerator, Omega_mr, Slot, expand_exponential, h_generator,
                             h_omega_35, normalize_generators, omega_generator, omega_mr_pair,
                             omega_via_generators, reparam, reparam_antiderivative)
from chowdilog.series import TSeries, exp_monomial
from chowdilog.suites import relative_pair, STAR_LAMBDAS

from conftest import MR_PAIRS


def ds(F, g):
    return Form1(F, {"s": g})


def gen(*slots, c=1):
    return ExpGenerator(fmpq(c), tuple(Slot(o, v) for o, v in slots))


def test_Omega_paper_examples(F, s):
    assert Omega_mr([gen((2, s), (1, s ** 2), (0, s))], 2, 3, F) == ds(F, s ** 2)
    assert Omega_mr([gen((3, F(1)), (1, s), (1, s ** 2))], 3, 5, F) == ds(F, s ** 2)
    assert Omega_mr([gen((2, F(1)), (0, F(2)), (0, F(3)))], 2, 3, F).is_zero()


def test_Omega_rejects_low_generators(F, s):
    with pytest.raises(NotInImage):
        Omega_mr([gen((1, s), (1, F(2)), (1, F(3)))], 2, 3, F)


def test_expand_exponential_slots(F):
    w = WedgeSum.single(TSeries(F, [1, 1, 0, 0]), TSeries.const(F, F(2), 4), TSeries.const(F, F(3), 4))
    gens = expand_exponential(w)
    assert sorted(g.slots[0].order for g in gens) == [1, 2, 3]
    assert {g.slots[0].value for g in gens} == {F(1), F(fmpq(-1, 2)), F(fmpq(1, 3))}


def test_pair_example(F, s):
    C = lambda v: TSeries.const(F, v, 3)
    e = exp_monomial(F, s, 1, 3)
    A = WedgeSum.single(TSeries(F, [s, 0, 1]), C(1 - s), e)
    B = WedgeSum.single(C(s), C(1 - s), e)
    w = omega_mr_pair(A, B, 2, 3)
    assert w == ds(F, 1 / (1 - s))
    assert w == omega_via_generators(A, B, 2, 3)
    assert residue_form(w, ClosedPoint.rational(0)) == 0
    assert omega_mr_pair(A, A, 2, 3).is_zero()


def test_reparam_examples(F, s):
    x = TSeries(F, [s, 1, 0])
    assert reparam((2, F(0)), x) == x
    assert reparam((1, F(0)), WedgeSum.single(x, TSeries.const(F, s, 3))) == WedgeSum.single(x, TSeries.const(F, s, 3))
    assert reparam((1, F(1)), TSeries.const(F, s, 3)) == TSeries(F, [s, 1, 0])


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_pair_route_matches_generators(m, r):
    rng = random.Random(r * 3 + m)
    F = RationalFunctionField(("s",))
    for _ in range(3):
        pairs = [relative_pair(rng, F, m, r) for _ in range(3)]
        A = WedgeSum.single(*(p[0] for p in pairs))
        B = WedgeSum.single(*(p[1] for p in pairs))
        assert omega_mr_pair(A, B, m, r) == omega_via_generators(A, B, m, r)


@pytest.mark.parametrize("m,r", MR_PAIRS)
def test_omega_star_weight(m, r):
    rng = random.Random(r * 5 + m)
    F = RationalFunctionField(("s",))
    pairs = [relative_pair(rng, F, m, r) for _ in range(3)]
    A = [(1, tuple(p[0] for p in pairs))]
    B = [(1, tuple(p[1] for p in pairs))]
    w = omega_mr_pair(A, B, m, r)
    for lam in STAR_LAMBDAS:
        As = [(1, tuple(p[0].star_scale(lam) for p in pairs))]
        Bs = [(1, tuple(p[1].star_scale(lam) for p in pairs))]
        assert omega_mr_pair(As, Bs, m, r) == w * lam ** r


@pytest.mark.parametrize("m,r", [(2, 3), (3, 5), (4, 7)])
def test_relative_boundaries_vanish(m, r):
    rng = random.Random(17 * r)
    F = RationalFunctionField(("s",))
    done = 0
    while done < 10:
        x1, x2 = relative_pair(rng, F, m, r, flat=True)
        y1, y2 = relative_pair(rng, F, m, r)
        try:
            w = omega_mr_pair([(1, (1 - x1, x1, y1))], [(1, (1 - x2, x2, y2))], m, r)
        except NotInImage:
            raise
        except Exception:
            continue
        assert w.is_zero()
        done += 1


@pytest.mark.parametrize("m,r", [(2, 3), (3, 5), (4, 7)])
def test_reparam_antiderivative(m, r):
    """Omega(sigma(g)/g) = dF with F the displayed antiderivative; zero for w >= m."""
    rng = random.Random(m + r)
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    for w in range(1, r):
        x = rng.randint(m, r - 1)
        y = rng.randint(0, r - x)
        z = rng.randint(0, r - x - y)

        def sl(o):
            return Slot(o, s ** rng.randint(1, 2) + rng.randint(1, 3)) if o else Slot(0, s + rng.randint(1, 3))

        g = ExpGenerator(fmpq(1), (sl(x), sl(y), sl(z)))
        ents = [exp_monomial(F, q.value, q.order, r) if q.order else TSeries.const(F, q.value, r) for q in g.slots]
        alpha = F(rng.randint(1, 3)) * s + 1
        W = WedgeSum.single(*ents)
        gens = expand_exponential(reparam(TSeries.monomial(F, alpha, w, r), W), r)
        gens += [ExpGenerator(-q.coeff, q.slots) for q in expand_exponential(W, r)]
        gens = normalize_generators(gens, F)
        val = sum(((omega_generator(q, m, r, F) or F(0)) for q in gens if any(o >= m for o in q.orders())), F(0))
        assert val == F.deriv(reparam_antiderivative(g, w, alpha, r, F), "s")
        if w >= m and x + y + z > 0:
            assert F.is_zero(val)


def test_h_generator_formula(F, s):
    a, b, c = s + 1, s * s, s - 4
    g = ExpGenerator(fmpq(1), (Slot(3, a), Slot(1, b), Slot(0, c)))
    assert h_generator(g, F(1), F) == a * b / c
    other = ExpGenerator(fmpq(1), (Slot(2, a), Slot(2, b), Slot(1, c)))
    assert F.is_zero(h_generator(other, F(1), F))
    with pytest.raises(BadModulus):
        h_omega_35(F(1), [], [], 2, 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_h_omega_homotopy(seed):
    rng = random.Random(seed)
    F = RationalFunctionField(("s",))
    s = F.gen("s")
    pairs = [relative_pair(rng, F, 3, 5) for _ in range(3)]
    A = WedgeSum.single(*(p[0] for p in pairs))
    B = WedgeSum.single(*(p[1] for p in pairs))
    a1 = F(rng.randint(1, 3)) * s + rng.randint(-2, 2)
    a2 = F(rng.randint(-2, 2))
    shift = TSeries(F, [0, a1, a2, 0, 0])
    diff = omega_mr_pair(reparam(shift, A), reparam(shift, B), 3, 5) - omega_mr_pair(A, B, 3, 5)
    assert diff == d(h_omega_35(a1, A, B), F).relative()
    for p in poles(diff):
        assert residue_form(diff, p) == 0

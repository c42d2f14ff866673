"""Goodness, residues of good wedges and the curve regulator rho_(m,r)."""
import random

import pytest
from flint import fmpq

from chowdilog.bloch import WedgeSum
from chowdilog.curve import (Chart, CocycleData, CurveModel, RhoOptions, good_local_lift,
                             goodness_check, res_good_wedge, rho_curve_cocycle, rho_curve_triple)
from chowdilog.errors import CocycleViolation, NotGood
from chowdilog.fields import QQ
from chowdilog.laurent import ClosedPoint, function_field
from chowdilog.multiplicative import wedge_is_zero
from chowdilog.omega import _H
from chowdilog.curve import _ell_res
from chowdilog.series import TSeries
from chowdilog.suites import (coboundary_instance, corrected_triple, independence_values,
                              random_good_local_pair, random_good_triple)

F = function_field(())
s = F.gen("s")


def T(*cs, N=None):
    cs = [F(c) for c in cs]
    if N:
        cs += [F(0)] * (N - len(cs))
    return TSeries(F, cs)


def test_goodness_examples():
    M = CurveModel(2)
    assert goodness_check(T(s, 0), ClosedPoint.rational(0), M)[0] == 1
    with pytest.raises(NotGood):
        goodness_check(T(1, s), ClosedPoint.infinity(), M)


def test_goodness_needs_the_moving_lift():
    f = T(s - 2, 1)                              # zero at s = 2 - t
    M = CurveModel(2)
    with pytest.raises(NotGood):
        goodness_check(f, ClosedPoint.rational(2), M)
    M.add_lift(ClosedPoint.rational(2), TSeries(QQ, [2, -1]))
    assert goodness_check(f, ClosedPoint.rational(2), M)[0] == 1
    # the literal worked example (s - 2 + t)/(s - 2) stays bad: zero and pole collide
    with pytest.raises(NotGood):
        goodness_check(T(1, 1 / (s - 2)), ClosedPoint.rational(2), M)


def test_good_local_lift_of_s():
    M = CurveModel(2)
    n, u, lifted = good_local_lift(T(s, 0), ClosedPoint.rational(0), M, 3)
    assert n == 1 and u.is_constant()


def test_res_good_wedge_examples():
    M = CurveModel(2)
    w = res_good_wedge([(1, (T(s * s, s * s), T(s, 0), T(3, 0)))], ClosedPoint.rational(0), M)
    expect = WedgeSum.single(TSeries(QQ, [1, 1]), TSeries(QQ, [3, 0]), coeff=-1)
    assert wedge_is_zero(w - expect)
    units = res_good_wedge([(1, (T(s + 1, 1), T(s - 5, s), T(3, 0)))], ClosedPoint.rational(0), M)
    assert wedge_is_zero(units)


def test_t_constant_triple_vanishes():
    M = CurveModel(2)
    assert rho_curve_triple((T(s, 0), T(1 - s, 0), T((s - 2) / (s - 3), 0)), M, 2, 3) == 0


@pytest.mark.parametrize("m,r,value", [(2, 3, fmpq(-1, 8)), (3, 4, fmpq(-1, 8)), (3, 5, fmpq(-29, 192))])
def test_corrected_triple_values(m, r, value):
    trip, M = corrected_triple(m)
    assert rho_curve_triple(trip, M, m, r) == value


def test_literal_worked_triple_is_not_good():
    M = CurveModel(2)
    M.add_lift(ClosedPoint.rational(2), TSeries(QQ, [2, -1]))
    trip = (T(s, 0), T(1 - s, 0), T(1, 1 / (s - 2)))    # (s - 2 + t)/(s - 2) = 1 + t/(s - 2)
    with pytest.raises(NotGood):
        rho_curve_triple(trip, M, 2, 3)


def test_slot_permutation_flips_sign():
    trip, M = corrected_triple(2)
    v = rho_curve_triple(trip, M, 2, 3)
    assert rho_curve_triple((trip[1], trip[0], trip[2]), M, 2, 3) == -v
    assert rho_curve_triple((trip[1], trip[2], trip[0]), M, 2, 3) == v


@pytest.mark.parametrize("m,r", [(2, 3), (3, 5)])
def test_independence_random_triples(m, r):
    rng = random.Random(m + 10 * r)
    for _ in range(2):
        trip, M = random_good_triple(rng, m)
        assert len(set(map(str, independence_values(trip, M, m, r, 3, rng.randrange(999))))) == 1


def quadratic_case():
    m = 2
    f1 = TSeries(F, [s * s - 2, F(-1)])
    f2 = TSeries(F, [1 - s, F(0)])
    f3 = TSeries(F, [(s - 2) / (s - 3), 1 / (s - 3)])
    M = CurveModel(m)
    M.add_lift(ClosedPoint.rational(2), TSeries(QQ, [2, -1]))
    P2 = ClosedPoint.from_poly([-2, 0, 1])
    K = P2.residue_field
    a = K.gen
    M.add_lift(P2, TSeries(K, [a, a / 4]))
    return (f1, f2, f3), M


def test_plain_trace_is_choice_independent():
    trip, M = quadratic_case()
    vals = {rho_curve_triple(trip, M, 2, 3)}
    for seed in range(3):
        opts = RhoOptions().randomized(seed, pad_generic=True, pad_local=True, local_reparam=True)
        vals.add(rho_curve_triple(trip, M, 2, 3, opts))
    assert vals == {fmpq(2811, 784)}


def test_normalized_trace_is_not_choice_independent():
    """Regression for the trace convention: dividing by the degree breaks the residue theorem."""
    trip, M = quadratic_case()
    vals = {rho_curve_triple(trip, M, 2, 3, RhoOptions(trace="normalized"))}
    for seed in range(3):
        opts = RhoOptions(trace="normalized").randomized(seed, pad_generic=True, pad_local=True,
                                                         local_reparam=True)
        vals.add(rho_curve_triple(trip, M, 2, 3, opts))
    assert len(vals) > 1


@pytest.mark.parametrize("m,r", [(2, 3), (3, 4), (3, 5)])
def test_good_residue_identity(m, r):
    rng = random.Random(m * r)
    for _ in range(5):
        (A, B), (ns, u1, u2), L = random_good_local_pair(rng, m, r)
        assert (_H(A, m, r, L) - _H(B, m, r, L)).residue() == _ell_res(ns, u1, m, r) - _ell_res(ns, u2, m, r)


@pytest.mark.parametrize("m,r", [(2, 3), (3, 5)])
def test_coboundaries_vanish(m, r):
    rng = random.Random(5 * m + r)
    for _ in range(2):
        D, M = coboundary_instance(rng, m)
        assert rho_curve_cocycle(D, M, m, r) == 0
        D.eps = {}
        with pytest.raises(CocycleViolation) as info:
            rho_curve_cocycle(D, M, m, r)
        assert info.value.condition == 2


def test_two_chart_data_matches_triple():
    trip, M = corrected_triple(2)
    g = [(fmpq(1), trip)]
    single = rho_curve_cocycle(CocycleData([Chart(0)], {0: g}), M, 2, 3)
    assert single == rho_curve_triple(trip, M, 2, 3)
    rng = random.Random(3)
    Dc, _ = coboundary_instance(rng, 2, avoid=(2,))
    charts = Dc.charts
    gamma = {0: g + Dc.gamma[0], 1: g + Dc.gamma[1]}
    D = CocycleData(charts, gamma, Dc.eps, Dc.beta)
    vals = {rho_curve_cocycle(D, M, 2, 3)}
    for seed in range(3):
        vals.add(rho_curve_cocycle(D, M, 2, 3, RhoOptions().randomized(seed, chart_choice="random",
                                                                       pad_local=True)))
    assert vals == {single}

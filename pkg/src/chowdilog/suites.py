"""Seeded verification suites behind `chowdilog verify`, and the random generators they share."""
from __future__ import annotations

import random
from dataclasses import dataclass

from flint import fmpq

from .bloch import (B2Elt, B2Tensor, WedgeSum, check_modulus, five_term, lambda_i_milnor,
                    li_mr, li_symbol, star)
from .curve import (Chart, CocycleData, CurveModel, LocalContext, RhoOptions, _ell_res,
                    residue_b2_tensor, rho_curve_cocycle, rho_curve_triple)
from .cycles import random_family, rho_cycle
from .errors import ChowDilogError
from .fields import QQ, RationalFunctionField
from .kahler import L_mr
from .laurent import ClosedPoint, LaurentField, function_field
from .omega import _H, omega_mr_pair
from .series import TSeries, series_exp

STAR_LAMBDAS = (fmpq(2), fmpq(3), fmpq(-1), fmpq(1, 2))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.ok else "FAIL"


# ---------------------------------------------------------------- generators

def rq(rng, lo=-4, hi=4, den=3):
    return fmpq(rng.randint(lo, hi), rng.randint(1, den))


def rq_nonzero(rng):
    while True:
        q = rq(rng)
        if q != 0:
            return q


def random_coeff(rng, dom):
    if dom is QQ:
        return rq(rng)
    s = dom.gen("s")
    kind = rng.randrange(3)
    if kind == 0:
        return dom(rq(rng))
    if kind == 1:
        return rq(rng) * s + rq(rng)
    return (rq(rng) * s + rq(rng)) / (s - rng.randint(-3, 4))


def random_const(rng, dom, avoid=(0,)):
    """A nonzero t^0 coefficient avoiding the given values."""
    while True:
        if dom is QQ:
            v = rq_nonzero(rng)
        else:
            s = dom.gen("s")
            v = (rq_nonzero(rng) * s + rq(rng)) / (s - rng.randint(-3, 4))
            if dom.is_zero(v):
                continue
        if all(not dom.is_zero(v - a) for a in avoid):
            return v


def random_unit(rng, dom, N, const=None):
    c0 = random_const(rng, dom) if const is None else dom(const)
    return TSeries(dom, [c0] + [random_coeff(rng, dom) for _ in range(N - 1)])


def random_flat(rng, dom, N):
    return random_unit(rng, dom, N, random_const(rng, dom, (0, 1)))


def relative_pair(rng, dom, m, r, flat=False):
    """Two lifts to precision r that agree modulo t^m."""
    a = random_flat(rng, dom, r) if flat else random_unit(rng, dom, r)
    high = [random_coeff(rng, dom) for _ in range(r - m)]
    return a, TSeries(dom, list(a.c[:m]) + high)


def corrected_triple(m):
    """(s, 1-s, (s-2+t)/(s-3)) with the lift s = 2 -> 2 - t."""
    F = function_field(())
    s = F.gen("s")
    z = [F(0)] * (m - 1)
    trip = (TSeries(F, [s] + z), TSeries(F, [1 - s] + z),
            TSeries(F, [(s - 2) / (s - 3), 1 / (s - 3)] + [F(0)] * (m - 2)))
    M = CurveModel(m)
    M.add_lift(ClosedPoint.rational(2), TSeries(QQ, [2, -1] + [0] * (m - 2)))
    return trip, M


def random_good_triple(rng, m):
    """Triples of products of moving linear factors, good for the lifts recorded in the model.

    Each factor (s - a - b t) is good at s = a for the lift a - b t; the points
    a are distinct so that every point carries at most one moving factor.
    """
    F = function_field(())
    s = F.gen("s")
    pts = rng.sample(range(-5, 9), 6)
    M = CurveModel(m)
    factors = []
    for a in pts:
        b = rq(rng)
        if b != 0:
            M.add_lift(ClosedPoint.rational(a), TSeries(QQ, [a, -b] + [0] * (m - 2)))
        factors.append(TSeries(F, [s - a, F(b)] + [F(0)] * (m - 2)))
    c = [TSeries.const(F, rq_nonzero(rng), m) for _ in range(3)]
    e = rng.sample(range(6), 6)
    f1 = c[0] * factors[e[0]] * factors[e[1]].inv() if rng.random() < 0.5 else c[0] * factors[e[0]]
    f2 = c[1] * factors[e[2]] * factors[e[3]]
    f3 = c[2] * factors[e[4]] * factors[e[5]].inv()
    return (f1, f2, f3), M


def star_model(M: CurveModel, lam) -> CurveModel:
    out = CurveModel(M.m, M.base_vars)
    for pt, a in M.lifts.values():
        out.add_lift(pt, a.star_scale(lam))
    return out


def random_good_local_pair(rng, m, r):
    """A slotwise pair of good wedges at s = 0 (lift 0 -> a(t)) agreeing modulo t^m."""
    M = CurveModel(m)
    pt = ClosedPoint.rational(0)
    M.add_lift(pt, TSeries(QQ, [0] + [rq(rng) for _ in range(m - 1)]))
    ctx = LocalContext(M, pt, r, 24, RhoOptions())
    L, K = ctx.L, ctx.K

    def poly(lo_const=True):
        cs = [rq(rng) for _ in range(rng.randint(1, 3))]
        if lo_const and cs[0] == 0:
            cs[0] = fmpq(1)
        return L.series(0, [K(c) for c in cs], float("inf"))

    first, second, ns, u1, u2 = [], [], [], [], []
    for _ in range(3):
        n = rng.randint(-2, 2)
        low = [poly(True)] + [poly(False) for _ in range(m - 1)]
        a = TSeries(L, low + [poly(False) for _ in range(r - m)], False)
        b = TSeries(L, low + [poly(False) for _ in range(r - m)], False)
        sn = ctx.s_tilde ** n if n else TSeries.const(L, 1, r)
        first.append(a * sn)
        second.append(b * sn)
        ns.append(n)
        u1.append(ctx.bar(a))
        u2.append(ctx.bar(b))
    return (tuple(first), tuple(second)), (ns, u1, u2), L


def coboundary_instance(rng, m, avoid=()):
    """Cocycle data delta/res of a 0-cochain on the charts P^1 - {0} and P^1 - {inf}.

    alpha_0 carries exp(c t / s) factors (pole at s = 0, excluded from chart 0),
    alpha_1 carries exp(h(s) t) with h a polynomial (pole at infinity).
    """
    F = function_field(())
    s = F.gen("s")
    p, q, a, p1, q1, a1 = rng.sample([v for v in range(-6, 9) if v != 0 and v not in avoid], 6)

    def E(g):
        return series_exp(TSeries.monomial(F, g, 1, m))

    def C(f):
        return TSeries.const(F, f, m)

    A0 = B2Tensor.symbol(C((s - p) / (s - q)) * E(rq_nonzero(rng) / s),
                         C(s - a) * E(rq_nonzero(rng) / s))
    A1 = B2Tensor.symbol(C((s - p1) / (s - q1)) * E(rq(rng) * s + rq_nonzero(rng)),
                         C(s - a1) * E(rq(rng) * s + rq(rng)))
    O, I = ClosedPoint.rational(0), ClosedPoint.infinity()
    U0, U1 = Chart(0, (O,)), Chart(1, (I,))
    M = CurveModel(m)
    pts = [ClosedPoint.rational(v) for v in (0, p, q, a, p1, q1, a1)] + [I]

    def eps_of(A, chart):
        out = {}
        for pt in pts:
            if chart.contains(pt):
                e = residue_b2_tensor(A, pt, M)
                if not e.is_zero():
                    out[pt.key()] = (pt, e)
        return out

    def dterms(B):
        return [(c, (1 - x, x, y)) for c, x, y in B.items()]

    D = CocycleData([U0, U1], {0: dterms(A0), 1: dterms(A1)},
                    {0: eps_of(A0, U0), 1: eps_of(A1, U1)}, {(0, 1): A1 - A0})
    return D, M


# ---------------------------------------------------------------- suites

def suite_fiveterm(m, r, trials, rng):
    check_modulus(m, r)
    bad = 0
    F = RationalFunctionField(("s",))
    done = 0
    while done < trials:
        dom = QQ if done % 2 == 0 else F
        x, y = random_flat(rng, dom, m), random_flat(rng, dom, m)
        try:
            e = five_term(x, y)
        except ChowDilogError:
            continue
        v = li_mr(e, m, r)
        bad += not (v == 0 or (hasattr(dom, "is_zero") and dom.is_zero(v)))
        done += 1
    return [Check(f"fiveterm m={m} r={r}", bad == 0, f"{trials - bad}/{trials} vanish")]


def _scaled(v, lam, r):
    return v * lam ** r


def suite_starweight(m, r, trials, rng):
    F = RationalFunctionField(("s",))
    out = []
    ok = {"li": True, "L": True, "omega": True, "rho-curve": True, "rho-cycle": True}
    for k in range(trials):
        lam = STAR_LAMBDAS[k % len(STAR_LAMBDAS)]
        x = random_flat(rng, F, m)
        e = B2Elt.symbol(x)
        ok["li"] &= li_mr(star(lam, e), m, r) == _scaled(li_mr(e, m, r), lam, r)
        y = random_unit(rng, F, m)
        T = B2Tensor.symbol(x, y)
        ok["L"] &= L_mr(star(lam, T), m, r) == L_mr(T, m, r) * lam ** r
        while True:
            try:
                (a1, a2), (b1, b2), (c1, c2) = (relative_pair(rng, F, m, r) for _ in range(3))
                A, B = [(1, (a1, b1, c1))], [(1, (a2, b2, c2))]
                w = omega_mr_pair(A, B, m, r)
                break
            except ChowDilogError:
                continue
        As = [(1, tuple(v.star_scale(lam) for v in (a1, b1, c1)))]
        Bs = [(1, tuple(v.star_scale(lam) for v in (a2, b2, c2)))]
        ok["omega"] &= omega_mr_pair(As, Bs, m, r) == w * lam ** r
    trip, M = corrected_triple(m)
    for lam in STAR_LAMBDAS:
        v = rho_curve_triple(trip, M, m, r)
        vs = rho_curve_triple(tuple(f.star_scale(lam) for f in trip), star_model(M, lam), m, r)
        ok["rho-curve"] &= vs == v * lam ** r
    fam = random_family(rng, r)
    Z = fam.build(r)
    for lam in STAR_LAMBDAS:
        ok["rho-cycle"] &= rho_cycle(Z.star(lam), m, r) == rho_cycle(Z, m, r) * lam ** r
    for name, good in ok.items():
        out.append(Check(f"starweight {name} m={m} r={r}", good))
    return out


def suite_boundary(m, r, trials, rng):
    F = RationalFunctionField(("s",))
    bad_L = 0
    for _ in range(trials):
        x = random_flat(rng, F, m)
        bad_L += not L_mr(B2Tensor.symbol(x, x), m, r).is_zero()
    bad_w = 0
    done = 0
    while done < trials:
        x1, x2 = relative_pair(rng, F, m, r, flat=True)
        y1, y2 = relative_pair(rng, F, m, r)
        try:
            w = omega_mr_pair([(1, (1 - x1, x1, y1))], [(1, (1 - x2, x2, y2))], m, r)
        except ChowDilogError:
            continue
        bad_w += not w.is_zero()
        done += 1
    bad_c = 0
    n_c = max(1, min(10, trials))
    for j in range(n_c):
        D, M = coboundary_instance(rng, m)
        opts = RhoOptions().randomized(rng.randrange(1 << 30), pad_generic=True, pad_local=True,
                                       chart_choice="random")
        bad_c += rho_curve_cocycle(D, M, m, r, opts) != 0
    return [Check(f"boundary L([x](x)x) m={m} r={r}", bad_L == 0, f"{bad_L} nonzero"),
            Check(f"boundary omega(delta relative) m={m} r={r}", bad_w == 0, f"{bad_w} nonzero"),
            Check(f"boundary coboundary cocycles m={m} r={r}", bad_c == 0, f"{bad_c}/{n_c} nonzero")]


def suite_residue(m, r, trials, rng):
    bad = 0
    for _ in range(trials):
        (A, B), (ns, u1, u2), L = random_good_local_pair(rng, m, r)
        lhs = (_H(A, m, r, L) - _H(B, m, r, L)).residue()
        rhs = _ell_res(ns, u1, m, r) - _ell_res(ns, u2, m, r)
        bad += lhs != rhs
    return [Check(f"residue identity m={m} r={r}", bad == 0, f"{trials - bad}/{trials} agree")]


def independence_values(trip, M, m, r, choices, seed):
    """rho for the canonical choices and `choices` randomized ones."""
    vals = [rho_curve_triple(trip, M, m, r)]
    for j in range(choices):
        opts = RhoOptions().randomized(
            (seed, j).__hash__() & 0xFFFFFFFF, pad_generic=True, pad_local=True,
            pad_lift=True, local_reparam=True)
        vals.append(rho_curve_triple(trip, M, m, r, opts))
    return vals


def suite_independence(m, r, trials, rng):
    out = []
    bad = 0
    for k in range(trials):
        trip, M = corrected_triple(m) if k == 0 else random_good_triple(rng, m)
        vals = independence_values(trip, M, m, r, 5, rng.randrange(1 << 30))
        bad += len(set(map(str, vals))) != 1
    out.append(Check(f"independence m={m} r={r}", bad == 0, f"{trials - bad}/{trials} triples"))
    return out


def milnor_sides(r=3):
    """lambda_i images of 2{1 + t^2/2, lam} and {1 + t/lam, 1 + lam t} over Q(lam)."""
    D = RationalFunctionField(("x",))
    lam = D.gen("x")
    one = TSeries.const(D, 1, r + 1)
    t = TSeries.t(D, r + 1)
    a = one + t * t * fmpq(1, 2)
    lhs = WedgeSum(2, [(2, (a, TSeries.const(D, lam, r + 1)))])
    rhs = WedgeSum(2, [(1, (one + t * (1 / lam), one + t * lam))])
    return [(i, lambda_i_milnor(lhs, i), lambda_i_milnor(rhs, i)) for i in range(1, r)]


def suite_milnor(m, r, trials, rng):
    sides = milnor_sides(3)
    ok = all(a == b for _, a, b in sides)
    return [Check("milnor identity r=3", ok, "; ".join(f"i={i}: {a.fmt() or '0'}" for i, a, _ in sides))]


def suite_cycle(m, r, trials, rng):
    bad = 0
    paths = 0
    witness = 0
    for _ in range(trials):
        fam = random_family(rng, r)
        Z1 = fam.build(r)
        Z2 = fam.perturbed(m, rng).build(r)
        v1, v2 = rho_cycle(Z1, m, r), rho_cycle(Z2, m, r)
        bad += v1 != v2
        paths += v1 != rho_cycle(Z1, m, r, path="coefficient")
        Z3 = fam.perturbed(m - 1, rng, index=rng.choice(fam.dilog_params)).build(r)
        witness += rho_cycle(Z3, m, r) != v1
    return [Check(f"cycle congruence m={m} r={r}", bad == 0, f"{trials - bad}/{trials} equal"),
            Check(f"cycle residue/coefficient paths m={m} r={r}", paths == 0),
            Check(f"cycle t^(m-1) witness m={m} r={r}", witness > 0, f"{witness}/{trials} differ")]


SUITES = {
    "fiveterm": suite_fiveterm,
    "starweight": suite_starweight,
    "boundary": suite_boundary,
    "residue": suite_residue,
    "independence": suite_independence,
    "milnor": suite_milnor,
    "cycle": suite_cycle,
}


def run_suite(name, m, r, trials, seed):
    check_modulus(m, r)
    return SUITES[name](m, r, trials, random.Random(seed))

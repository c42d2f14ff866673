"""The infinitesimal Chow dilogarithm on the projective s-line over k[t]/(t^m).

Local computations happen in K((z)) where K is the residue field of a closed
point and z = s - root (z = 1/s at infinity).  A point lift a(t), with
a(0) the root, gives the local uniformizer lift  s~ = z - (a(t) - a(0)).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from flint import fmpq

from .bloch import B2Elt, B2Tensor, WedgeSum, check_modulus, ell_pair, li_symbol
from .errors import (CocycleViolation, NotGood, PrecisionExceeded, Unsupported,
                     WindowTooNarrow)
from .fields import QQ, RF, RationalFunctionField
from .laurent import (INF, ClosedPoint, Laurent, LaurentField, function_field,
                      laurent_expand, order_at, support_points)
from .omega import _H, reparam_series
from .series import TSeries

MAX_WINDOW = 64


@dataclass
class CurveModel:
    """P^1 over k_m together with the chosen point lifts.

    `lifts` maps a point key to (ClosedPoint, a(t)) with a(t) a series over the
    residue field whose constant term is the root (0 at infinity, in 1/s).
    """

    m: int
    base_vars: tuple = ()
    lifts: dict = field(default_factory=dict)

    @property
    def F(self) -> RationalFunctionField:
        return function_field(self.base_vars)

    def add_lift(self, pt: ClosedPoint, a: TSeries):
        K = pt.residue_field
        a = TSeries(K, a.c, True)
        root = K.zero if pt.is_infinite else pt.root
        if not K.is_zero(a.c[0] - root):
            raise ValueError(f"lift at {pt.key()} does not reduce to the point")
        if a.prec < self.m:
            raise PrecisionExceeded(f"lift at {pt.key()} needs precision >= {self.m}")
        self.lifts[pt.key()] = (pt, a)

    def lift(self, pt: ClosedPoint) -> TSeries:
        hit = self.lifts.get(pt.key())
        if hit is not None:
            return hit[1]
        K = pt.residue_field
        root = K.zero if pt.is_infinite else pt.root
        return TSeries.const(K, root, self.m)

    def lift_points(self):
        return [pt for pt, a in self.lifts.values() if not a.is_constant()]


@dataclass
class RhoOptions:
    """Choices entering the regulator.  With `rng` unset every padding is zero."""

    trace: str = "plain"               # or "normalized"
    rng: random.Random | None = None
    pad_generic: bool = False
    pad_local: bool = False
    pad_lift: bool = False
    local_reparam: bool = False
    window: int | None = None
    chart_choice: str = "first"        # or "random" (cocycle data)
    check_outside: int = 0             # number of extra points where the contribution must vanish

    def randomized(self, seed, **flags):
        d = dict(self.__dict__)
        d.update(flags)
        d["rng"] = random.Random(seed)
        return RhoOptions(**d)


def _rand_q(rng, lo=-3, hi=3):
    return fmpq(rng.randint(lo, hi), rng.randint(1, 3))


def random_function(F, rng, base_vars=()):
    """A small random element of F, possibly with new poles."""
    s = F.gen("s")
    num = _rand_q(rng) + _rand_q(rng) * s
    if rng.random() < 0.5:
        return F(num)
    den = s - rng.randint(-4, 6)
    return num / den


def generic_lift(f: TSeries, r: int, opts: RhoOptions, base_vars=()) -> TSeries:
    if opts.rng is None or not opts.pad_generic:
        return f.pad(r)
    F = f.dom
    fill = [None] * f.prec + [random_function(F, opts.rng, base_vars) for _ in range(r - f.prec)]
    return f.pad(r, fill)


def trace_value(v, K, mode: str):
    t = K.trace(v)
    if mode == "normalized" and K.degree > 1:
        return t / K.degree
    return t


# ---------------------------------------------------------------- local context

class LocalContext:
    """Everything needed at one closed point for one window size."""

    def __init__(self, model: CurveModel, pt: ClosedPoint, r: int, P: int, opts: RhoOptions):
        self.pt = pt
        self.m = model.m
        self.r = r
        self.P = P
        self.opts = opts
        K = pt.residue_field
        self.K = K
        self.L = L = LaurentField(K, "z", work=P)
        lift = model.lift(pt).reduce(self.m)
        fill = None
        rng = opts.rng
        if rng is not None and opts.pad_lift:
            fill = [None] * self.m + [K(_rand_q(rng)) for _ in range(r - self.m)]
        lift = lift.pad(r, fill)
        self.a_plus = TSeries(K, [K.zero] + list(lift.c[1:]), False)
        self.shift = None
        if rng is not None and opts.local_reparam:
            w = rng.randint(1, r)
            alpha = K(_rand_q(rng)) + L.z * _rand_q(rng) if w < r else K.zero
            self.shift = TSeries.monomial(L, alpha, w, r) if w < r else None
        z = L.z
        st = [z] + [L(-c) for c in self.a_plus.c[1:]]
        self.s_tilde = TSeries(L, st, False)
        self._cache = {}

    # expansions ---------------------------------------------------------
    def expand_coeff(self, c):
        key = (self.pt.key(), str(c))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if isinstance(c, RF):
            if c.F.is_zero(c):
                v = self.L.zero
            else:
                v = laurent_expand(c, self.pt, rel=self.P, L=self.L)
        else:
            v = self.L(c)
        self._cache[key] = v
        return v

    def expand(self, f: TSeries) -> TSeries:
        return TSeries(self.L, [self.expand_coeff(c) for c in f.c], False)

    def order(self, f: TSeries) -> int:
        c0 = f.c[0]
        if isinstance(c0, RF):
            return order_at(c0, self.pt)
        return 0

    # goodness -----------------------------------------------------------
    def goodness(self, f: TSeries):
        """(n, u) with f = u * s~^n modulo t^m, u a unit of the local ring."""
        m = self.m
        fm = f.reduce(m)
        n = self.order(fm)
        floc = self.expand(fm)
        st = self.s_tilde.reduce(m)
        u = floc * (st ** (-n)) if n else floc
        for j, c in enumerate(u.c):
            if c.p != INF and c.p <= 0 and not c.c:
                raise WindowTooNarrow(f"coefficient t^{j} of the local unit is unknown")
            if c.c and c.v < 0:
                raise NotGood(f"not good at {self.pt.key()}: t^{j} coefficient of the "
                              f"cofactor has a pole of order {-c.v}", order=j)
            if c.p != INF and c.p <= 0:
                raise WindowTooNarrow(f"coefficient t^{j} of the local unit is not known to order 0")
        if u.c[0].valuation() != 0:
            raise NotGood(f"not good at {self.pt.key()}: cofactor is not a unit", order=0)
        return n, u

    def good_lift(self, f: TSeries):
        """(n, u~, gamma~) with gamma~ = u~ s~^n over K((z))[t]/(t^r)."""
        n, u = self.goodness(f)
        r = self.r
        fill = None
        rng = self.opts.rng
        if rng is not None and self.opts.pad_local:
            fill = [None] * self.m
            for _ in range(self.m, r):
                deg = rng.randint(0, 2)
                fill.append(self.L.series(0, [self.K(_rand_q(rng)) for _ in range(deg + 1)], INF))
        ut = u.pad(r, fill)
        g = ut * (self.s_tilde ** n) if n else ut
        return n, ut, g

    def bar(self, u: TSeries) -> TSeries:
        """u evaluated along the lift: z -> a_+(t)."""
        r = u.prec
        K = self.K
        a = self.a_plus.reduce(r) if self.a_plus.prec >= r else self.a_plus.pad(r)
        powers = [TSeries.const(K, 1, r)]
        for _ in range(1, r):
            powers.append(powers[-1] * a)
        out = [K.zero] * r
        for j in range(r):
            c = u.c[j]
            for k in range(0, r - j):
                coef = c.coeff(k)
                if K.is_zero(coef):
                    continue
                pk = powers[k]
                for i in range(k, r - j):
                    if not K.is_zero(pk.c[i]):
                        out[i + j] = out[i + j] + coef * pk.c[i]
            if c.c and c.v < 0:
                raise NotGood(f"unit part has a pole at {self.pt.key()}")
        return TSeries(K, out, False)

    def apply_shift(self, f: TSeries) -> TSeries:
        if self.shift is None:
            return f
        return reparam_series(self.shift, f)


def _ell_res(ns, ubars, m: int, r: int):
    """ell_{m,r} of n1 u2^u3 - n2 u1^u3 + n3 u1^u2."""
    (n1, n2, n3), (u1, u2, u3) = ns, ubars
    total = None
    for n, a, b in ((n1, u2, u3), (-n2, u1, u3), (n3, u1, u2)):
        if n == 0:
            continue
        v = ell_pair(a, b, m, r) * n
        total = v if total is None else total + v
    return total if total is not None else u1.dom.zero


def _res_wedge(ns, ubars) -> WedgeSum:
    (n1, n2, n3), (u1, u2, u3) = ns, ubars
    return WedgeSum(2, [(n1, (u2, u3)), (-n2, (u1, u3)), (n3, (u1, u2))])


def res_good_wedge(terms, pt: ClosedPoint, model: CurveModel, r: int | None = None,
                   P: int = 16) -> WedgeSum:
    """Residue along the lifted point of a Lambda^3 combination of good units.

    Each slot is written u s~^n and the result is n1 u2^u3 - n2 u1^u3 + n3 u1^u2
    with u-bar the restriction along the lift, at t-precision r (default m).
    """
    r = r or model.m

    def run(PP):
        ctx = LocalContext(model, pt, r, PP, RhoOptions())
        out = WedgeSum(2)
        for c, ents in terms:
            ns, ubars = [], []
            for f in ents:
                n, ut, _ = ctx.good_lift(f)
                ns.append(n)
                ubars.append(ctx.bar(ut))
            out = out + _res_wedge(ns, ubars) * c
        return out

    return _with_window(run, P)


# ---------------------------------------------------------------- regulator on Lambda^3 data

def _support(terms, model: CurveModel, extra=()):
    seen = {}
    for _, ents in terms:
        for f in ents:
            for k, c in enumerate(f.c):
                if not isinstance(c, RF) or c.is_constant():
                    continue
                pts = support_points(c, model.base_vars) if k == 0 else _pole_points(c, model.base_vars)
                for p in pts:
                    seen[p.key()] = p
    for p in list(model.lift_points()) + list(extra):
        seen[p.key()] = p
    inf = ClosedPoint.infinity(model.base_vars)
    seen[inf.key()] = inf
    return sorted(seen.values())


def _pole_points(c: RF, base_vars):
    from .laurent import _points_of_poly
    return _points_of_poly(c.F, c.d, base_vars)


def _with_window(fn, start: int):
    P = start
    while True:
        try:
            return fn(P)
        except WindowTooNarrow:
            if P >= MAX_WINDOW:
                raise
            P = min(2 * P, MAX_WINDOW)


def _initial_window(terms, model, r, pts):
    worst = 0
    for _, ents in terms:
        for f in ents:
            for c in f.c:
                if isinstance(c, RF) and not c.is_constant():
                    worst = max(worst, c.d.total_degree(), c.n.total_degree())
    return 3 * worst + r + 2


def point_contribution(pt, terms_generic, terms_local, model, m, r, opts, P,
                       extra_generic=()):
    """Tr( ell_{m,r}(res gamma~_c) + res_c omega(generic, gamma~_c) ) at one point.

    terms_generic: [(coeff, (G1,G2,G3))] over F at precision r (the generic side)
    terms_local:   [(coeff, (f1,f2,f3))] over F at precision m (made good locally)
    """
    ctx = LocalContext(model, pt, r, P, opts)
    term1 = ctx.K.zero
    loc_side = []
    for c, ents in terms_local:
        ns, ubars, gts = [], [], []
        for f in ents:
            n, ut, g = ctx.good_lift(f)
            ns.append(n)
            gts.append(ctx.apply_shift(g))
            ubars.append(ctx.bar(ut))
        term1 = term1 + _ell_res(ns, ubars, m, r) * c
        loc_side.append((c, tuple(gts)))
    gen_side = []
    for c, ents in list(terms_generic) + list(extra_generic):
        gen_side.append((c, tuple(ctx.apply_shift(ctx.expand(G)) for G in ents)))
    L = ctx.L
    w = L.zero
    for c, ents in gen_side:
        w = w + _H(ents, m, r, L) * c
    for c, ents in loc_side:
        w = w - _H(ents, m, r, L) * c
    term2 = w.residue()
    return trace_value(term1 + term2, ctx.K, opts.trace), (term1, term2)


def rho_terms(terms, model: CurveModel, m: int, r: int, opts: RhoOptions | None = None,
              detail: bool = False):
    """rho_{m,r} of a Lambda^3 combination of global good units [(coeff, (f1,f2,f3))]."""
    check_modulus(m, r)
    if model.m != m:
        raise ValueError("model modulus differs from m")
    opts = opts or RhoOptions()
    for _, ents in terms:
        for f in ents:
            if f.prec < m:
                raise PrecisionExceeded(f"inputs need precision >= {m}")
    terms_m = [(c, tuple(f.reduce(m) for f in ents)) for c, ents in terms]
    gen = [(c, tuple(generic_lift(f, r, opts, model.base_vars) for f in ents)) for c, ents in terms_m]
    pts = _support(gen, model)
    P0 = opts.window or _initial_window(gen, model, r, pts)
    total = None
    parts = {}
    for pt in pts:
        val, raw = _with_window(
            lambda P: point_contribution(pt, gen, terms_m, model, m, r, opts, P), P0)
        parts[pt.key()] = raw
        total = val if total is None else total + val
    if opts.check_outside:
        _check_outside(gen, terms_m, model, m, r, opts, pts, P0)
    if total is None:
        total = QQ.zero if not model.base_vars else RationalFunctionField(model.base_vars).zero
    return (total, parts) if detail else total


def _check_outside(gen, terms_m, model, m, r, opts, pts, P0):
    used = {p.key() for p in pts}
    k = 0
    c = 7
    while k < opts.check_outside:
        c += 1
        pt = ClosedPoint.rational(c * 13 + 1, model.base_vars)
        if pt.key() in used:
            continue
        val, _ = _with_window(lambda P: point_contribution(pt, gen, terms_m, model, m, r, opts, P), P0)
        if val != 0:
            raise AssertionError(f"nonzero contribution {val} outside the support at {pt.key()}")
        k += 1


def rho_curve_triple(triple, model: CurveModel, m: int, r: int, opts: RhoOptions | None = None):
    return rho_terms([(fmpq(1), tuple(triple))], model, m, r, opts)


def goodness_check(f: TSeries, pt: ClosedPoint, model: CurveModel, P: int = 16):
    """(n, u) at `pt`, or NotGood."""
    opts = RhoOptions()
    ctx_fn = lambda PP: LocalContext(model, pt, max(model.m + 1, 2), PP, opts).goodness(f)
    return _with_window(ctx_fn, P)


def good_local_lift(f: TSeries, pt: ClosedPoint, model: CurveModel, r: int, P: int = 16,
                    opts: RhoOptions | None = None):
    opts = opts or RhoOptions()
    return _with_window(lambda PP: LocalContext(model, pt, r, PP, opts).good_lift(f), P)


# ---------------------------------------------------------------- cocycle data

@dataclass
class Chart:
    """The open set P^1 minus finitely many closed points."""

    index: int
    excluded: tuple = ()

    def contains(self, pt: ClosedPoint) -> bool:
        return pt.key() not in {p.key() for p in self.excluded}


@dataclass
class CocycleData:
    charts: list
    gamma: dict                          # i -> [(coeff, (f1,f2,f3))]
    eps: dict = field(default_factory=dict)      # i -> {point key: (ClosedPoint, B2Elt)}
    beta: dict = field(default_factory=dict)     # (i, j) -> B2Tensor, i < j

    def beta_ij(self, i, j) -> B2Tensor:
        if i == j:
            return B2Tensor()
        if (i, j) in self.beta:
            return self.beta[(i, j)]
        if (j, i) in self.beta:
            return -self.beta[(j, i)]
        return B2Tensor()

    def eps_at(self, i, pt: ClosedPoint) -> B2Elt:
        hit = self.eps.get(i, {}).get(pt.key())
        return hit[1] if hit else B2Elt()


def _delta_terms(b: B2Tensor):
    return [(c, (1 - x, x, y)) for c, x, y in b.items()]


def _terms_to_wedge(terms) -> WedgeSum:
    return WedgeSum(3, terms)


def validate_cocycle(D: CocycleData, model: CurveModel):
    """Check (i) delta(beta_ij) = gamma_j - gamma_i, (ii) res beta_ij = eps_j - eps_i,
    (iii) beta_jk - beta_ik + beta_ij = 0.  B2 equalities are formal."""
    from .multiplicative import wedge_is_zero
    idx = [c.index for c in D.charts]
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            lhs = _terms_to_wedge(_delta_terms(D.beta_ij(i, j)))
            rhs = _terms_to_wedge(D.gamma[j]) - _terms_to_wedge(D.gamma[i])
            if not wedge_is_zero(lhs - rhs):
                raise CocycleViolation(f"condition (i) fails for charts ({i},{j})", condition=1)
    charts = {c.index: c for c in D.charts}
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            B = D.beta_ij(i, j)
            for pt in _points_union(B, D, i, j, model):
                if not (charts[i].contains(pt) and charts[j].contains(pt)):
                    continue
                res = residue_b2_tensor(B, pt, model)
                want = D.eps_at(j, pt) - D.eps_at(i, pt)
                if not _b2_formally_equal(res, want):
                    raise CocycleViolation(
                        f"condition (ii) fails for charts ({i},{j}) at {pt.key()}", condition=2)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            for c in range(b + 1, len(idx)):
                i, j, k = idx[a], idx[b], idx[c]
                tot = D.beta_ij(j, k) - D.beta_ij(i, k) + D.beta_ij(i, j)
                if not tot.is_zero():
                    raise CocycleViolation(f"condition (iii) fails for ({i},{j},{k})", condition=3)


def _points_union(B: B2Tensor, D: CocycleData, i, j, model):
    seen = {}
    for _, x, y in B.items():
        for f in (x, 1 - x, y):
            for k, c in enumerate(f.c):
                if isinstance(c, RF) and not c.is_constant():
                    for p in support_points(c, model.base_vars):
                        seen[p.key()] = p
    for ii in (i, j):
        for key, (pt, _) in D.eps.get(ii, {}).items():
            seen[key] = pt
    inf = ClosedPoint.infinity(model.base_vars)
    seen[inf.key()] = inf
    return list(seen.values())


def _b2_formally_equal(a: B2Elt, b: B2Elt) -> bool:
    d = a - b
    return d.is_zero()


def residue_b2_tensor(B: B2Tensor, pt: ClosedPoint, model: CurveModel, P: int = 16) -> B2Elt:
    """res_c([x] (x) y) = ord(y) [x-bar], with [0] = [1] = [infinity] = 0."""
    m = model.m

    def run(PP):
        ctx = LocalContext(model, pt, m, PP, RhoOptions())
        out = B2Elt()
        for c, x, y in B.items():
            ny, _ = ctx.goodness(y)
            if ny == 0:
                continue
            nx, ux = ctx.goodness(x)
            n1, _ = ctx.goodness(1 - x)
            if nx != 0 or n1 != 0:
                continue
            xb = ctx.bar(ux)
            out = out + B2Elt.symbol(xb, c * ny)
        return out

    return _with_window(run, P)


def rho_curve_cocycle(D: CocycleData, model: CurveModel, m: int, r: int,
                      opts: RhoOptions | None = None, validate: bool = True):
    """sum_c Tr( ell(res gamma~_{j_c}) - li(eps_{j_c,c}) + res_c omega(gamma~_{i eta} - delta beta~_{j_c i}, gamma~_{j_c}) )."""
    check_modulus(m, r)
    opts = opts or RhoOptions()
    if validate:
        validate_cocycle(D, model)
    rng = opts.rng
    charts = D.charts
    if opts.chart_choice == "random" and rng is not None:
        i = rng.choice(charts).index
    else:
        i = charts[0].index
    gen_i = [(c, tuple(generic_lift(f.reduce(m), r, opts, model.base_vars) for f in ents))
             for c, ents in D.gamma[i]]
    all_terms = []
    for ch in charts:
        all_terms += [(c, tuple(f.pad(r) for f in ents)) for c, ents in D.gamma[ch.index]]
    beta_gen = {}
    for ch in charts:
        B = D.beta_ij(ch.index, i)
        beta_gen[ch.index] = [(c, (1 - X, X, Y)) for c, X, Y in
                              ((c, generic_lift(x.reduce(m), r, opts, model.base_vars),
                                generic_lift(y.reduce(m), r, opts, model.base_vars))
                               for c, x, y in B.items())]
        all_terms += beta_gen[ch.index]
    extra = []
    for ch in charts:
        for key, (pt, _) in D.eps.get(ch.index, {}).items():
            extra.append(pt)
        extra += list(ch.excluded)
    pts = _support(all_terms + gen_i, model, extra)
    P0 = opts.window or _initial_window(all_terms + gen_i, model, r, pts)
    total = None
    for pt in pts:
        containing = [ch for ch in charts if ch.contains(pt)]
        if not containing:
            raise CocycleViolation(f"{pt.key()} is not covered by any chart", condition=0)
        if opts.chart_choice == "random" and rng is not None:
            jc = rng.choice(containing).index
        else:
            jc = containing[0].index
        extra_generic = [(-c, ents) for c, ents in beta_gen[jc]]
        terms_local = [(c, tuple(f.reduce(m) for f in ents)) for c, ents in D.gamma[jc]]

        def run(P):
            return point_contribution(pt, gen_i, terms_local, model, m, r, opts, P,
                                      extra_generic=extra_generic)

        val, _ = _with_window(run, P0)
        eps = D.eps_at(jc, pt)
        if not eps.is_zero():
            K = pt.residue_field
            val = val - trace_value(K(li_eps(eps, m, r)), K, opts.trace)
        total = val if total is None else total + val
    return total


def li_eps(e: B2Elt, m: int, r: int):
    acc = None
    for c, x in e.items():
        v = li_symbol(x, m, r) * c
        acc = v if acc is None else acc + v
    return acc if acc is not None else 0

"""Parametrized cycles in the cube over k[[t]] and their regulator l_{m,r} o boundary.

A cycle is the image of the u-line under u -> (y1, y2, y3) with each y_i a
rational function of u and t.  The cube is (P^1 - {1})^3 with faces y_i = 0
and y_i = infinity.  Boundary points are found by factoring the t = 0
reduction of each face equation and Hensel lifting every simple root; the
point u = infinity is handled in the chart v = 1/u.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from flint import fmpq, fmpq_poly

from .bloch import check_modulus, ell_pair
from .errors import (ChowDilogError, MultipleRoot, NonUnit, NotCongruent, ParseError,
                     PrecisionExceeded, Unsupported)
from .fields import QQ, RF, RationalFunctionField
from .laurent import ClosedPoint
from .series import TSeries

UT = RationalFunctionField(("u", "t"))


# ---------------------------------------------------------------- bivariate helpers

def _split(p):
    """{k: fmpq_poly in t} with p = sum_k c_k(t) u^k."""
    out = {}
    for (a, b), c in p.to_dict().items():
        out.setdefault(a, {})[b] = c
    res = {}
    for a, cs in out.items():
        deg = max(cs)
        res[a] = fmpq_poly([cs.get(j, 0) for j in range(deg + 1)])
    return res


def _ulist(p):
    d = _split(p)
    n = max(d) if d else -1
    return [d.get(k, fmpq_poly([])) for k in range(n + 1)]


@dataclass
class ChartPoly:
    """y = P(z, t) / Q(z, t) in one chart (z = u, or z = 1/u)."""

    P: list
    Q: list

    def at_t0(self, which):
        cs = self.P if which == "P" else self.Q
        return fmpq_poly([c(0) if c.degree() >= 0 else 0 for c in cs])


def chart_polys(y: RF, chart: str) -> ChartPoly:
    P, Q = _ulist(y.n), _ulist(y.d)
    if chart == "v":
        D = max(len(P), len(Q)) - 1
        P = [P[D - k] if 0 <= D - k < len(P) else fmpq_poly([]) for k in range(D + 1)]
        Q = [Q[D - k] if 0 <= D - k < len(Q) else fmpq_poly([]) for k in range(D + 1)]
    return ChartPoly(P, Q)


def _udeg(p) -> int:
    return max((mon[0] for mon in p.to_dict()), default=0)


def _eval_series(cs, z: TSeries, K):
    """sum_k c_k(t) z^k with c_k in QQ[t], z over K, Horner."""
    N = z.prec
    acc = TSeries.const(K, 0, N)
    for c in reversed(cs):
        cc = [K(c[j]) if j <= c.degree() else K.zero for j in range(N)]
        acc = acc * z + TSeries(K, cc, False)
    return acc


def _deriv_list(cs):
    return [cs[k] * k for k in range(1, len(cs))]


def hensel_root(cs, root, K, N: int) -> TSeries:
    """The unique z0(t) in K[t]/(t^N) with z0(0) = root and sum c_k(t) z0^k = 0."""
    z = TSeries.const(K, root, N)
    dcs = _deriv_list(cs)
    d0 = _eval_series(dcs, z, K)
    if K.is_zero(d0.c[0]):
        raise MultipleRoot("root is not simple at t = 0")
    steps = 1
    while (1 << steps) < 2 * N:
        steps += 1
    for _ in range(steps + 1):
        f = _eval_series(cs, z, K)
        if all(K.is_zero(c) for c in f.c):
            break
        z = z - f / _eval_series(dcs, z, K)
    f = _eval_series(cs, z, K)
    if not all(K.is_zero(c) for c in f.c):
        raise PrecisionExceeded("Hensel iteration did not converge")
    return z


# ---------------------------------------------------------------- cycle data

@dataclass
class CycleSpec:
    """u -> (y1, y2, y3) with y_i in Q(u, t); `prec` is the working t-precision."""

    coords: tuple
    prec: int
    coeff: fmpq = fmpq(1)
    label: str = ""

    def __post_init__(self):
        self.coords = tuple(UT(y) for y in self.coords)
        self.coeff = fmpq(self.coeff)

    def star(self, lam) -> "CycleSpec":
        """t -> lam t."""
        lam = fmpq(lam)
        return CycleSpec(tuple(_subs_t(y, lam) for y in self.coords), self.prec, self.coeff, self.label)

    def swap(self, i: int, j: int) -> "CycleSpec":
        c = list(self.coords)
        c[i], c[j] = c[j], c[i]
        return CycleSpec(tuple(c), self.prec, self.coeff, self.label)

    def fmt(self) -> str:
        return "(" + ", ".join(y.fmt() for y in self.coords) + ")"


def _subs_t(y: RF, lam):
    def sub(p):
        return UT.ctx.from_dict({(a, b): c * lam ** b for (a, b), c in p.to_dict().items()})
    return RF(UT, sub(y.n), sub(y.d))


@dataclass
class BoundaryPoint:
    point: ClosedPoint            # point of the u-line at t = 0 (inf means the chart v = 1/u)
    lift: TSeries                 # u0(t) (or v0(t)) over the residue field
    coords: tuple                 # the two surviving coordinates
    sign: int
    face: tuple                   # (i, "0" | "inf"), i = 1..3

    @property
    def field(self):
        return self.point.residue_field


@dataclass
class Violation:
    face: tuple
    point: str
    reason: str

    def __str__(self):
        i, e = self.face
        return f"face y{i}={e} at {self.point}: {self.reason}"


@dataclass
class AdmissibilityReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        return "admissible" if self.ok else "; ".join(str(v) for v in self.violations)


# ---------------------------------------------------------------- boundary

def _closed_points(poly: fmpq_poly):
    """[(ClosedPoint, multiplicity)] for the finite roots of a nonzero polynomial."""
    if poly.degree() <= 0:
        return []
    _, facs = poly.factor()
    out = []
    for g, e in facs:
        out.append((ClosedPoint.from_poly([g[j] for j in range(g.degree() + 1)]), int(e)))
    return out


def _face_candidates(cp: ChartPoly, chart: str):
    """Closed points where P (face 0) or Q (face inf) vanishes at t = 0."""
    out = []
    for which, face in (("P", "0"), ("Q", "inf")):
        red = cp.at_t0(which)
        if chart == "u":
            for pt, e in _closed_points(red):
                out.append((face, which, pt, e))
        else:
            k = 0
            while k <= red.degree() and red[k] == 0:
                k += 1
            if k > 0 and red.degree() >= 0:
                out.append((face, which, ClosedPoint.infinity(), k))
    return out


def _survivor(cp: ChartPoly, z0: TSeries, K):
    num = _eval_series(cp.P, z0, K)
    den = _eval_series(cp.Q, z0, K)
    return num, den


def _process(Z: CycleSpec, report: AdmissibilityReport | None, collect: bool):
    N = Z.prec
    pts = []
    for i, y in enumerate(Z.coords, start=1):
        if _udeg(y.n) == 0 and _udeg(y.d) == 0:
            _flag(report, (i, "-"), "-", "coordinate does not depend on u (degenerate)")
            continue
        if y.F.is_zero(y - 1):
            _flag(report, (i, "-"), "-", "coordinate is identically 1")
            continue
    if report is not None and not report.ok:
        return pts
    for chart in ("u", "v"):
        cps = [chart_polys(y, chart) for y in Z.coords]
        for i, cp in enumerate(cps, start=1):
            for red_name in ("P", "Q"):
                red = cp.at_t0(red_name)
                if red.degree() < 0:
                    _flag(report, (i, "0" if red_name == "P" else "inf"), chart,
                          "the t = 0 reduction is identically " + ("0" if red_name == "P" else "infinite"))
            if report is not None and not report.ok:
                continue
            for face, which, pt, mult in _face_candidates(cp, chart):
                other = cp.at_t0("Q" if which == "P" else "P")
                here = f"{pt.key()}" if chart == "u" else "u=inf"
                K = pt.residue_field
                root = K.zero if chart == "v" else pt.root
                if _vanishes(other, pt, chart):
                    _flag(report, (i, face), here, "zero and pole collide at t = 0")
                    continue
                if mult > 1:
                    if report is None:
                        raise MultipleRoot(f"face y{i}={face} has a multiple root at {here}")
                    _flag(report, (i, face), here, f"root of multiplicity {mult} (unsupported)")
                    continue
                cs = cp.P if which == "P" else cp.Q
                try:
                    z0 = hensel_root(cs, root, K, N)
                except MultipleRoot:
                    _flag(report, (i, face), here, "root is not simple")
                    if report is None:
                        raise
                    continue
                surv = []
                excluded = False
                bad = None
                for j in range(3):
                    if j == i - 1:
                        continue
                    num, den = _survivor(cps[j], z0, K)
                    if K.is_zero(num.c[0]) or K.is_zero(den.c[0]):
                        bad = f"y{j + 1} is {'0' if K.is_zero(num.c[0]) else 'infinite'} there"
                        surv.append(None)
                        continue
                    val = num / den
                    one = TSeries.const(K, 1, N)
                    if val == one:
                        excluded = True
                    elif K.is_zero(val.c[0] - 1):
                        bad = f"y{j + 1} reduces to 1 without being 1"
                    surv.append(val)
                if excluded:
                    continue
                if bad is not None:
                    _flag(report, (i, face), here, bad)
                    continue
                sign = (-1) ** i if face == "inf" else -((-1) ** i)
                pts.append(BoundaryPoint(pt, z0, tuple(surv), sign, (i, face)))
    return pts


def _vanishes(poly: fmpq_poly, pt: ClosedPoint, chart: str) -> bool:
    if poly.degree() < 0:
        return True
    if chart == "v":
        return poly[0] == 0
    g = fmpq_poly(list(pt.minpoly))
    return (poly % g).degree() < 0


def _flag(report, face, point, reason):
    if report is None:
        raise Unsupported(f"face y{face[0]}={face[1]} at {point}: {reason}")
    report.violations.append(Violation(face, point, reason))


def admissibility_check(Z: CycleSpec) -> AdmissibilityReport:
    rep = AdmissibilityReport()
    _process(Z, rep, False)
    return rep


def boundary(Z: CycleSpec) -> list:
    rep = AdmissibilityReport()
    pts = _process(Z, rep, True)
    if not rep.ok:
        multiple = [v for v in rep.violations if "multiplicity" in v.reason or "not simple" in v.reason]
        if multiple:
            raise MultipleRoot(str(multiple[0]))
        raise Unsupported(f"cycle is not admissible: {rep}")
    return pts


# ---------------------------------------------------------------- regulator

def ell_point_residue(y: TSeries, i: int):
    """(1/i) res_{t=0} t^{-i} dlog(y): the coefficient of t^(i-1) in y'/y, over i."""
    if not y.is_unit():
        raise NonUnit(f"{y.fmt()} is not a unit")
    if y.prec <= i:
        raise PrecisionExceeded(f"need precision > {i}")
    q = y.deriv_t() / y.reduce(y.prec - 1)
    return q.c[i - 1] / i


def ell_point_pair(a: TSeries, b: TSeries, m: int, r: int, path: str = "residue"):
    """sum_{1 <= i <= r-m} i (l_{r-i} ^ l_i)(a ^ b)."""
    if path == "coefficient":
        return ell_pair(a, b, m, r)
    if a.prec < r or b.prec < r:
        raise PrecisionExceeded(f"need precision >= {r}")
    acc = a.dom.zero
    for i in range(1, r - m + 1):
        la_hi, la_lo = ell_point_residue(a, r - i), ell_point_residue(a, i)
        lb_hi, lb_lo = ell_point_residue(b, r - i), ell_point_residue(b, i)
        acc = acc + (la_hi * lb_lo - lb_hi * la_lo) * i
    return acc


def l_mr_points(pts, m: int, r: int, path: str = "residue", trace: str = "plain"):
    check_modulus(m, r)
    total = fmpq(0)
    for bp in pts:
        K = bp.field
        a, b = bp.coords
        v = ell_point_pair(a.reduce(r), b.reduce(r), m, r, path)
        tr = K.trace(v)
        if trace == "normalized" and K.degree > 1:
            tr = tr / K.degree
        total += tr * bp.sign
    return total


def rho_cycle(Z: CycleSpec, m: int, r: int, path: str = "residue", trace: str = "plain"):
    check_modulus(m, r)
    if Z.prec < r:
        raise PrecisionExceeded(f"cycle precision {Z.prec} is below r = {r}")
    return l_mr_points(boundary(Z), m, r, path, trace) * Z.coeff


# ---------------------------------------------------------------- congruence

def congruent(Z1: CycleSpec, Z2: CycleSpec, m: int) -> bool:
    """y1_i - y2_i has numerator divisible by t^m (denominators are t-units)."""
    ti = UT.vars.index("t")
    for a, b in zip(Z1.coords, Z2.coords):
        for y in (a, b):
            if all(mon[ti] > 0 for mon in y.d.to_dict()):
                return False
        diff = a - b
        if UT.is_zero(diff):
            continue
        low = min(mon[ti] for mon in diff.n.to_dict())
        if low < m:
            return False
    return Z1.coeff == Z2.coeff


@dataclass
class CongruenceReport:
    rho1: object
    rho2: object
    congruent: bool
    equal: bool
    expected_equal: bool

    @property
    def consistent(self) -> bool:
        return self.equal == self.expected_equal or not self.expected_equal


def congruence_experiment(Z1: CycleSpec, Z2: CycleSpec, m: int, r: int,
                          require: bool = True) -> CongruenceReport:
    """Both regulators; the smoothness/SNC part of (M_m) is assumed, not checked."""
    cong = congruent(Z1, Z2, m)
    if require and not cong:
        raise NotCongruent(f"the cycles differ below t^{m}")
    a, b = rho_cycle(Z1, m, r), rho_cycle(Z2, m, r)
    return CongruenceReport(a, b, cong, a == b, cong)


# ---------------------------------------------------------------- families

def _rand_poly_t(rng, deg, const=None):
    cs = [fmpq(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(deg + 1)]
    if const is not None:
        cs[0] = fmpq(const)
    return cs


def _t_poly(cs):
    t = UT.gen("t")
    acc = UT(0)
    for j, c in enumerate(cs):
        acc = acc + t ** j * c
    return acc


@dataclass
class CycleFamily:
    """A cycle shape with parameters p_k(t) in Q[t] (ascending coefficient lists).

    kind "totaro": (u, 1-u, 1 - p0/u)
    kind "quad":   (w, 1-w, (w-p4)(w-p5)/(w(w-1))),
                   w = (u^2 + p0 u + p1)/(u^2 + p2 u + p3)

    In both shapes every point where a coordinate has a zero or pole either
    lies on some y_j = 1 (and is dropped) or has y3 = 0, where the survivors
    are (a, 1 - a) for a the relevant parameter.
    """

    kind: str
    params: tuple

    def build(self, N: int) -> CycleSpec:
        u = UT.gen("u")
        p = [_t_poly(c) for c in self.params]
        if self.kind == "totaro":
            return CycleSpec((u, 1 - u, 1 - p[0] / u), N, label=self.kind)
        if self.kind == "quad":
            w = (u ** 2 + p[0] * u + p[1]) / (u ** 2 + p[2] * u + p[3])
            y3 = (w - p[4]) * (w - p[5]) / (w * (w - 1))
            return CycleSpec((w, 1 - w, y3), N, label=self.kind)
        raise ValueError(f"unknown cycle family {self.kind!r}")

    def perturbed(self, order: int, rng: random.Random, index: int | None = None) -> "CycleFamily":
        """Add c t^order to one parameter; congruent modulo t^order."""
        k = rng.randrange(len(self.params)) if index is None else index
        cs = list(self.params[k]) + [fmpq(0)] * max(0, order + 1 - len(self.params[k]))
        cs[order] = cs[order] + fmpq(rng.choice([1, 2, -1, 3, -2]), rng.choice([1, 2, 3]))
        ps = list(self.params)
        ps[k] = tuple(cs)
        return CycleFamily(self.kind, tuple(ps))

    @property
    def dilog_params(self) -> tuple:
        """Indices of the parameters that the regulator actually sees."""
        return (0,) if self.kind == "totaro" else (4, 5)


def totaro_cycle(a, N: int) -> CycleSpec:
    """(u, 1-u, 1 - a(t)/u) for a(t) in Q[t] with a(0) not in {0, 1}."""
    return CycleFamily("totaro", (tuple(fmpq(c) for c in a),)).build(N)


def random_family(rng: random.Random, N: int, tries: int = 200) -> CycleFamily:
    """A random admissible "quad" family member (rejection sampling)."""
    for _ in range(tries):
        ps = [tuple(_rand_poly_t(rng, 2)) for _ in range(4)]
        a, b = rng.sample([2, 3, -1, fmpq(1, 2), fmpq(-1, 3), 5, fmpq(3, 2)], 2)
        ps.append(tuple(_rand_poly_t(rng, 2, a)))
        ps.append(tuple(_rand_poly_t(rng, 2, b)))
        fam = CycleFamily("quad", tuple(ps))
        try:
            Z = fam.build(N)
            if admissibility_check(Z).ok and boundary(Z):
                return fam
        except ChowDilogError:
            continue
    raise ChowDilogError("no admissible cycle found")

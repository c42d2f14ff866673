"""Local Laurent fields K((z)) at closed points of the s-line, with explicit precision.

A value is  sum_{i} c[i] z^(v+i) + O(z^p).  `p` is INF for exact values.
Precision bookkeeping follows the usual rules: sums keep the smaller absolute
precision, products and inverses keep the smaller relative precision.
"""
from __future__ import annotations

from dataclasses import dataclass

from flint import fmpq, fmpq_poly

from .errors import NonUnit, Unsupported, WindowTooNarrow, ZeroInput
from .fmt import fmt_upoly, join_terms, power
from .fields import (QQ, RF, Domain, NumberField, RationalFunctionField,
                     polys_in, to_fmpq)

INF = float("inf")


class LaurentField(Domain):
    """K((z)) where K is the residue field of a closed point.

    `work` is the relative precision assigned to inverses of exact
    non-monomial values.  `var` names the derivation d/dz; forms over this
    field use it as their only differential.
    """

    def __init__(self, base: Domain, label: str = "z", work: int = 16, var: str = "s"):
        self.base = base
        self.label = label
        self.work = work
        self.vars = (var,)
        self.var = var
        self.degree = base.degree
        self.name = f"{base!r}(({label}))"

    def __repr__(self):
        return self.name

    def __call__(self, v):
        if isinstance(v, Laurent):
            return v
        b = self.base(v)
        if self.base.is_zero(b):
            return Laurent(self, 0, (), INF)
        return Laurent(self, 0, (b,), INF)

    def is_zero(self, a) -> bool:
        return not a.c and a.p == INF

    def deriv(self, a, var):
        if var != self.var:
            return self.zero
        return a.deriv()

    def key(self, a) -> str:
        return a.key()

    def fmt(self, a) -> str:
        return a.fmt()

    def trace(self, a):
        raise TypeError("trace is defined on residue fields, not on Laurent fields")

    @property
    def z(self) -> "Laurent":
        return Laurent(self, 1, (self.base.one,), INF)

    def monomial(self, a, k) -> "Laurent":
        return Laurent(self, k, (self.base(a),), INF)

    def series(self, v, coeffs, p) -> "Laurent":
        return Laurent(self, v, tuple(self.base(c) for c in coeffs), p)


class Laurent:
    __slots__ = ("F", "v", "c", "p")

    def __init__(self, F: LaurentField, v: int, c, p):
        base = F.base
        c = list(c)
        v = int(v)
        if p != INF:
            p = int(p)
        if p != INF and len(c) > p - v:
            c = c[: max(0, p - v)]
        i = 0
        while i < len(c) and base.is_zero(c[i]):
            i += 1
        if i:
            c = c[i:]
            v += i
        while c and base.is_zero(c[-1]):
            c.pop()
        if not c:
            v = p if p != INF else 0
        self.F = F
        self.v = v
        self.c = tuple(c)
        self.p = p

    # inspection ---------------------------------------------------------
    def is_exact(self) -> bool:
        return self.p == INF

    def is_negligible(self) -> bool:
        """True when no nonzero coefficient is known."""
        return not self.c

    def valuation(self) -> int:
        if not self.c:
            raise WindowTooNarrow(f"valuation unknown: value is O(z^{self.p})")
        return self.v

    def coeff(self, k: int):
        if k >= self.p:
            raise WindowTooNarrow(f"coefficient of z^{k} requested, precision O(z^{self.p})")
        j = k - self.v
        if 0 <= j < len(self.c):
            return self.c[j]
        return self.F.base.zero

    def residue(self):
        return self.coeff(-1)

    def leading(self):
        if not self.c:
            raise WindowTooNarrow("leading coefficient unknown")
        return self.c[0]

    def key(self) -> str:
        b = self.F.base
        return f"{self.v}:" + ",".join(b.key(x) for x in self.c) + f":{self.p}"

    # arithmetic ---------------------------------------------------------
    def _co(self, other):
        if isinstance(other, Laurent):
            return other
        return self.F(other)

    def __add__(self, other):
        o = self._co(other)
        return _addsub(self, o, False)

    __radd__ = __add__

    def __sub__(self, other):
        return _addsub(self, self._co(other), True)

    def __rsub__(self, other):
        return _addsub(self._co(other), self, True)

    def __neg__(self):
        return Laurent(self.F, self.v, tuple(-x for x in self.c), self.p)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            if isinstance(other, (int, fmpq)) or _is_base(self.F.base, other):
                k = self.F.base(other)
                if self.F.base.is_zero(k):
                    return Laurent(self.F, 0, (), INF)
                return Laurent(self.F, self.v, tuple(x * k for x in self.c), self.p)
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def inv(self) -> "Laurent":
        if not self.c:
            if self.p == INF:
                raise NonUnit("inverse of zero")
            raise WindowTooNarrow(f"inverse of O(z^{self.p})")
        rel = self.p - self.v if self.p != INF else None
        if rel is None and len(self.c) == 1:
            return Laurent(self.F, -self.v, (1 / self.c[0],), INF)
        n = rel if rel is not None else self.F.work
        b = _series_inv(self.F.base, self.c, n)
        return Laurent(self.F, -self.v, b, -self.v + n)

    def __truediv__(self, other):
        if isinstance(other, Laurent):
            return self * other.inv()
        return self * (1 / self.F.base(other))

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        r = self.F.one
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def deriv(self) -> "Laurent":
        cs = [x * (self.v + i) for i, x in enumerate(self.c)]
        return Laurent(self.F, self.v - 1, cs, self.p - 1)

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            try:
                other = self.F(other)
            except TypeError:
                return NotImplemented
        d = self - other
        return not d.c and d.p == INF

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(self.key())

    def agrees(self, other) -> bool:
        """Equal on the common window of known coefficients."""
        return (self - other).is_negligible()

    def truncate(self, p) -> "Laurent":
        return Laurent(self.F, self.v, self.c, min(self.p, p))

    def fmt(self) -> str:
        b = self.F.base
        terms = [(b.fmt(x), power(self.F.label, self.v + i))
                 for i, x in enumerate(self.c) if not b.is_zero(x)]
        body = join_terms(terms)
        if self.p != INF:
            body += f" + O({self.F.label}^{self.p})"
        return body

    __str__ = fmt

    def __repr__(self):
        return f"Laurent({self.fmt()})"


def _is_base(base, x) -> bool:
    if base is QQ:
        return isinstance(x, (int, fmpq))
    return getattr(x, "K", None) is base or getattr(x, "F", None) is base


def _addsub(a: Laurent, b: Laurent, neg: bool) -> Laurent:
    F = a.F
    p = min(a.p, b.p)
    ends = []
    if a.c:
        ends.append(a.v + len(a.c))
    if b.c:
        ends.append(b.v + len(b.c))
    if not ends:
        return Laurent(F, 0, (), p)
    lo = min(x.v for x in (a, b) if x.c)
    hi = max(ends)
    if p != INF:
        hi = min(hi, p)
    if hi <= lo:
        return Laurent(F, 0, (), p)
    zero = F.base.zero
    out = []
    for k in range(lo, hi):
        ja = k - a.v
        jb = k - b.v
        x = a.c[ja] if 0 <= ja < len(a.c) else None
        y = b.c[jb] if 0 <= jb < len(b.c) else None
        if y is None:
            out.append(x if x is not None else zero)
        elif x is None:
            out.append(-y if neg else y)
        else:
            out.append(x - y if neg else x + y)
    return Laurent(F, lo, out, p)


def _mul(a: Laurent, b: Laurent) -> Laurent:
    F = a.F
    if not a.c or not b.c:
        if (not a.c and a.p == INF) or (not b.c and b.p == INF):
            return Laurent(F, 0, (), INF)
        pa = a.p + (b.v if b.c else b.p)
        pb = b.p + (a.v if a.c else a.p)
        return Laurent(F, 0, (), min(pa, pb))
    v = a.v + b.v
    p = min(a.p + b.v, b.p + a.v)
    n = len(a.c) + len(b.c) - 1
    if p != INF:
        n = min(n, p - v)
    if n <= 0:
        return Laurent(F, 0, (), p)
    return Laurent(F, v, _conv(F.base, a.c, b.c, n), p)


def _conv(base, x, y, n):
    if base is QQ and len(x) > 3 and len(y) > 3:
        prod = fmpq_poly(list(x[:n])) * fmpq_poly(list(y[:n]))
        cs = prod.coeffs()
        cs = cs[:n] + [fmpq(0)] * (n - len(cs))
        return cs
    if isinstance(base, NumberField) and len(x) > 3 and len(y) > 3:
        return _conv_nf(base, x, y, n)
    zero = base.zero
    out = []
    lx, ly = len(x), len(y)
    for k in range(n):
        acc = None
        for i in range(max(0, k - ly + 1), min(k, lx - 1) + 1):
            t = x[i] * y[k - i]
            acc = t if acc is None else acc + t
        out.append(zero if acc is None else acc)
    return out


def _conv_nf(K, x, y, n):
    # Kronecker substitution: pack a-polynomials with stride 2d-1 into one fmpq_poly.
    from .fields import NFElem
    d = K.degree
    stride = 2 * d - 1

    def pack(v):
        cs = [fmpq(0)] * (stride * min(len(v), n))
        for i, e in enumerate(v[:n]):
            for j, c in enumerate(e.p.coeffs()):
                cs[i * stride + j] = c
        return fmpq_poly(cs)

    prod = pack(x) * pack(y)
    cs = prod.coeffs()
    out = []
    for k in range(n):
        chunk = cs[k * stride:(k + 1) * stride]
        out.append(NFElem(K, fmpq_poly(chunk) % K.modulus) if chunk else K.zero)
    return out


def _series_inv(base, c, n):
    b0 = 1 / c[0]
    if base is QQ and n > 4:
        p = fmpq_poly(list(c[:n]))
        # Newton iteration in C via fmpq_poly
        inv = fmpq_poly([b0])
        k = 1
        while k < n:
            k = min(2 * k, n)
            e = (p.truncate(k) * inv).truncate(k)
            inv = (inv * (2 - e)).truncate(k)
        cs = inv.coeffs()
        return cs + [fmpq(0)] * (n - len(cs))
    b = [b0]
    for m in range(1, n):
        acc = None
        for k in range(1, min(m, len(c) - 1) + 1):
            t = c[k] * b[m - k]
            acc = t if acc is None else acc + t
        b.append(base.zero if acc is None else -(acc * b0))
    return b


# ---------------------------------------------------------------- closed points

@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of the s-line over k (QQ or QQ(x)), or infinity.

    Finite points are given by a monic irreducible `minpoly` (ascending
    coefficients over k).  Over QQ(x) only degree-one points are supported.
    """

    kind: str
    minpoly: tuple = ()
    base_vars: tuple = ()

    @staticmethod
    def infinity(base_vars=()):
        return ClosedPoint("inf", (), tuple(base_vars))

    @staticmethod
    def rational(c, base_vars=()):
        return ClosedPoint("finite", (-_base_dom(base_vars)(c), _base_dom(base_vars).one), tuple(base_vars))

    @staticmethod
    def from_poly(coeffs, base_vars=()):
        dom = _base_dom(base_vars)
        cs = [dom(c) for c in coeffs]
        while cs and dom.is_zero(cs[-1]):
            cs.pop()
        if len(cs) < 2:
            raise ValueError("a closed point needs a polynomial of degree >= 1")
        lc = cs[-1]
        cs = [c / lc for c in cs]
        if len(cs) > 2:
            if base_vars:
                raise Unsupported("closed points of degree > 1 are only supported over QQ")
            poly = fmpq_poly(cs)
            _, facs = poly.factor()
            if len(facs) != 1 or facs[0][1] != 1:
                raise ValueError(f"{poly.str(var='s')} is not irreducible")
        return ClosedPoint("finite", tuple(cs), tuple(base_vars))

    @property
    def is_infinite(self) -> bool:
        return self.kind == "inf"

    @property
    def degree(self) -> int:
        return 1 if self.is_infinite else len(self.minpoly) - 1

    @property
    def base(self) -> Domain:
        return _base_dom(self.base_vars)

    @property
    def residue_field(self) -> Domain:
        if self.degree == 1:
            return self.base
        return NumberField(fmpq_poly(list(self.minpoly)), "a")

    @property
    def root(self):
        K = self.residue_field
        if self.is_infinite:
            return None
        if self.degree == 1:
            return -self.minpoly[0]
        return K.gen

    def key(self) -> str:
        if self.is_infinite:
            return "inf"
        if self.degree == 1:
            return f"s={self.base.fmt(self.root) if self.base is not QQ else self.root}"
        return fmt_upoly(list(self.minpoly), "s")

    __str__ = key

    def __lt__(self, other):
        return (self.degree, self.key()) < (other.degree, other.key())


def _base_dom(base_vars):
    return RationalFunctionField(tuple(base_vars)) if base_vars else QQ


def parse_point(text: str, base_vars=()) -> ClosedPoint:
    """'inf', 's=c', a bare constant c (meaning s=c) or a polynomial in s such as 's^2-2'."""
    from .errors import ParseError
    from .parser import eval_polynomial_in_s
    text = text.strip()
    if text in ("inf", "oo", "infinity"):
        return ClosedPoint.infinity(base_vars)
    if text.startswith("s="):
        from .parser import eval_constant
        return ClosedPoint.rational(eval_constant(text[2:], base_vars), base_vars)
    coeffs = eval_polynomial_in_s(text, base_vars)
    dom = _base_dom(base_vars)
    live = [c for c in coeffs if not dom.is_zero(dom(c))]
    if len(coeffs) <= 1 or len(live) == 0 or all(dom.is_zero(dom(c)) for c in coeffs[1:]):
        if "s" in text:
            raise ParseError("a closed point needs a polynomial of degree >= 1", 0, text)
        return ClosedPoint.rational(coeffs[0] if coeffs else 0, base_vars)
    return ClosedPoint.from_poly(coeffs, base_vars)


def function_field(base_vars=()) -> RationalFunctionField:
    return RationalFunctionField(tuple(base_vars) + ("s",))


# ---------------------------------------------------------------- expansions

def _taylor_shift(coeffs, alpha, K):
    """Coefficients of P(alpha + z) from those of P(s)."""
    out = []
    for c in reversed(coeffs):
        # out <- out * (z + alpha) + c
        new = [K.zero] * (len(out) + 1)
        for i, x in enumerate(out):
            new[i + 1] = new[i + 1] + x
            new[i] = new[i] + x * alpha
        new[0] = new[0] + K(c)
        out = new
    return out


def _strip_low(cs, K):
    i = 0
    while i < len(cs) and K.is_zero(cs[i]):
        i += 1
    return i


def local_polys(f: RF, point: ClosedPoint):
    """(num, den, shift) with f = z^shift * num(z)/den(z), num(0), den(0) nonzero."""
    F = f.F
    K = point.residue_field
    num, den, _ = polys_in(F, f, "s")
    if point.is_infinite:
        dn = len(num) - 1
        dd = len(den) - 1
        n = [K(c) for c in reversed(num)]
        d = [K(c) for c in reversed(den)]
        shift = dd - dn
    else:
        n = _taylor_shift(num, point.root, K)
        d = _taylor_shift(den, point.root, K)
        shift = 0
    i = _strip_low(n, K)
    j = _strip_low(d, K)
    if i == len(n):
        raise ZeroInput("expansion of zero")
    return n[i:], d[j:], shift + i - j


def order_at(f: RF, point: ClosedPoint) -> int:
    _, _, v = local_polys(f, point)
    return v


def value_at(f: RF, point: ClosedPoint):
    """Value in the residue field; raises if f has a pole there."""
    K = point.residue_field
    if f.F.is_zero(f):
        return K.zero
    n, d, v = local_polys(f, point)
    if v < 0:
        raise NonUnit(f"pole at {point.key()}")
    if v > 0:
        return K.zero
    return n[0] / d[0]


def laurent_expand(f, point: ClosedPoint, window=None, rel: int | None = None,
                   L: LaurentField | None = None) -> Laurent:
    """Expansion of f in the local uniformizer at `point`.

    With `window=(low, high)` the result is known through z^high and the
    valuation must be at least `low`.  With `rel` the result carries that
    many known coefficients from the valuation on.
    """
    K = point.residue_field
    L = L or LaurentField(K, "z")
    if not isinstance(f, RF):
        v = K(f)
        if K.is_zero(v):
            raise ZeroInput("expansion of zero")
        return Laurent(L, 0, (v,), INF)
    if f.F.is_zero(f):
        raise ZeroInput("expansion of zero")
    n, d, v = local_polys(f, point)
    if window is not None:
        low, high = window
        if v < low:
            raise WindowTooNarrow(f"valuation {v} below window start {low}")
        P = high + 1 - v
        if P <= 0:
            return Laurent(L, 0, (), high + 1)
    else:
        P = rel if rel is not None else L.work
    if len(d) == 1:
        c0 = 1 / d[0]
        cs = [x * c0 for x in n]
        if window is None and rel is None:
            return Laurent(L, v, cs, INF)
        return Laurent(L, v, cs[:P], v + P)
    inv = _series_inv(K, d, P)
    cs = _conv(K, n, inv, P) if len(n) else []
    return Laurent(L, v, cs, v + P)


def support_points(f: RF, base_vars=()) -> list:
    """Finite closed points where f has a zero or a pole."""
    pts = []
    for poly in (f.n, f.d):
        pts.extend(_points_of_poly(f.F, poly, base_vars))
    return pts


def _points_of_poly(F, poly, base_vars):
    if poly.is_constant():
        return []
    si = F.vars.index("s")
    out = []
    _, facs = poly.factor()
    for g, _e in facs:
        deg_s = g.degrees()[si]
        if deg_s == 0:
            continue
        if not base_vars:
            cs = [fmpq(0)] * (deg_s + 1)
            for mon, c in g.to_dict().items():
                cs[mon[si]] = c
            out.append(ClosedPoint.from_poly(cs))
        else:
            if deg_s > 1:
                raise Unsupported("closed points of degree > 1 over QQ(x) are not supported")
            cs, _, _ = polys_in(F, F.poly(g), "s")
            out.append(ClosedPoint.rational(-cs[0] / cs[1], base_vars))
    return out

"""Exact coefficient domains: QQ, rational function fields, simple number fields.

A *domain* is a small object that knows how to build, compare, differentiate
and print its elements.  Elements themselves are plain values (`fmpq`, `RF`,
`NFElem`, and later `Laurent`) supporting + - * / and ** with ints.
"""
from __future__ import annotations

from fractions import Fraction

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx, fmpq_poly, fmpz

from .errors import NonUnit, Unsupported, ZeroInput
from .fmt import fmt_upoly


def to_fmpq(v) -> fmpq:
    if isinstance(v, fmpq):
        return v
    if isinstance(v, (int, fmpz)):
        return fmpq(v)
    if isinstance(v, Fraction):
        return fmpq(v.numerator, v.denominator)
    if isinstance(v, str):
        f = Fraction(v)
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot read {v!r} as a rational")


class Domain:
    """Interface shared by all coefficient domains."""

    vars: tuple = ()
    degree = 1

    def __call__(self, v):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def deriv(self, a, var):
        return self.zero

    def key(self, a) -> str:
        return str(a)

    def fmt(self, a) -> str:
        return str(a)

    def trace(self, a):
        """Field trace down to the prime field of the tower (identity here)."""
        return a


class Rationals(Domain):
    name = "Q"

    def __call__(self, v):
        if isinstance(v, fmpq):
            return v
        if isinstance(v, RF):
            if v.n.is_constant() and v.d.is_constant():
                return _const_of(v.n) / _const_of(v.d)
            raise TypeError("rational function is not a constant")
        return to_fmpq(v)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


QQ = Rationals()


def _const_of(p: fmpq_mpoly) -> fmpq:
    if p.is_zero():
        return fmpq(0)
    return p.leading_coefficient()


# ---------------------------------------------------------------- rational functions

class RationalFunctionField(Domain):
    """QQ(v1, ..., vk); one instance per variable tuple."""

    _cache: dict = {}

    def __new__(cls, vars=("s",)):
        vars = tuple(vars)
        hit = cls._cache.get(vars)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self.vars = vars
        self.ctx = fmpq_mpoly_ctx.get(vars)
        self._one = self.ctx.constant(1)
        self.name = "Q(" + ",".join(vars) + ")"
        cls._cache[vars] = self
        return self

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (RationalFunctionField, (self.vars,))

    def gen(self, name: str) -> "RF":
        i = self.vars.index(name)
        return RF(self, self.ctx.gens()[i], self._one, False)

    def poly(self, p: fmpq_mpoly) -> "RF":
        return RF(self, p, self._one, False)

    def __call__(self, v):
        if isinstance(v, RF):
            if v.F is self:
                return v
            return RF(self, self._lift(v.n, v.F), self._lift(v.d, v.F))
        if isinstance(v, fmpq_mpoly):
            return RF(self, v, self._one, False)
        return RF(self, self.ctx.constant(to_fmpq(v)), self._one, False)

    def _lift(self, p, F):
        idx = []
        for name in F.vars:
            if name not in self.vars:
                raise TypeError(f"{F} does not embed in {self}")
            idx.append(self.vars.index(name))
        out = {}
        for mon, c in p.to_dict().items():
            e = [0] * len(self.vars)
            for j, k in zip(idx, mon):
                e[j] = k
            out[tuple(e)] = c
        return self.ctx.from_dict(out)

    def is_zero(self, a) -> bool:
        return a.n.is_zero()

    def deriv(self, a, var):
        if var not in self.vars:
            return self.zero
        n, d = a.n, a.d
        dn = n.derivative(var)
        dd = d.derivative(var)
        if dd.is_zero():
            return RF(self, dn, d)
        return RF(self, dn * d - n * dd, d * d)

    def key(self, a) -> str:
        return f"{a.n}|{a.d}"

    def fmt(self, a) -> str:
        return a.fmt()


class RF:
    """Element n/d of a RationalFunctionField, kept reduced with normalized denominator."""

    __slots__ = ("F", "n", "d")

    def __init__(self, F, n, d, normalize=True):
        self.F = F
        if normalize:
            if d.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if n.is_zero():
                n, d = n, F._one
            elif not d.is_constant():
                g = n.gcd(d)
                if not g.is_one():
                    n = n / g
                    d = d / g
            lc = d.leading_coefficient()
            if lc != 1:
                n = n / lc
                d = d / lc
        self.n = n
        self.d = d

    def _co(self, other):
        if isinstance(other, RF):
            if other.F is self.F:
                return other
            return self.F(other)
        if isinstance(other, (int, fmpq, fmpz, Fraction)):
            return RF(self.F, self.F.ctx.constant(to_fmpq(other)), self.F._one, False)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        if self.d == o.d:
            return RF(self.F, self.n + o.n, self.d, not self.d.is_one())
        return RF(self.F, self.n * o.d + o.n * self.d, self.d * o.d)

    __radd__ = __add__

    def __neg__(self):
        return RF(self.F, -self.n, self.d, False)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        if self.d == o.d:
            return RF(self.F, self.n - o.n, self.d, not self.d.is_one())
        return RF(self.F, self.n * o.d - o.n * self.d, self.d * o.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, fmpq)):
            if other == 0:
                return RF(self.F, self.F.ctx.constant(0), self.F._one, False)
            return RF(self.F, self.n * other, self.d, False)
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        if self.d.is_one() and o.d.is_one():
            return RF(self.F, self.n * o.n, self.d, False)
        return RF(self.F, self.n * o.n, self.d * o.d)

    __rmul__ = __mul__

    def inv(self):
        if self.n.is_zero():
            raise NonUnit("inverse of zero rational function")
        return RF(self.F, self.d, self.n, True)

    def __truediv__(self, other):
        if isinstance(other, (int, fmpq)):
            if other == 0:
                raise ZeroDivisionError
            return RF(self.F, self.n / other, self.d, False)
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return RF(self.F, self.n ** k, self.d ** k, False)

    def __eq__(self, other):
        if isinstance(other, RF):
            if other.F is not self.F:
                try:
                    other = self.F(other)
                except TypeError:
                    return False
            return self.n == other.n and self.d == other.d
        if isinstance(other, (int, fmpq, fmpz, Fraction)):
            return self.d.is_one() and self.n == self.F.ctx.constant(to_fmpq(other))
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((str(self.n), str(self.d)))

    def is_constant(self) -> bool:
        return self.n.is_constant() and self.d.is_constant()

    def constant_value(self) -> fmpq:
        return _const_of(self.n) / _const_of(self.d)

    def fmt(self) -> str:
        n = str(self.n)
        if self.d.is_one():
            return n
        if not _atomic(n):
            n = f"({n})"
        d = str(self.d)
        if not _atomic(d):
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = fmt

    def __repr__(self):
        return f"RF({self.fmt()})"


def _atomic(txt: str) -> bool:
    body = txt[1:] if txt.startswith("-") else txt
    return not any(ch in body for ch in "+- ")


def polys_in(F: RationalFunctionField, a: RF, var: str):
    """Coefficient lists (ascending in `var`) of numerator and denominator.

    Coefficients live in the field of the remaining variables (QQ when none remain).
    """
    rest = tuple(v for v in F.vars if v != var)
    sub = RationalFunctionField(rest) if rest else QQ
    i = F.vars.index(var)

    def split(p):
        deg = p.degrees()[i] if not p.is_zero() else 0
        buckets = [dict() for _ in range(deg + 1)]
        for mon, c in p.to_dict().items():
            rmon = tuple(e for j, e in enumerate(mon) if j != i)
            buckets[mon[i]][rmon] = c
        if sub is QQ:
            return [b.get((), fmpq(0)) for b in buckets]
        return [sub.poly(sub.ctx.from_dict(b)) for b in buckets]

    return split(a.n), split(a.d), sub


# ---------------------------------------------------------------- number fields

class NumberField(Domain):
    """QQ[a]/(pi) for a monic irreducible pi over QQ."""

    _cache: dict = {}

    def __new__(cls, modulus, name="a"):
        if not isinstance(modulus, fmpq_poly):
            modulus = fmpq_poly([to_fmpq(c) for c in modulus])
        key = (str(modulus), name)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        if modulus.degree() < 1:
            raise ValueError("extension polynomial must have degree >= 1")
        if modulus.leading_coefficient() != 1:
            raise ValueError("extension polynomial must be monic")
        _, facs = modulus.factor()
        if len(facs) != 1 or facs[0][1] != 1:
            raise ValueError(f"{modulus.str(var='s')} is not irreducible over QQ")
        self = super().__new__(cls)
        self.modulus = modulus
        self.degree = modulus.degree()
        self.gen_name = name
        self.name = f"Q[{name}]/({modulus.str(var=name)})"
        self._power_traces = self._newton_sums()
        cls._cache[key] = self
        return self

    def __reduce__(self):
        return (NumberField, (self.modulus, self.gen_name))

    def __repr__(self):
        return self.name

    def _newton_sums(self):
        # Tr(a^k) for k < degree via Newton's identities.
        d = self.degree
        c = [self.modulus[d - j] for j in range(d + 1)]  # monic: c[0] = 1, e_j = (-1)^j c[j]
        p = [fmpq(d)]
        for k in range(1, d):
            acc = -k * c[k]
            for j in range(1, k):
                acc -= c[j] * p[k - j]
            p.append(acc)
        return p

    @property
    def gen(self):
        return NFElem(self, fmpq_poly([0, 1]) % self.modulus)

    def __call__(self, v):
        if isinstance(v, NFElem):
            if v.K is self:
                return v
            raise TypeError("element of a different number field")
        if isinstance(v, fmpq_poly):
            return NFElem(self, v % self.modulus)
        return NFElem(self, fmpq_poly([to_fmpq(v)]))

    def is_zero(self, a) -> bool:
        return a.p.is_zero()

    def key(self, a) -> str:
        return str(a.p)

    def fmt(self, a) -> str:
        return a.fmt()

    def trace(self, a):
        a = self(a)
        tot = fmpq(0)
        for k in range(self.degree):
            c = a.p[k]
            if c != 0:
                tot += c * self._power_traces[k]
        return tot


class NFElem:
    __slots__ = ("K", "p")

    def __init__(self, K, p):
        self.K = K
        self.p = p

    def _co(self, other):
        if isinstance(other, NFElem):
            return other.p
        if isinstance(other, (int, fmpq, fmpz, Fraction)):
            return fmpq_poly([to_fmpq(other)])
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return NFElem(self.K, self.p + o)

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.K, -self.p)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return NFElem(self.K, self.p - o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, fmpq)):
            return NFElem(self.K, self.p * other)
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return NFElem(self.K, (self.p * o) % self.K.modulus)

    __rmul__ = __mul__

    def inv(self):
        if self.p.is_zero():
            raise NonUnit("inverse of zero in number field")
        g, s, _ = self.p.xgcd(self.K.modulus)
        return NFElem(self.K, (s / g[0]) % self.K.modulus)

    def __truediv__(self, other):
        if isinstance(other, (int, fmpq)):
            return NFElem(self.K, self.p / other)
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self * NFElem(self.K, o).inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        r = NFElem(self.K, fmpq_poly([1]))
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self.p == o

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(str(self.p))

    def fmt(self) -> str:
        return fmt_upoly(self.p.coeffs(), self.K.gen_name)

    __str__ = fmt

    def __repr__(self):
        return f"NFElem({self.fmt()})"


# ---------------------------------------------------------------- helpers

def domain_of(v) -> Domain:
    if isinstance(v, RF):
        return v.F
    if isinstance(v, NFElem):
        return v.K
    if hasattr(v, "F") and hasattr(v, "v"):
        return v.F
    return QQ


def field_trace(v, dom: Domain):
    return dom.trace(v)


def normalized_trace(v, dom: Domain | None = None):
    """Average of the conjugates of `v` over the prime field of its tower."""
    dom = dom or domain_of(v)
    t = dom.trace(v)
    if dom.degree == 1:
        return t
    return t / dom.degree


def is_nonzero(dom: Domain, a) -> bool:
    return not dom.is_zero(a)


def require_nonzero(dom: Domain, a, what="value"):
    if dom.is_zero(a):
        raise ZeroInput(f"{what} is zero")


__all__ = [
    "Domain", "QQ", "Rationals", "RationalFunctionField", "RF", "NumberField",
    "NFElem", "to_fmpq", "polys_in", "domain_of", "field_trace",
    "normalized_trace", "Unsupported",
]

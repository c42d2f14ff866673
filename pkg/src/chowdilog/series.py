"""Truncated power series A[t]/(t^N) over an exact coefficient domain."""
from __future__ import annotations

from flint import fmpq

from .errors import NonNilpotentConstant, NonUnit, PrecisionExceeded
from .fields import QQ, Domain
from .fmt import join_terms, power


class TSeries:
    """c[0] + c[1] t + ... + c[N-1] t^(N-1) + O(t^N).

    Values are immutable.  `log_circ` is cached on first use since the
    dilogarithm maps call it repeatedly on the same entries.
    """

    __slots__ = ("dom", "c", "_log", "_key")

    def __init__(self, dom: Domain, coeffs, convert=True):
        self.dom = dom
        self.c = tuple(dom(x) for x in coeffs) if convert else tuple(coeffs)
        self._log = None
        self._key = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, dom, v, N):
        return cls(dom, [dom(v)] + [dom.zero] * (N - 1), False)

    @classmethod
    def t(cls, dom, N):
        z = dom.zero
        return cls(dom, [z, dom.one] + [z] * (N - 2), False)

    @classmethod
    def monomial(cls, dom, a, i, N):
        cs = [dom.zero] * N
        if i < N:
            cs[i] = dom(a)
        return cls(dom, cs, False)

    @property
    def prec(self) -> int:
        return len(self.c)

    def __getitem__(self, i):
        if i >= len(self.c):
            raise PrecisionExceeded(f"coefficient t^{i} requested at precision {len(self.c)}")
        return self.c[i]

    def _new(self, cs):
        return TSeries(self.dom, cs, False)

    def _coerce(self, other):
        if isinstance(other, TSeries):
            return other
        return TSeries.const(self.dom, other, len(self.c))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        n = min(len(self.c), len(o.c))
        return self._new([self.c[i] + o.c[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-x for x in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        n = min(len(self.c), len(o.c))
        return self._new([self.c[i] - o.c[i] for i in range(n)])

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        return self._new([x * k for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return self.scale(other)
        a, b = self.c, other.c
        va = _val(self.dom, a)
        vb = _val(self.dom, b)
        n = min(len(a), len(b))
        dom = self.dom
        out = []
        for k in range(n):
            acc = None
            lo = max(va, k - len(b) + 1)
            hi = min(k - vb, len(a) - 1)
            for i in range(lo, hi + 1):
                ai = a[i]
                bj = b[k - i]
                term = ai * bj
                acc = term if acc is None else acc + term
            out.append(dom.zero if acc is None else acc)
        return self._new(out)

    __rmul__ = __mul__

    def inv(self):
        a = self.c
        if self.dom.is_zero(a[0]):
            raise NonUnit("series with zero constant term is not invertible")
        b0 = 1 / a[0]
        b = [b0]
        for n in range(1, len(a)):
            acc = None
            for k in range(1, n + 1):
                if self.dom.is_zero(a[k]):
                    continue
                term = a[k] * b[n - k]
                acc = term if acc is None else acc + term
            b.append(self.dom.zero if acc is None else -(acc * b0))
        return self._new(b)

    def __truediv__(self, other):
        if isinstance(other, TSeries):
            return self * other.inv()
        return self._new([x / other for x in self.c])

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        r = TSeries.const(self.dom, 1, len(self.c))
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        if len(self.c) != len(other.c):
            return False
        return all(self.dom.is_zero(x - y) for x, y in zip(self.c, other.c))

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def agrees(self, other, n) -> bool:
        """Equality of the first n coefficients."""
        if len(self.c) < n or len(other.c) < n:
            raise PrecisionExceeded(f"comparison mod t^{n}")
        return all(self.dom.is_zero(self.c[i] - other.c[i]) for i in range(n))

    def __hash__(self):
        return hash(self.key())

    def key(self) -> str:
        if self._key is None:
            self._key = ";".join(self.dom.key(x) for x in self.c)
        return self._key

    # structure ----------------------------------------------------------
    def is_unit(self) -> bool:
        return not self.dom.is_zero(self.c[0])

    def is_constant(self) -> bool:
        return all(self.dom.is_zero(x) for x in self.c[1:])

    def truncate_below(self, a: int) -> "TSeries":
        """q|_a: zero the coefficients of t^i for i >= a; precision unchanged."""
        if a > len(self.c):
            raise PrecisionExceeded(f"truncation at {a} beyond precision {len(self.c)}")
        z = self.dom.zero
        return self._new(list(self.c[:a]) + [z] * (len(self.c) - a))

    def reduce(self, n: int) -> "TSeries":
        """Image in A[t]/(t^n)."""
        if n > len(self.c):
            raise PrecisionExceeded(f"reduction to t^{n} beyond precision {len(self.c)}")
        return self._new(self.c[:n])

    def pad(self, N: int, fill=None) -> "TSeries":
        """Lift to precision N; new coefficients are zero or taken from `fill`."""
        cs = list(self.c[:N])
        for i in range(len(cs), N):
            cs.append(self.dom(fill[i]) if fill is not None else self.dom.zero)
        return self._new(cs)

    def star_scale(self, lam) -> "TSeries":
        return star_scale(lam, self)

    def deriv_t(self) -> "TSeries":
        """d/dt; the result has precision N-1."""
        return self._new([self.c[i] * i for i in range(1, len(self.c))])

    def map_coeffs(self, f, dom=None) -> "TSeries":
        return TSeries(dom or self.dom, [f(x) for x in self.c], False)

    def deriv(self, var) -> "TSeries":
        """Coefficientwise derivation of the coefficient domain."""
        return self._new([self.dom.deriv(x, var) for x in self.c])

    def log_circ(self) -> "TSeries":
        if self._log is None:
            self._log = log_circ(self)
        return self._log

    def __repr__(self):
        return f"TSeries({self.fmt()})"

    def fmt(self) -> str:
        terms = []
        for i, x in enumerate(self.c):
            if not self.dom.is_zero(x):
                terms.append((self.dom.fmt(x), power("t", i)))
        return f"{join_terms(terms)} + O(t^{len(self.c)})"


def _is_atom(s: str) -> bool:
    b = s[1:] if s.startswith("-") else s
    return not any(ch in b for ch in "+- ")


def _val(dom, cs) -> int:
    for i, x in enumerate(cs):
        if not dom.is_zero(x):
            return i
    return len(cs)


def log_circ(a: TSeries) -> TSeries:
    """log(a / a(0)) via n L_n = n z_n - sum_{k<n} k L_k z_{n-k}."""
    if a.dom.is_zero(a.c[0]):
        raise NonUnit("log_circ of a series with zero constant term")
    dom = a.dom
    a0 = a.c[0]
    z = [x / a0 for x in a.c]
    N = len(z)
    L = [dom.zero] * N
    nz = [not dom.is_zero(x) for x in z]
    for n in range(1, N):
        acc = z[n] * n
        for k in range(1, n):
            if nz[n - k] and not dom.is_zero(L[k]):
                acc = acc - L[k] * z[n - k] * k
        L[n] = acc / n
    return TSeries(dom, L, False)


def series_exp(u: TSeries) -> TSeries:
    """exp(u) for u with zero constant term: n E_n = sum_{k=1..n} k u_k E_{n-k}."""
    dom = u.dom
    if not dom.is_zero(u.c[0]):
        raise NonNilpotentConstant("exp of a series with nonzero constant term")
    N = len(u.c)
    E = [dom.one] + [dom.zero] * (N - 1)
    nz = [not dom.is_zero(x) for x in u.c]
    for n in range(1, N):
        acc = None
        for k in range(1, n + 1):
            if nz[k]:
                term = u.c[k] * E[n - k] * k
                acc = term if acc is None else acc + term
        E[n] = dom.zero if acc is None else acc / n
    return TSeries(dom, E, False)


def exp_monomial(dom, a, i: int, N: int) -> TSeries:
    """e^{a t^i} at precision N."""
    return series_exp(TSeries.monomial(dom, a, i, N))


def star_scale(lam, q: TSeries) -> TSeries:
    dom = q.dom
    if dom.is_zero(dom(lam)):
        raise NonUnit("star action by zero")
    out = []
    p = dom.one
    for x in q.c:
        out.append(x * p)
        p = p * lam
    return TSeries(dom, out, False)


def truncate_below(q: TSeries, a: int) -> TSeries:
    return q.truncate_below(a)


def ell_i(a: TSeries, i: int):
    if i >= a.prec:
        raise PrecisionExceeded(f"ell_{i} needs precision > {i}, have {a.prec}")
    return a.log_circ().c[i]

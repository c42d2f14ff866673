"""Formal Bloch symbols and wedges of units; delta, ell_i, ell_{m,r}, li_{m,r}, lambda_i."""
from __future__ import annotations

from flint import fmpq

from .errors import BadModulus, FlatViolation, NonUnit, PrecisionExceeded
from .fmt import join_terms
from .fields import to_fmpq
from .forms import Form1, Form2, wedge11
from .series import TSeries, ell_i, log_circ, series_exp


def check_modulus(m: int, r: int):
    if not (m >= 1 and m < r < 2 * m):
        raise BadModulus(f"need m < r < 2m, got m={m}, r={r}")


def _parity(keys) -> int:
    """Sign of the permutation sorting `keys`."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _as_series(x, dom, N):
    if isinstance(x, TSeries):
        return x
    return TSeries.const(dom, x, N)


class WedgeSum:
    """Formal Q-combination of u1 ^ ... ^ un, antisymmetry-normalized."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        for coeff, entries in terms or ():
            self._add(coeff, entries)

    def _add(self, coeff, entries):
        coeff = to_fmpq(coeff)
        if coeff == 0:
            return
        entries = tuple(entries)
        if len(entries) != self.n:
            raise ValueError(f"expected {self.n} entries, got {len(entries)}")
        for e in entries:
            if not e.is_unit():
                raise NonUnit(f"wedge entry {e.fmt()} is not a unit")
        keys = [e.key() for e in entries]
        if len(set(keys)) < len(keys):
            return
        sign = _parity(keys)
        order = sorted(range(len(keys)), key=lambda i: keys[i])
        ent = tuple(entries[i] for i in order)
        k = tuple(keys[i] for i in order)
        c = coeff * sign
        if k in self.terms:
            c0, _ = self.terms[k]
            c = c0 + c
            if c == 0:
                del self.terms[k]
                return
        self.terms[k] = (c, ent)

    @classmethod
    def single(cls, *entries, coeff=1):
        return cls(len(entries), [(coeff, entries)])

    def items(self):
        return list(self.terms.values())

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = WedgeSum(self.n)
        out.terms = dict(self.terms)
        for c, e in other.terms.values():
            out._add(c, e)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = WedgeSum(self.n)
        out.terms = {k: (-c, e) for k, (c, e) in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = to_fmpq(k)
        out = WedgeSum(self.n)
        if k != 0:
            out.terms = {kk: (c * k, e) for kk, (c, e) in self.terms.items()}
        return out

    __rmul__ = __mul__

    def wedge(self, y: TSeries) -> "WedgeSum":
        out = WedgeSum(self.n + 1)
        for c, e in self.terms.values():
            out._add(c, e + (y,))
        return out

    def map_entries(self, f) -> "WedgeSum":
        out = WedgeSum(self.n)
        for c, e in self.terms.values():
            out._add(c, tuple(f(x) for x in e))
        return out

    def normalize(self) -> "WedgeSum":
        return WedgeSum(self.n, self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, WedgeSum):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    def __len__(self):
        return len(self.terms)

    def fmt(self) -> str:
        parts = []
        for k in sorted(self.terms):
            c, e = self.terms[k]
            body = " ^ ".join(f"({x.fmt()})" for x in e)
            parts.append((str(c), f"[{body}]"))
        return join_terms(parts) if parts else "0"

    __str__ = fmt


def _check_flat(x: TSeries):
    dom = x.dom
    x0 = x.c[0]
    if dom.is_zero(x0) or dom.is_zero(1 - x0):
        raise FlatViolation(f"[{x.fmt()}]: x(1-x) is not a unit")


class B2Elt:
    """Formal Q-combination of Bloch symbols [x]; no five-term quotient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for c, x in terms or ():
            self._add(c, x)

    def _add(self, c, x):
        c = to_fmpq(c)
        if c == 0:
            return
        _check_flat(x)
        k = x.key()
        if k in self.terms:
            c = c + self.terms[k][0]
            if c == 0:
                del self.terms[k]
                return
        self.terms[k] = (c, x)

    @classmethod
    def symbol(cls, x, coeff=1):
        return cls([(coeff, x)])

    def items(self):
        return list(self.terms.values())

    def __add__(self, other):
        out = B2Elt(self.items())
        for c, x in other.items():
            out._add(c, x)
        return out

    def __neg__(self):
        return B2Elt([(-c, x) for c, x in self.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return B2Elt([(c * to_fmpq(k), x) for c, x in self.items()])

    __rmul__ = __mul__

    def tensor(self, y: TSeries) -> "B2Tensor":
        return B2Tensor([(c, x, y) for c, x in self.items()])

    def map_entries(self, f) -> "B2Elt":
        return B2Elt([(c, f(x)) for c, x in self.items()])

    def is_zero(self):
        return not self.terms

    def fmt(self) -> str:
        return join_terms((str(c), f"[{x.fmt()}]") for c, x in self.items()) or "0"


class B2Tensor:
    """Formal Q-combination of [x] (x) y."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for c, x, y in terms or ():
            self._add(c, x, y)

    def _add(self, c, x, y):
        c = to_fmpq(c)
        if c == 0:
            return
        _check_flat(x)
        if not y.is_unit():
            raise NonUnit(f"{y.fmt()} is not a unit")
        k = (x.key(), y.key())
        if k in self.terms:
            c = c + self.terms[k][0]
            if c == 0:
                del self.terms[k]
                return
        self.terms[k] = (c, x, y)

    @classmethod
    def symbol(cls, x, y, coeff=1):
        return cls([(coeff, x, y)])

    def items(self):
        return list(self.terms.values())

    def __add__(self, other):
        out = B2Tensor(self.items())
        for c, x, y in other.items():
            out._add(c, x, y)
        return out

    def __neg__(self):
        return B2Tensor([(-c, x, y) for c, x, y in self.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return B2Tensor([(c * to_fmpq(k), x, y) for c, x, y in self.items()])

    __rmul__ = __mul__

    def map_entries(self, f) -> "B2Tensor":
        return B2Tensor([(c, f(x), f(y)) for c, x, y in self.items()])

    def is_zero(self):
        return not self.terms

    def fmt(self) -> str:
        return join_terms((str(c), f"[{x.fmt()}](x)({y.fmt()})") for c, x, y in self.items()) or "0"


class PairElt:
    """Two parallel components whose reductions mod t^m agree."""

    __slots__ = ("first", "second", "m")

    def __init__(self, first, second, m: int, check=True):
        self.first = first
        self.second = second
        self.m = m
        if check:
            check_pair(first, second, m)

    def map(self, f) -> "PairElt":
        return PairElt(f(self.first), f(self.second), self.m, check=False)


def series_agree(a: TSeries, b: TSeries, m: int) -> bool:
    if a.prec < m or b.prec < m:
        raise PrecisionExceeded(f"pair comparison mod t^{m}")
    for i in range(m):
        d = a.c[i] - b.c[i]
        neg = getattr(d, "is_negligible", None)
        if neg is not None:
            if not neg():
                return False
        elif not a.dom.is_zero(d):
            return False
    return True


def check_pair(a, b, m: int):
    """Raise ValueError unless the two components agree mod t^m slot by slot."""
    if isinstance(a, TSeries):
        if not series_agree(a, b, m):
            raise ValueError("pair components differ mod t^m")
        return
    if isinstance(a, (list, tuple)):
        if len(a) != len(b):
            raise ValueError("pair components have different shapes")
        for x, y in zip(a, b):
            check_pair(x, y, m)
        return
    raise TypeError(f"cannot check pair of {type(a).__name__}")


# ---------------------------------------------------------------- maps

def delta_b2(e: B2Elt) -> WedgeSum:
    out = WedgeSum(2)
    for c, x in e.items():
        out._add(c, (1 - x, x))
    return out


def delta_b2_tensor(e: B2Tensor) -> WedgeSum:
    out = WedgeSum(3)
    for c, x, y in e.items():
        out._add(c, (1 - x, x, y))
    return out


def delta_symbol(x: TSeries):
    return (1 - x, x)


def ell_pair(a: TSeries, b: TSeries, m: int, r: int):
    """ell_{m,r}(a ^ b) for a single generator."""
    if a.prec < r or b.prec < r:
        raise PrecisionExceeded(f"ell_{{m,r}} needs precision >= {r}")
    la = a.log_circ().c
    lb = b.log_circ().c
    acc = None
    for i in range(1, r - m + 1):
        t = (la[r - i] * lb[i] - lb[r - i] * la[i]) * i
        acc = t if acc is None else acc + t
    return acc if acc is not None else a.dom.zero


def ell_mr(w: WedgeSum, m: int, r: int):
    check_modulus(m, r)
    acc = None
    for c, (a, b) in w.items():
        t = ell_pair(a, b, m, r) * c
        acc = t if acc is None else acc + t
    return acc if acc is not None else 0


def _padded(x: TSeries, r: int) -> TSeries:
    return x.pad(r) if x.prec < r else x


def li_symbol(x: TSeries, m: int, r: int, path: str = "wedge"):
    """li_{m,r}([x]).  Inputs of precision in [m, r) are zero-padded to r."""
    if r == m:
        return x.dom.zero
    check_modulus(m, r)
    if x.prec < m:
        raise PrecisionExceeded(f"li_{{m,r}} needs precision >= {m}")
    _check_flat(x)
    if path == "wedge":
        xr = _padded(x, r)
        return ell_pair(1 - xr, xr, m, r)
    return li_direct(x, m, r)


def li_direct(x: TSeries, m: int, r: int):
    """t_{r-1}( log°(1 - s e^{u|_m}) * (u_t)|_{r-m} ) with x = s e^u."""
    dom = x.dom
    s = x.c[0]
    u = _padded(x, r).log_circ() if x.prec < r else x.log_circ()
    um = u.reduce(min(u.prec, r)).truncate_below(m) if u.prec >= m else u
    um = um.pad(r)
    f = (1 - series_exp(um) * s).log_circ()
    ut = um.deriv_t()                      # precision r-1
    acc = None
    for i in range(0, r - m):              # (u_t)|_{r-m}: degrees < r-m
        j = r - 1 - i
        t = ut.c[i] * f.c[j]
        acc = t if acc is None else acc + t
    return acc if acc is not None else dom.zero


def li_mr(e: B2Elt, m: int, r: int, path: str = "wedge"):
    if r == m:
        return 0
    check_modulus(m, r)
    acc = None
    for c, x in e.items():
        t = li_symbol(x, m, r, path) * c
        acc = t if acc is None else acc + t
    return acc if acc is not None else 0


def five_term(x: TSeries, y: TSeries) -> B2Elt:
    """[x] - [y] + [y/x] - [(1-1/x)/(1-1/y)] + [(1-x)/(1-y)]."""
    for name, v in (("x", x), ("y", y), ("1-x", 1 - x), ("1-y", 1 - y), ("x-y", x - y)):
        if not v.is_unit():
            raise FlatViolation(f"five-term input: {name} is not a unit")
    ix, iy = x.inv(), y.inv()
    syms = [
        (1, x),
        (-1, y),
        (1, y * ix),
        (-1, (1 - ix) * (1 - iy).inv()),
        (1, (1 - x) * (1 - y).inv()),
    ]
    for _, z in syms:
        _check_flat(z)
    return B2Elt(syms)


def star(lam, obj):
    """The star action t -> lam t on series, wedges, Bloch elements and pairs."""
    if isinstance(obj, TSeries):
        return obj.star_scale(lam)
    if isinstance(obj, (WedgeSum, B2Elt, B2Tensor)):
        return obj.map_entries(lambda x: x.star_scale(lam))
    if isinstance(obj, PairElt):
        return obj.map(lambda v: star(lam, v))
    if isinstance(obj, (list, tuple)):
        return type(obj)(star(lam, v) for v in obj)
    raise TypeError(f"no star action on {type(obj).__name__}")


# ---------------------------------------------------------------- Milnor coordinates

def _dlog_parts(a: TSeries):
    """dlog a = A dt + sum_v B[v] dv as series in t."""
    inv = a.inv()
    A = a.deriv_t() * inv
    B = {v: a.deriv(v) * inv for v in a.dom.vars}
    return A, B


def lambda_i_milnor(w: WedgeSum, i: int):
    """res_{t=0} t^{-i} dlog a_1 ^ ... ^ dlog a_n, with dt moved to the front."""
    if w.n not in (2, 3):
        raise ValueError("lambda_i is implemented for n = 2, 3")
    items = w.items()
    if not items:
        return None
    dom = items[0][1][0].dom
    vs = dom.vars
    acc = None
    for c, ents in items:
        for e in ents:
            if e.prec < i + 1:
                raise PrecisionExceeded(f"lambda_{i} needs precision >= {i + 1}")
        parts = [_dlog_parts(e) for e in ents]
        if w.n == 2:
            (A1, B1), (A2, B2) = parts
            coef = {v: ((A1 * B2[v]) - (A2 * B1[v])).c[i - 1] for v in vs}
            term = Form1(dom, coef) * c
        else:
            term = None
            for k in range(3):
                A, _ = parts[k]
                others = [parts[j][1] for j in range(3) if j != k]
                sign = -1 if k == 1 else 1
                h = {}
                for a_i, v in enumerate(vs):
                    for u in vs[a_i + 1:]:
                        prod = A * (others[0][v] * others[1][u] - others[0][u] * others[1][v])
                        h[(v, u)] = prod.c[i - 1] * sign
                f2 = Form2(dom, h)
                term = f2 if term is None else term + f2
            term = term * c
        acc = term if acc is None else acc + term
    return acc

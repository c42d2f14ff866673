"""Kähler 1- and 2-forms with exact coefficients, exterior derivative, residues."""
from __future__ import annotations

from .fields import Domain
from .fmt import join_forms
from .laurent import Laurent, ClosedPoint, laurent_expand, order_at


class Form1:
    """sum_v f_v dv over a coefficient domain with derivations `dom.vars`."""

    __slots__ = ("dom", "coef")

    def __init__(self, dom: Domain, coef=None):
        self.dom = dom
        self.coef = {}
        for v, f in (coef or {}).items():
            if not dom.is_zero(f):
                self.coef[v] = f

    @classmethod
    def zero(cls, dom):
        return cls(dom)

    def __getitem__(self, var):
        return self.coef.get(var, self.dom.zero)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.coef)
        for v, f in other.coef.items():
            out[v] = out[v] + f if v in out else f
        return Form1(self.dom, out)

    __radd__ = __add__

    def __neg__(self):
        return Form1(self.dom, {v: -f for v, f in self.coef.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return Form1(self.dom, {v: f * k for v, f in self.coef.items()})

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Form1(self.dom, {v: f / k for v, f in self.coef.items()})

    def is_zero(self) -> bool:
        return not self.coef

    def is_negligible(self) -> bool:
        """Zero up to the known precision (Laurent coefficients)."""
        return all(isinstance(f, Laurent) and f.is_negligible() for f in self.coef.values())

    def __eq__(self, other):
        if not isinstance(other, Form1):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted((v, self.dom.key(f)) for v, f in self.coef.items())))

    def relative(self, var: str = "s") -> "Form1":
        """Projection to differentials relative to the base (keep only d`var`)."""
        return Form1(self.dom, {v: f for v, f in self.coef.items() if v == var})

    def fmt(self) -> str:
        order = sorted(self.coef, key=lambda v: (v != "s", v))
        return join_forms((self.dom.fmt(self.coef[v]), "d" + v) for v in order)

    __str__ = fmt

    def __repr__(self):
        return f"Form1({self.fmt()})"


class Form2:
    """sum h_{v,w} dv ^ dw with v before w in `dom.vars`."""

    __slots__ = ("dom", "coef")

    def __init__(self, dom: Domain, coef=None):
        self.dom = dom
        self.coef = {}
        for k, f in (coef or {}).items():
            if not dom.is_zero(f):
                self.coef[k] = f

    def __add__(self, other):
        out = dict(self.coef)
        for k, f in other.coef.items():
            out[k] = out[k] + f if k in out else f
        return Form2(self.dom, out)

    def __neg__(self):
        return Form2(self.dom, {k: -f for k, f in self.coef.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return Form2(self.dom, {kk: f * k for kk, f in self.coef.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coef

    def __eq__(self, other):
        return (self - other).is_zero()

    def fmt(self) -> str:
        return join_forms((self.dom.fmt(f), f"d{a}^d{b}") for (a, b), f in sorted(self.coef.items()))

    __str__ = fmt


def wedge11(a: Form1, b: Form1) -> Form2:
    dom = a.dom
    vs = dom.vars
    out = {}
    for i, v in enumerate(vs):
        for w in vs[i + 1:]:
            h = a[v] * b[w] - a[w] * b[v]
            out[(v, w)] = h
    return Form2(dom, out)


def d(f, dom: Domain) -> Form1:
    return Form1(dom, {v: dom.deriv(f, v) for v in dom.vars})


def dlog(f, dom: Domain) -> Form1:
    return d(f, dom) / f


def residue_form(w: Form1, at: ClosedPoint | None = None, var: str = "s"):
    """Residue of the d`var` component at a closed point (or at z = 0 over a Laurent field)."""
    g = w[var]
    if isinstance(g, Laurent):
        return g.residue()
    K = at.residue_field
    if w.dom.is_zero(g):
        return K.zero
    v = order_at(g, at)
    if at.is_infinite:
        # g(s) ds = -g(1/z) z^-2 dz
        if v >= 2:
            return K.zero
        return -laurent_expand(g, at, window=(v, 1)).coeff(1)
    if v >= 0:
        return K.zero
    return laurent_expand(g, at, window=(v, -1)).coeff(-1)


def poles(w: Form1, var: str = "s", base_vars=()):
    from .laurent import support_points
    g = w[var]
    if w.dom.is_zero(g):
        return []
    seen = {}
    for p in support_points(g, base_vars):
        seen[p.key()] = p
    return sorted(seen.values()) + [ClosedPoint.infinity(base_vars)]

"""Omega_{m,r} on exponential generators, omega_{m,r} on pair liftings,
reparametrizations s -> s + A(t), and the homotopy hOmega_{3,5}."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from flint import fmpq

from .bloch import WedgeSum, check_modulus, _parity
from .errors import BadModulus, NotInImage, PrecisionExceeded
from .fields import to_fmpq
from .forms import Form1
from .series import TSeries, series_exp

VAR = "s"


# ---------------------------------------------------------------- generators

@dataclass(frozen=True)
class Slot:
    """A constant unit (order 0) or an exponential e^{a t^order}."""

    order: int
    value: object

    def key(self, dom) -> str:
        return f"{self.order}:{dom.key(self.value)}"


@dataclass
class ExpGenerator:
    coeff: fmpq
    slots: tuple

    def orders(self):
        return tuple(s.order for s in self.slots)


def unit_slots(f: TSeries):
    """f = f(0) * prod_i e^{ell_i(f) t^i}; a constant +-1 is torsion and dropped."""
    dom = f.dom
    c0 = f.c[0]
    out = [] if dom.is_zero(c0 - 1) or dom.is_zero(c0 + 1) else [Slot(0, c0)]
    L = f.log_circ().c
    for i in range(1, len(L)):
        if not f.dom.is_zero(L[i]):
            out.append(Slot(i, L[i]))
    return out


def expand_exponential(w: WedgeSum, max_order: int | None = None):
    """Trilinear expansion of a Lambda^3 element into exponential generators."""
    gens = []
    for c, ents in w.items():
        dom = ents[0].dom
        s1, s2, s3 = (unit_slots(e) for e in ents)
        for a in s1:
            for b in s2:
                for z in s3:
                    if max_order is not None and a.order + b.order + z.order > max_order:
                        continue
                    gens.append(ExpGenerator(fmpq(c), (a, b, z)))
    return gens


def normalize_generators(gens, dom):
    """Merge equal generators after sorting slots (sign tracked)."""
    acc = {}
    for g in gens:
        keys = [s.key(dom) for s in g.slots]
        if len(set(keys)) < 3:
            continue
        sign = _parity(keys)
        order = sorted(range(3), key=lambda i: keys[i])
        k = tuple(keys[i] for i in order)
        slots = tuple(g.slots[i] for i in order)
        if k in acc:
            acc[k] = (acc[k][0] + g.coeff * sign, slots)
        else:
            acc[k] = (g.coeff * sign, slots)
    return [ExpGenerator(c, s) for c, s in acc.values() if c != 0]


def _slot_terms(slot: Slot, dom):
    """(y*b, db) with the order-0 convention yb = 0, db = dlog(constant)."""
    if slot.order == 0:
        return dom.zero, dom.deriv(slot.value, VAR) / slot.value
    return slot.value * slot.order, dom.deriv(slot.value, VAR)


def omega_generator(g: ExpGenerator, m: int, r: int, dom):
    """Coefficient of ds in Omega_{m,r}(g); None when g has no slot of order >= m."""
    o = g.orders()
    if sum(o) != r:
        return dom.zero if any(x >= m for x in o) else None
    for p in range(3):
        if o[p] >= m:
            a = g.slots[p].value
            yb, db = _slot_terms(g.slots[(p + 1) % 3], dom)
            zc, dc = _slot_terms(g.slots[(p + 2) % 3], dom)
            return a * (yb * dc - zc * db) * g.coeff
    return None


def Omega_mr(gens, m: int, r: int, dom) -> Form1:
    check_modulus(m, r)
    total = dom.zero
    for g in gens:
        v = omega_generator(g, m, r, dom)
        if v is None:
            raise NotInImage(f"generator with slot orders {g.orders()} has no slot of order >= {m}")
        total = total + v
    return Form1(dom, {VAR: total})


def omega_via_generators(A: WedgeSum, B: WedgeSum, m: int, r: int) -> Form1:
    """Omega_{m,r}(expand(A) - expand(B)), after exact cancellation of low generators."""
    check_modulus(m, r)
    dom = _dom(A, B)
    gens = expand_exponential(A, r) + [ExpGenerator(-g.coeff, g.slots) for g in expand_exponential(B, r)]
    merged = normalize_generators(gens, dom)
    for g in merged:
        if all(o < m for o in g.orders()):
            raise NotInImage(f"low generator with orders {g.orders()} survives: not a pair in I_(m,r)")
    return Omega_mr(merged, m, r, dom)


def _dom(*ws):
    for w in ws:
        for _, ents in w.items():
            return ents[0].dom
    raise ValueError("empty wedge: coefficient domain unknown")


# ---------------------------------------------------------------- fast pair route

class _SlotData:
    __slots__ = ("L", "dL", "c0", "dlog0")

    def __init__(self, f: TSeries, r: int):
        dom = f.dom
        if f.prec < r:
            raise PrecisionExceeded(f"omega needs precision >= {r}")
        self.L = f.log_circ().c
        self.dL = {}
        self.c0 = f.c[0]
        self.dlog0 = dom.deriv(self.c0, VAR) / self.c0

    def dl(self, dom, y):
        v = self.dL.get(y)
        if v is None:
            v = dom.deriv(self.L[y], VAR)
            self.dL[y] = v
        return v


def _H(ents, m: int, r: int, dom):
    data = [_SlotData(e, r) for e in ents]
    total = dom.zero
    for p in range(3):
        A, B, C = data[p], data[(p + 1) % 3], data[(p + 2) % 3]
        for x in range(m, r):
            ax = A.L[x]
            if dom.is_zero(ax):
                continue
            w = r - x
            acc = dom.zero
            for y in range(0, w + 1):
                z = w - y
                # y * b_y * dc_z - z * c_z * db_y
                if y == 0:
                    if z > 0 and not dom.is_zero(C.L[z]):
                        acc = acc - C.L[z] * z * B.dlog0
                elif z == 0:
                    if not dom.is_zero(B.L[y]):
                        acc = acc + B.L[y] * y * C.dlog0
                else:
                    by, cz = B.L[y], C.L[z]
                    if not dom.is_zero(by):
                        acc = acc + by * y * C.dl(dom, z)
                    if not dom.is_zero(cz):
                        acc = acc - cz * z * B.dl(dom, y)
            total = total + ax * acc
    return total


def H_wedge(w: WedgeSum, m: int, r: int, dom):
    total = dom.zero
    for c, ents in w.items():
        total = total + _H(ents, m, r, dom) * c
    return total


def check_low_agreement(a: TSeries, b: TSeries, m: int):
    """Slotwise pair condition: a = b mod t^m, compared through (a(0), ell_1..ell_{m-1})."""
    from .bloch import series_agree
    if not series_agree(a, b, m):
        raise NotInImage("pair slots differ modulo t^m")


def omega_mr_pair(first, second, m: int, r: int, check: bool = True) -> Form1:
    """omega_{m,r} on a pair.

    `first`/`second` are either WedgeSum(3) values (whose difference must lie
    in I_{m,r}) or lists of slot triples [(coeff, (f1,f2,f3))] given slotwise.
    """
    check_modulus(m, r)
    if isinstance(first, WedgeSum):
        dom = _dom(first, second)
        if check:
            # cancellation of low generators, via the generator route on low orders only
            _assert_low_cancel(first, second, m, dom)
        val = H_wedge(first, m, r, dom) - H_wedge(second, m, r, dom)
        return Form1(dom, {VAR: val})
    dom = None
    total = None
    for (c1, e1), (c2, e2) in zip(first, second):
        dom = e1[0].dom
        if check:
            if c1 != c2:
                raise NotInImage("slotwise pair with different coefficients")
            for a, b in zip(e1, e2):
                check_low_agreement(a, b, m)
        v = (_H(e1, m, r, dom) - _H(e2, m, r, dom)) * c1
        total = v if total is None else total + v
    return Form1(dom, {VAR: total if total is not None else 0})


def _assert_low_cancel(A, B, m, dom):
    gens = expand_exponential(A, 3 * (m - 1)) + [
        ExpGenerator(-g.coeff, g.slots) for g in expand_exponential(B, 3 * (m - 1))]
    low = [g for g in gens if all(s.order < m for s in g.slots)]
    merged = normalize_generators(low, dom)
    if merged:
        raise NotInImage(f"{len(merged)} low generators fail to cancel: not a pair in I_(m,r)")


def res_omega_pair(first, second, m: int, r: int, check: bool = True):
    """Residue at z = 0 of omega_{m,r} over a Laurent field."""
    w = omega_mr_pair(first, second, m, r, check)
    return w[VAR].residue()


# ---------------------------------------------------------------- reparametrization

def reparam_series(A: TSeries, f: TSeries) -> TSeries:
    """f(s + A(t)) = sum_k A^k/k! d^k f/ds^k, with A(0) = 0."""
    dom = f.dom
    N = f.prec
    if A.prec < N:
        A = A.pad(N)
    A = A.reduce(N)
    out = f
    Dk = f
    Ak = TSeries.const(dom, 1, N)
    for k in range(1, N):
        Ak = Ak * A
        if Ak.is_constant() and dom.is_zero(Ak.c[0]):
            break
        Dk = Dk.deriv(VAR)
        out = out + Ak * Dk * fmpq(1, factorial(k))
    return out


def reparam_shift(w: int, alpha, dom, N: int) -> TSeries:
    return TSeries.monomial(dom, alpha, w, N)


def reparam(spec, target, dom=None):
    """Apply s -> s + A(t).  `spec` is (w, alpha) or the series A itself."""
    if isinstance(spec, TSeries):
        A = spec
    else:
        w, alpha = spec
        d0 = dom or _target_dom(target)
        if w is None or d0.is_zero(d0(alpha)):
            return target
        A = (w, alpha, d0)
    return _apply(A, target)


def _target_dom(t):
    if isinstance(t, TSeries):
        return t.dom
    if isinstance(t, WedgeSum):
        return _dom(t)
    if isinstance(t, (list, tuple)):
        return _target_dom(t[0])
    raise TypeError(type(t).__name__)


def _apply(A, target):
    if isinstance(target, TSeries):
        if isinstance(A, tuple):
            w, alpha, dom = A
            A2 = TSeries.monomial(target.dom, alpha, w, target.prec)
        else:
            A2 = A
        return reparam_series(A2, target)
    if isinstance(target, WedgeSum):
        return target.map_entries(lambda e: _apply(A, e))
    if isinstance(target, list):
        return [_apply(A, x) for x in target]
    if isinstance(target, tuple):
        return tuple(_apply(A, x) for x in target)
    if isinstance(target, (fmpq, int)):
        return target
    raise TypeError(f"cannot reparametrize {type(target).__name__}")


def reparam_antiderivative(g: ExpGenerator, w: int, alpha, r: int, dom):
    """The function F with Omega_{m,r}(sigma g / g) = dF for s -> s + alpha t^w.

    F = alpha^q/q! sum_{0<=k<=q-1} a^(k) C(q-1,k) sum_{i+j=q-k}
        [C(q-k-1,i) y b^(i) c^(j) - C(q-k-1,j) z b^(i) c^(j)],
    with q = (r - x - y - z)/w and the logarithmic-derivative convention for
    constant slots.  Slot 1 is taken as the slot of order >= m.
    """
    x, y, z = g.orders()
    if (r - x - y - z) % w or r - x - y - z <= 0:
        return dom.zero
    q = (r - x - y - z) // w
    a, b, c = (_derivs(s, q, dom) for s in g.slots)
    total = dom.zero
    for k in range(0, q):
        inner = dom.zero
        for i in range(0, q - k + 1):
            j = q - k - i
            bc = b[i] * c[j]
            t1 = bc * (comb(q - k - 1, i) * y) if i <= q - k - 1 else dom.zero
            t2 = bc * (comb(q - k - 1, j) * z) if j <= q - k - 1 else dom.zero
            inner = inner + t1 - t2
        total = total + a[k] * inner * comb(q - 1, k)
    return total * (alpha ** q) * fmpq(1, factorial(q)) * g.coeff


def _derivs(slot: Slot, q: int, dom):
    """[v, v', ..., v^(q)] where for constant slots v^(n) = (log v)^(n) for n >= 1."""
    if slot.order == 0:
        lv = dom.deriv(slot.value, VAR) / slot.value
        out = [dom.zero, lv]                # value slot unused for k = 0 with order 0
        for _ in range(2, q + 1):
            out.append(dom.deriv(out[-1], VAR))
        return out[: q + 1] if q >= 1 else out[:1]
    out = [slot.value]
    for _ in range(q):
        out.append(dom.deriv(out[-1], VAR))
    return out


# ---------------------------------------------------------------- homotopy

def _Hh(ents, g, dom):
    """hOmega_{3,5}(g d/ds) on the weight-4 generators of shape (3,1,0)."""
    data = [_SlotData(e, 4) for e in ents]
    total = dom.zero
    for p in range(3):
        A, B, C = data[p], data[(p + 1) % 3], data[(p + 2) % 3]
        a3 = A.L[3]
        if dom.is_zero(a3):
            continue
        total = total + a3 * (B.L[1] * C.dlog0 - C.L[1] * B.dlog0) * g
    return total


def h_omega_35(theta, first, second, m: int = 3, r: int = 5):
    """hOmega_{3,5}(theta) on the pair (first, second); theta = g d/ds given by g."""
    if (m, r) != (3, 5):
        raise BadModulus("hOmega is only defined for (m, r) = (3, 5)")
    if isinstance(first, WedgeSum):
        dom = _dom(first, second)
        tot = dom.zero
        for c, ents in first.items():
            tot = tot + _Hh(ents, theta, dom) * c
        for c, ents in second.items():
            tot = tot - _Hh(ents, theta, dom) * c
        return tot
    tot = None
    for (c1, e1), (_, e2) in zip(first, second):
        dom = e1[0].dom
        v = (_Hh(e1, theta, dom) - _Hh(e2, theta, dom)) * c1
        tot = v if tot is None else tot + v
    return tot


def h_generator(g: ExpGenerator, theta, dom):
    """The defining formula on a single generator (orders a permutation of (3,1,0))."""
    o = g.orders()
    if sorted(o) != [0, 1, 3]:
        return dom.zero
    # rotate so that the order-3 slot is first
    p = o.index(3)
    s1, s2, s3 = g.slots[p], g.slots[(p + 1) % 3], g.slots[(p + 2) % 3]
    if s2.order == 1:
        val = s1.value * s2.value * theta * (dom.deriv(s3.value, VAR) / s3.value)
    else:
        val = -(s1.value * s3.value * theta * (dom.deriv(s2.value, VAR) / s2.value))
    return val * g.coeff

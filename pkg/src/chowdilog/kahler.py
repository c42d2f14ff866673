"""The 1-form valued maps alpha_j, M_{m,r}, L_{m,r} and the composite diagram route."""
from __future__ import annotations

from flint import fmpq

from .bloch import (B2Elt, B2Tensor, WedgeSum, check_modulus, li_symbol)
from .errors import PrecisionExceeded
from .forms import Form1, d, dlog
from .series import TSeries, series_exp


def _L(x: TSeries, i: int):
    return x.log_circ().c[i]


def _dL(x: TSeries, i: int) -> Form1:
    return d(_L(x, i), x.dom)


def _dL0(x: TSeries) -> Form1:
    return dlog(x.c[0], x.dom)


def _dl_wedge_l(p: TSeries, q: TSeries, a: int, b: int) -> Form1:
    """(d ell_a ^ ell_b)(p ^ q) = d ell_a(p) ell_b(q) - d ell_a(q) ell_b(p)."""
    return _dL(p, a) * _L(q, b) - _dL(q, a) * _L(p, b)


def alpha_pair(p: TSeries, q: TSeries, j: int) -> Form1:
    if p.prec < j or q.prec < j:
        raise PrecisionExceeded(f"alpha_{j} needs precision >= {j}")
    acc = Form1(p.dom)
    for i in range(1, j):
        acc = acc + _dl_wedge_l(p, q, j - i, i) * i
    return acc


def alpha_j(w: WedgeSum, j: int) -> Form1:
    acc = None
    for c, (p, q) in w.items():
        t = alpha_pair(p, q, j) * c
        acc = t if acc is None else acc + t
    return acc if acc is not None else Form1(_dom_of(w))


def _dom_of(obj):
    for item in obj.items():
        return item[1].dom if not isinstance(item[1], tuple) else item[1][0].dom
    from .fields import QQ
    return QQ


def M_mr(e: B2Tensor, m: int, r: int) -> Form1:
    check_modulus(m, r)
    acc = None
    for c, x, y in e.items():
        if x.prec < r or y.prec < r:
            raise PrecisionExceeded(f"M_{{m,r}} needs precision >= {r}")
        p, q = 1 - x, x
        t = _dL0(y) * li_symbol(x, m, r)
        for j in range(m, r):
            t = t - alpha_pair(p, q, j) * (_L(y, r - j) * fmpq(r - j, j))
        acc = t * c if acc is None else acc + t * c
    return acc if acc is not None else Form1(_dom_of(e))


def beta(x: TSeries, m: int, j: int) -> Form1:
    """beta_m(j)([x]) = d li_{m,j}(x) + sum_{a+b=j, 1<=a,b<m} b (d ell_a ^ ell_b)(delta x)."""
    dom = x.dom
    acc = d(li_symbol(x, m, j), dom) if j > m else Form1(dom)
    p, q = 1 - x, x
    for a in range(1, m):
        b = j - a
        if 1 <= b < m:
            acc = acc + _dl_wedge_l(p, q, a, b) * b
    return acc


def L_symbol(x: TSeries, y: TSeries, m: int, r: int) -> Form1:
    if x.prec < m or y.prec < m:
        raise PrecisionExceeded(f"L_{{m,r}} needs precision >= {m}")
    x = x.reduce(m).pad(r)
    y = y.reduce(m).pad(r)
    out = _dL0(y) * li_symbol(x, m, r)
    for j in range(m, r):
        out = out - beta(x, m, j) * (_L(y, r - j) * fmpq(r - j, j))
        if j > m:
            out = out + _dL(y, r - j) * li_symbol(x, m, j)
    return out


def L_mr(e: B2Tensor, m: int, r: int) -> Form1:
    check_modulus(m, r)
    acc = None
    for c, x, y in e.items():
        t = L_symbol(x, y, m, r) * c
        acc = t if acc is None else acc + t
    return acc if acc is not None else Form1(_dom_of(e))


def L_mr_rel(e: B2Tensor, m: int, r: int, var: str = "s") -> Form1:
    return L_mr(e, m, r).relative(var)


def _lw(p, q, a, b):
    return _L(p, a) * _L(q, b) - _L(q, a) * _L(p, b)


def composite_route(x: TSeries, y: TSeries, m: int, r: int) -> Form1:
    """The other side of the commutative diagram, evaluated on [x] (x) y over R_r."""
    check_modulus(m, r)
    dom = x.dom
    p, q = 1 - x, x
    out = Form1(dom)
    dl0 = _dL0(y)
    for a in range(m, r):
        b = r - a
        out = out + dl0 * (_lw(p, q, a, b) * b)
    for a in range(1, m):
        for b in range(1, m):
            c = r - a - b
            if a + b >= m and 1 <= c < m:
                out = out - _dl_wedge_l(p, q, a, b) * (_L(y, c) * b * fmpq(c, a + b))
    for a in range(m, r):
        for b in range(1, r - a):
            c = r - a - b
            val = _lw(p, q, a, b)
            out = out - d(val, dom) * (_L(y, c) * b * fmpq(c, a + b))
            out = out + _dL(y, c) * (val * b)
    return out


def surjectivity_witness(m: int, r: int, dom, c0=None):
    """A B2 element alpha over R_m with delta(alpha) = 0 and li_{m,r}(alpha) = s.

    Built from symbols [c e^{a t}] (whose delta has star weights 0..m only),
    projected to star weight r by a Vandermonde combination of rescalings,
    and summed over a = s + k so that the r-th powers combine to s.
    """
    check_modulus(m, r)
    s = dom.gen("s")
    c0 = fmpq(1, 3) if c0 is None else c0
    weights = list(range(0, m + 1)) + [r]
    lams = [fmpq(k + 1) for k in range(len(weights))]
    coeffs = _vandermonde_solve(lams, weights, target=r)
    shifts = _power_combination(r)         # s = sum_k q_k (s + k)^r
    base = li_symbol(TSeries.const(dom, c0, m) * series_exp(TSeries.monomial(dom, 1, 1, m)), m, r)
    from .fields import QQ
    scale = 1 / QQ(base)
    terms = []
    for k, qk in enumerate(shifts):
        if qk == 0:
            continue
        for lam, cl in zip(lams, coeffs):
            if cl == 0:
                continue
            a = (s + k) * lam
            x = series_exp(TSeries.monomial(dom, a, 1, m)) * dom(c0)
            terms.append((qk * cl, x))
    return B2Elt(terms) * scale


def _vandermonde_solve(lams, weights, target):
    """Rational c with sum_l c_l lam_l^w = [w == target] for w in weights."""
    from flint import fmpq_mat
    n = len(lams)
    A = fmpq_mat(n, n, [lam ** w for w in weights for lam in lams])
    b = fmpq_mat(n, 1, [1 if w == target else 0 for w in weights])
    sol = A.solve(b)
    return [sol[i, 0] for i in range(n)]


def _power_combination(r):
    """Rationals q_k (k = 0..r) with s = sum_k q_k (s+k)^r."""
    from flint import fmpq_mat
    from math import comb
    n = r + 1
    # coefficient of s^e in (s+k)^r is C(r,e) k^(r-e)
    A = fmpq_mat(n, n, [comb(r, e) * (k ** (r - e)) for e in range(n) for k in range(n)])
    b = fmpq_mat(n, 1, [1 if e == 1 else 0 for e in range(n)])
    sol = A.solve(b)
    return [sol[i, 0] for i in range(n)]

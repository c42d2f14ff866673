"""Exact equality in Lambda^n of unit groups tensored with Q.

A unit f of K[t]/(t^N) (K = QQ or a rational function field) splits as
f(0) * exp(log° f).  The constant part is factored into rational primes and
monic irreducible polynomials (signs are torsion and disappear after
tensoring with Q); the exponential part lies in a Q-vector space whose
coordinates are read off after clearing a common denominator per t-degree.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import combinations

from flint import fmpq, fmpz

from .bloch import WedgeSum
from .errors import Unsupported
from .fields import QQ, RF, RationalFunctionField


def _factor_rational(q: fmpq, out, sign=1):
    q = fmpq(q)
    for p, e in fmpz(q.p).factor():
        out[("p", int(p))] += sign * e
    for p, e in fmpz(q.q).factor():
        out[("p", int(p))] -= sign * e


def _factor_poly(poly, out, sign=1):
    const, facs = poly.factor()
    c = fmpq(const)
    for g, e in facs:
        lc = g.leading_coefficient()
        if lc != 1:
            g = g / lc
            c *= lc ** e
        out[("g", str(g))] += sign * e
    _factor_rational(c, out, sign)


class UnitCanonicalizer:
    """Coordinates for a fixed finite collection of units (two passes)."""

    def __init__(self, units):
        self.dens = {}
        per_j = defaultdict(list)
        for f in units:
            L = f.log_circ().c
            for j in range(1, len(L)):
                per_j[j].append(L[j])
        for j, vals in per_j.items():
            self.dens[j] = _common_den(vals)

    def vector(self, f) -> dict:
        out = defaultdict(fmpq)
        c0 = f.c[0]
        if isinstance(c0, RF):
            if not c0.n.is_zero():
                _factor_poly(c0.n, out, 1)
                _factor_poly(c0.d, out, -1)
        elif isinstance(c0, fmpq):
            _factor_rational(c0, out)
        else:
            raise Unsupported("canonical form needs rational or rational-function constants")
        L = f.log_circ().c
        for j in range(1, len(L)):
            v = L[j]
            if isinstance(v, RF):
                D = self.dens[j]
                num = v.n * (D / v.d)
                for mon, c in num.to_dict().items():
                    out[("e", j, tuple(mon))] += c
            else:
                if v != 0:
                    out[("e", j, ())] += v
        return {k: v for k, v in out.items() if v != 0}


def _common_den(vals):
    D = None
    for v in vals:
        if not isinstance(v, RF):
            continue
        if D is None:
            D = v.d
        else:
            g = D.gcd(v.d)
            D = D * (v.d / g)
    return D


def wedge_coords(w: WedgeSum, canon: UnitCanonicalizer) -> dict:
    """Coordinates of w in the basis e_{k1} ^ ... ^ e_{kn}, k1 < ... < kn."""
    out = defaultdict(fmpq)
    for c, ents in w.items():
        vecs = [canon.vector(e) for e in ents]
        _expand(vecs, c, out)
    return {k: v for k, v in out.items() if v != 0}


def _expand(vecs, c, out):
    n = len(vecs)

    def rec(i, keys, coef):
        if i == n:
            if len(set(keys)) < n:
                return
            order = sorted(range(n), key=lambda j: keys[j])
            sign = _perm_sign(order)
            out[tuple(keys[j] for j in order)] += coef * sign
            return
        for k, v in vecs[i].items():
            rec(i + 1, keys + [k], coef * v)

    rec(0, [], fmpq(c))


def _perm_sign(order):
    sign = 1
    o = list(order)
    for i in range(len(o)):
        for j in range(i + 1, len(o)):
            if o[i] > o[j]:
                sign = -sign
    return sign


def wedge_is_zero(w: WedgeSum) -> bool:
    units = [e for _, ents in w.items() for e in ents]
    canon = UnitCanonicalizer(units)
    return not wedge_coords(w, canon)


def wedges_equal(a: WedgeSum, b: WedgeSum) -> bool:
    return wedge_is_zero(a - b)

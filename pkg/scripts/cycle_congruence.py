"""Cycle regulators on congruent and non-congruent pairs.

For each (m, r) a random "quad" cycle is built, then perturbed at t^m (congruent,
the regulator must not move) and at t^(m-1) (a witness: the regulator usually moves, though not for every draw).
The closed form -2 (li(a) + li(b)) is printed alongside.
"""
import random

from flint import fmpq

from chowdilog.bloch import li_symbol
from chowdilog.cycles import random_family, rho_cycle
from chowdilog.fields import QQ
from chowdilog.series import TSeries

GRID = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7)]


def li_param(p, m, r):
    cs = [fmpq(c) for c in p] + [fmpq(0)] * m
    return li_symbol(TSeries(QQ, cs[:m]), m, r)


def main(seed=3):
    rng = random.Random(seed)
    print(f"{'m':>2} {'r':>2}  {'rho(Z1)':>22} {'closed form':>22} {'rho(Z2), t^m':>22} {'witness, t^(m-1)':>22}")
    for m, r in GRID:
        fam = random_family(rng, r)
        v1 = rho_cycle(fam.build(r), m, r)
        oracle = -2 * (li_param(fam.params[4], m, r) + li_param(fam.params[5], m, r))
        v2 = rho_cycle(fam.perturbed(m, rng).build(r), m, r)
        v3 = rho_cycle(fam.perturbed(m - 1, rng, index=rng.choice(fam.dilog_params)).build(r), m, r)
        print(f"{m:>2} {r:>2}  {str(v1):>22} {str(oracle):>22} {str(v2):>22} {str(v3):>22}")


if __name__ == "__main__":
    main()

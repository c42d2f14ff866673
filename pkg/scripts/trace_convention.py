"""Plain versus normalized trace on a triple with a degree 2 point in its support.

The triple (s^2 - 2 - t, 1 - s, (s - 2 + t)/(s - 3)) has a zero at the closed
point s^2 = 2, lifted to a + a t/4.  With the plain field trace rho_(2,3) is the
same for every randomized choice of padding and local reparametrization; with
the trace divided by the degree it is not.
"""
from flint import fmpq

from chowdilog.curve import CurveModel, RhoOptions, rho_curve_triple
from chowdilog.fields import QQ
from chowdilog.laurent import ClosedPoint, function_field
from chowdilog.series import TSeries


def quadratic_case():
    F = function_field(())
    s = F.gen("s")
    trip = (TSeries(F, [s * s - 2, F(-1)]), TSeries(F, [1 - s, F(0)]),
            TSeries(F, [(s - 2) / (s - 3), 1 / (s - 3)]))
    M = CurveModel(2)
    M.add_lift(ClosedPoint.rational(2), TSeries(QQ, [2, -1]))
    P2 = ClosedPoint.from_poly([-2, 0, 1])
    a = P2.residue_field.gen
    M.add_lift(P2, TSeries(P2.residue_field, [a, a / 4]))
    return trip, M


def main():
    trip, M = quadratic_case()
    for trace in ("plain", "normalized"):
        vals = [rho_curve_triple(trip, M, 2, 3, RhoOptions(trace=trace))]
        for seed in range(4):
            opts = RhoOptions(trace=trace).randomized(seed, pad_generic=True, pad_local=True, local_reparam=True)
            vals.append(rho_curve_triple(trip, M, 2, 3, opts))
        print(f"{trace:<10} " + "  ".join(str(v) for v in vals))


if __name__ == "__main__":
    main()

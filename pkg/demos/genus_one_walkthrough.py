"""Genus one from both ends: the first Painleve equation as a KdV string equation
and as an isomonodromic Hamiltonian system, and the point where they meet."""

from pi1.diffjet import R, string_lhs
from pi1.exact import Q
from pi1.identify import TimeMap, hamiltonian_comparison, jet_reconstruct, lax_identity
from pi1.isomono import IrregularTimes, OperPoint, e_dir, geometric_hatL, ham_oper
from pi1.minimal import build_Ag, zero_curvature_checks


def main() -> None:
    print("Lenard polynomials")
    for k in (1, 3, 5):
        print(f"  R_{k} = {R(k)}")

    print("\nString equation at genus one (a rescaled first Painleve equation)")
    print(f"  {string_lhs(1)} = 0")
    print(f"  zero-curvature report: {zero_curvature_checks(1)}")

    print("\nThe minimal-model Lax matrix")
    print("  " + str(build_Ag(1)).replace("\n", "\n  "))

    q, p, t1 = Q(2), Q(3), Q(5)
    point = OperPoint((q,), (p,), IrregularTimes(1, (t1,)))
    print(f"\nAn oper point q={q}, p={p}, t_1={t1}")
    print(f"  Hamiltonian p^2 - q^3 - t_1 q = {ham_oper(point, e_dir(1))}")
    print("  geometric Lax matrix:")
    print("  " + str(geometric_hatL(point)).replace("\n", "\n  "))

    rec = jet_reconstruct(point)
    print(f"\nJet of u = -2q along the t_1 flow: {[str(v) for v in rec.u_jet]}")
    s = TimeMap(1).to_s(point.times)
    print(f"  times in KdV normalization: x = {s[0]}")
    r = lax_identity(point)
    print(f"  both Lax matrices agree: {r['equal']}; string equation at the jet: {r['string_equation']}")

    (row,) = hamiltonian_comparison(point)
    print(f"\nK_1 = mu^2 - lam^3 - x lam at (lam, mu) = (q, p): {row.K_sum}")
    print(f"  time-only offset f_1 = {row.f}")


if __name__ == "__main__":
    main()

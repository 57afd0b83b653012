"""Closed forms that fail when taken literally, next to the corrected forms that hold.

Each block evaluates both versions at seeded rational data and prints the
difference, so the size and shape of each discrepancy is visible.
"""

import random

from pi1.identify import correction_value, hamiltonian_comparison, random_oper_point, symmetric_correction
from pi1.isomono import oper_to_sym
from pi1.minimal import I_equals_CH, det_U_check, spectral_data
from pi1.poisson import ad_flow_sides, random_physical_jet


def determinant() -> None:
    det, _ = det_U_check(6)
    print(f"det U to depth 6: {det}")


def invariants_vs_hamiltonians() -> None:
    jet = random_physical_jet(3, random.Random(1))
    sd = spectral_data(3, at=jet)
    print(f"I = C(s)H at a genus-3 jet: {I_equals_CH(sd, 3)}; I = 2 C(s)H: {I_equals_CH(sd, 3, factor=2)}")


def ad_flow() -> None:
    jet = random_physical_jet(3, random.Random(3))
    for l in range(3):
        lhs, single = ad_flow_sides(3, l, jet, literal=True)
        _, weighted = ad_flow_sides(3, l, jet, literal=False)
        print(f"flow l={l}: single generator {lhs == single}, C(s)-weighted generators {lhs == weighted}")


def hamiltonians() -> None:
    pt = random_oper_point(3, random.Random(0))
    for row in hamiltonian_comparison(pt):
        print(
            f"k={row.k}: (2k-1)Ham = {row.scaled_ham}; "
            f"H + [C^-1 R] = {row.H_sqrt + row.CinvR}; 2H + [C^-1 R] = {2 * row.H_sqrt + row.CinvR}"
        )


def symmetric_closed_form() -> None:
    pt = random_oper_point(3, random.Random(2))
    sym = oper_to_sym(pt)
    for k in (2, 3):
        print(
            f"k={k}: coordinates {correction_value(pt, k)}, "
            f"closed form taken literally {symmetric_correction(sym, k, literal=True)}, "
            f"with h_0 = 1 and the sign flipped {symmetric_correction(sym, k, literal=False)}"
        )


if __name__ == "__main__":
    for title, fn in (
        ("Determinant of the resolvent matrix", determinant),
        ("Spectral invariants against Hamiltonians", invariants_vs_hamiltonians),
        ("Flows generated by the invariants", ad_flow),
        ("Hamiltonian normalization", hamiltonians),
        ("Closed form of the correction term", symmetric_closed_form),
    ):
        print(f"\n== {title}")
        fn()

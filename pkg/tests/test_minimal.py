import random

import pytest

from pi1.diffjet import R, S, U, XVAR, d_x, reduce_mod_string, string_lhs
from pi1.exact import Q
from pi1.laxmat import LaxMat
from pi1.minimal import (
    I0_poly,
    I_equals_CH,
    K_hamiltonian,
    K_two_path,
    Rtilde,
    beta_family,
    build_Ag,
    build_U,
    build_U2n1,
    c_values,
    correction_residue_sides,
    correction_terms,
    det_U_check,
    f_vector,
    forward_solve_unit,
    kdv_compat_residual,
    string_compat_constant,
    string_compat_residual,
    lambda_s_compat_residual,
    s_s_compat_residual,
    spectral_data,
    toeplitz,
    toeplitz_relation_check,
    xi_matches_times,
    zero_curvature_checks,
)
from pi1.poisson import random_physical_jet
from pi1.series import LambdaSeries, lam

u, u1, u2, u3, u4 = U(0), U(1), U(2), U(3), U(4)


def _L(*entries) -> LaxMat:
    return LaxMat(*(e if isinstance(e, LambdaSeries) else LambdaSeries({0: e}) for e in entries))


def test_U1_reference():
    assert build_U2n1(0) == _L(0, 1, lam() - u, 0)


def test_U3_reference():
    expected = _L(
        -u1 / 4,
        lam() + u / 2,
        lam(2) - lam().scale(u / 2) - u * u / 2 - u2 / 4,
        u1 / 4,
    )
    assert build_U2n1(1) == expected


def test_U5_reference():
    a = lam().scale(-u1 / 4) - u * u1 * Q(3, 8) - u3 / 16
    b = lam(2) + lam().scale(u / 2) + u * u * Q(3, 8) + u2 / 8
    c = (
        lam(3)
        - lam(2).scale(u / 2)
        - lam().scale((u * u + u2) / 8)
        - u4 / 16
        - u * u2 / 2
        - u1 * u1 * Q(3, 8)
        - u ** 3 * Q(3, 8)
    )
    assert build_U2n1(2) == _L(a, b, c, -a)


def test_U_blocks():
    Um = build_U(5)
    B = Um[0, 1]
    for k in range(0, 5):
        assert B[-k] == R(2 * k - 1)
    assert Um[0, 0].agrees_with(B.map_coeffs(d_x).scale(Q(-1, 2)))


def test_det_U_sign():
    det, minus_det = det_U_check(6)
    assert det.agrees_with(-lam())
    assert minus_det.agrees_with(lam())
    assert det.lowest_valid <= -5


@pytest.mark.parametrize("l", [1, 2, 3])
def test_kdv_compat(l):
    assert kdv_compat_residual(l).is_zero()


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_string_compat_constant(g):
    assert string_compat_constant(g) == -2
    res = string_compat_residual(g)
    assert res[1, 0] == LambdaSeries({0: d_x(string_lhs(g)) * -2})


@pytest.mark.parametrize("g", [2, 3, 4])
def test_lambda_s_and_s_s_compat(g):
    for l in range(1, g):
        assert lambda_s_compat_residual(g, l).is_zero()
        for m in range(l + 1, g):
            assert s_s_compat_residual(l, m).is_zero()


def test_lambda_s_compat_needs_the_string_equation():
    raw = lambda_s_compat_residual(2, 1, reduce=False)
    assert not raw.is_zero()
    # every entry lies in the differential ideal of the string equation
    for e in raw.entries():
        for _, c in e.items():
            assert not reduce_mod_string(c, 2)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_zero_curvature_report(g):
    assert zero_curvature_checks(g).ok


def test_Ag_is_the_c_combination():
    s3 = S(1)
    expected = build_U2n1(2) + build_U2n1(0).map_coeffs(lambda p: p * s3 * Q(3, 2))
    assert build_Ag(2) == expected


def test_spectral_expansion_symbolic():
    for g in (1, 2, 3):
        sd = spectral_data(g)
        assert xi_matches_times(sd, g, reduce=True)
        assert reduce_mod_string(sd.xi[Q(-1, 2)] - XVAR / 2, g) == 0


def test_spectral_expansion_needs_the_locus():
    assert not xi_matches_times(spectral_data(2), 2)


def test_I0_tilde_genus_one():
    c = c_values(1)
    assert I0_poly(c, 1, tilde=True) == lam(3) + lam().scale(XVAR)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_invariants_vs_hamiltonians_symbolic(g):
    sd = spectral_data(g)
    assert I_equals_CH(sd, g, reduce=True, factor=2)
    assert not I_equals_CH(sd, g, reduce=True, factor=1)


@pytest.mark.parametrize("seed", range(20))
def test_invariants_vs_hamiltonians_genus_four(seed):
    jet = random_physical_jet(4, random.Random(seed))
    sd = spectral_data(4, at=jet)
    assert I_equals_CH(sd, 4, factor=2)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_beta_relation(g):
    assert toeplitz_relation_check(g)
    bg, betas, Rt = beta_family(g)
    assert bg.degree() == g and bg.leading() == 1


def test_Rtilde_one():
    assert Rtilde(1) == lam() + u / 2


def test_toeplitz_forward_solve():
    c = c_values(3, {0: Q(2), 1: Q(-1, 3), 2: Q(5)})
    M = toeplitz(c, 3, 3)
    assert all(M[i][i] == 1 for i in range(3))
    rhs = [Q(1), Q(2), Q(3)]
    sol = forward_solve_unit(M, rhs)
    for i in range(3):
        assert sum((M[i][j] * sol[j] for j in range(3)), Q(0)) == rhs[i]


def test_K_genus_one():
    lam1, mu1, xv = Q(2), Q(3), Q(5)
    assert K_hamiltonian(1, 1, [lam1], [mu1], {0: xv}) == -9
    assert K_hamiltonian(1, 1, [lam1], [mu1], {0: xv}) == mu1 ** 2 - lam1 ** 3 - xv * lam1
    assert f_vector(1, {0: xv}) == [0]


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_k1_correction_vanishes(g):
    rng = random.Random(g)
    lams = [Q(v) for v in rng.sample(range(-10, 11), g)]
    mus = [Q(rng.randint(-5, 5)) for _ in range(g)]
    c = c_values(g, {l: Q(rng.randint(-4, 4)) for l in range(g)})
    assert correction_terms(g, lams, mus, c)[0] == 0


def test_two_path_K_genus_two():
    s = {0: Q(7), 1: Q(1, 3)}
    for k in (1, 2):
        a, b = K_two_path(2, k, [Q(1), Q(2)], [Q(3), Q(5)], s)
        assert a == b


def test_residue_identity_examples():
    assert correction_residue_sides(1, 1, [Q(3)], [Q(7)]) == (0, 0)
    a, b = correction_residue_sides(2, 2, [Q(1), Q(2)], [Q(1), Q(1)])
    assert a == b


@pytest.mark.parametrize("g", range(1, 7))
def test_residue_identity_sweep(g):
    rng = random.Random(100 + g)
    for _ in range(5):
        lams = [Q(v) for v in rng.sample(range(-20, 21), g)]
        mus = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(g)]
        for k in range(1, g + 1):
            a, b = correction_residue_sides(g, k, lams, mus)
            assert a == b


def test_c_values_evaluated():
    c = c_values(3, {0: Q(4), 1: Q(2), 2: Q(-1)})
    assert c == {0: 2, 1: 3, 2: Q(-5, 2), 3: 0, 4: 1}
    assert c_values(1)[0] == XVAR / 2

import pytest

from pi1.diffjet import (
    R,
    S,
    U,
    XVAR,
    c_coeff,
    d_s,
    d_x,
    g2_eliminated_ode,
    g2_ode_elimination_check,
    g2_reference_ode,
    generating_series_residual,
    kdv_flow,
    lenard,
    lenard_by_integration,
    locus_jet,
    reduce_mod_string,
    string_lhs,
)
from pi1.exact import Q, RingTagError, X, q_atom, s_atom, u_atom

u, u1, u2, u3, u4, u6 = U(0), U(1), U(2), U(3), U(4), U(6)

# Reference values for R_1..R_7, typed in by hand.
REFERENCE_R = {
    1: u / 2,
    3: u2 / 8 + u * u * Q(3, 8),
    5: u4 / 32 + u * u2 * Q(5, 16) + u1 * u1 * Q(5, 32) + u ** 3 * Q(5, 16),
    7: u6 / 128
    + u * u4 * Q(7, 64)
    + u2 * u2 * Q(21, 128)
    + u1 * u3 * Q(7, 32)
    + u * u * u2 * Q(35, 64)
    + u * u1 * u1 * Q(35, 64)
    + u ** 4 * Q(35, 128),
}


@pytest.mark.parametrize("k", [1, 3, 5, 7])
def test_reference_lenard_polynomials(k):
    assert R(k) == REFERENCE_R[k]


def test_R_minus_one_and_bad_index():
    assert R(-1) == 1
    with pytest.raises(ValueError):
        R(2)


def test_recursion_and_integration_agree():
    a, b = lenard(6), lenard_by_integration(6)
    assert a.l_max == b.l_max == 6
    for l in range(7):
        assert a[l] == b[l] == R(2 * l - 1)
        assert a.R(2 * l - 1) == a[l]


def test_generating_series_relation():
    res = generating_series_residual(7)
    assert all(not c for _, c in res.items())


def test_total_x_derivative():
    assert d_x(u * u / 2) == u * u1
    assert d_x(R(3)) == u3 / 8 + u * u1 * Q(3, 4)
    assert d_x(XVAR * u) == u + XVAR * u1


def test_d_x_refuses_darboux_atoms():
    with pytest.raises(RingTagError):
        d_x(X(q_atom(1)))


def test_first_kdv_time():
    assert d_s(1, u) == u3 / 4 + u * u1 * Q(3, 2)
    assert d_s(1, S(1)) == 1
    assert d_s(1, S(2)) == 0
    with pytest.raises(ValueError):
        d_s(0, u)


@pytest.mark.parametrize("l,m", [(1, 2), (1, 3), (2, 3)])
def test_kdv_flows_commute(l, m):
    assert d_s(l, d_s(m, u)) == d_s(m, d_s(l, u))


def test_kdv_flow_is_twice_x_derivative():
    assert kdv_flow(2) == d_x(R(5)) * 2


def test_string_lhs_low_genus():
    assert string_lhs(1) == u2 / 8 + u * u * Q(3, 8) + XVAR / 2
    two = string_lhs(2) * 2
    expected = u4 / 16 + u * u2 * Q(5, 8) + u1 * u1 * Q(5, 16) + u ** 3 * Q(5, 8) + S(1) * u * Q(3, 2) + XVAR
    assert two == expected
    assert string_lhs(3, with_x=False) + XVAR / 2 == string_lhs(3)
    with pytest.raises(ValueError):
        string_lhs(0)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_top_c_coefficients(g):
    assert c_coeff(g, g) == 0
    assert c_coeff(g, g + 1) == 1
    assert c_coeff(g, 0) == XVAR / 2


@pytest.mark.parametrize("g", [1, 2, 3])
def test_string_reduction_kills_the_ideal(g):
    E = string_lhs(g)
    assert not reduce_mod_string(E, g)
    assert not reduce_mod_string(d_x(E, 2) * u1, g)


def test_locus_jet_solves_the_string_equation():
    g = 2
    vals = {u_atom(k): Q(k + 1, 3) for k in range(2 * g)}
    vals[s_atom(0)] = Q(7)
    vals[s_atom(1)] = Q(1, 3)
    jet = locus_jet(g, vals)
    assert string_lhs(g).evaluate(jet) == 0


def test_g2_order_seven_ode():
    ok, residual = g2_ode_elimination_check()
    assert ok and not residual


def test_g2_ode_mutation_is_detected():
    mutated = g2_reference_ode() + U(0) * U(7) * Q(1, 64)  # 1/64 -> 1/32
    ok, residual = g2_ode_elimination_check(mutated)
    assert not ok and residual == U(0) * U(7) * Q(1, 64)


def test_g2_eliminated_ode_has_no_s3():
    assert s_atom(1) not in g2_eliminated_ode().atoms()

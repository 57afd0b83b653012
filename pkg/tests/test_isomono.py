import random

import pytest

from pi1.exact import ONE, Q, X, p_atom, q_atom, t_atom
from pi1.identify import random_oper_point
from pi1.isomono import (
    IrregularTimes,
    OperPoint,
    RatFunc,
    SymPoint,
    P2_coefficients,
    P2_poly,
    e_dir,
    eigen_halfinteger_check,
    gauge_action,
    gauge_G,
    geometric_hatL,
    ham_oper,
    ham_symmetric,
    hatL_symmetric,
    lagrange_Q,
    lagrange_identity_residual,
    nu_matrix,
    nu_solve,
    oper_L,
    oper_to_sym,
    oper_transform,
    sym_to_oper,
    symbolic_sym_point,
    vandermonde_Hinf,
    vandermonde_rhs,
)
from pi1.minimal import poly_from_roots
from pi1.series import LambdaSeries, lam

q1, p1, t1 = X(q_atom(1)), X(p_atom(1)), X(t_atom(1))
SEEDS = range(10)


def _point(g, seed):
    return random_oper_point(g, random.Random(seed))


def test_time_bookkeeping():
    T = IrregularTimes.from_map(2, {1: Q(5)})
    assert T.free == (5, 0)
    assert T[5] == 0 and T[7] == 2 and T[4] == 0
    assert T.r_inf == 5
    with pytest.raises(ValueError):
        IrregularTimes.from_map(2, {5: Q(1)})
    with pytest.raises(ValueError):
        IrregularTimes(1, ())


def test_P2_genus_one():
    T = IrregularTimes(1, (t1,))
    assert P2_poly(T) == -lam(3) - lam().scale(t1)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_P2_top_coefficients(g):
    T = IrregularTimes(g, tuple(Q(i + 2) for i in range(g)))
    c = P2_coefficients(T)
    assert c[2 * g + 1] == -1 and c[2 * g] == 0
    assert min(c) == g


def test_Hinf_genus_one():
    pt = OperPoint((q1,), (p1,), IrregularTimes(1, (t1,)))
    assert vandermonde_Hinf(pt) == [p1 * p1 - q1 ** 3 - t1 * q1]


def test_Hinf_genus_two_resubstitution():
    pt = OperPoint((Q(1), Q(2)), (Q(3), Q(-1, 2)), IrregularTimes(2, (Q(4), Q(-3))))
    H = vandermonde_Hinf(pt)
    rhs = vandermonde_rhs(pt)
    for qi, r in zip(pt.q, rhs):
        assert H[0] + H[1] * qi == r


def test_coincident_q_is_an_error():
    pt = OperPoint((Q(1), Q(1)), (Q(0), Q(1)), IrregularTimes(2, (Q(0), Q(0))))
    with pytest.raises(ZeroDivisionError):
        vandermonde_Hinf(pt)


@pytest.mark.parametrize("seed", SEEDS)
def test_lagrange_Q_interpolates(seed):
    pt = _point(3, seed)
    Qp = lagrange_Q(pt)
    for qi, pi in zip(pt.q, pt.p):
        assert Qp.evaluate(qi) == -pi
    assert not lagrange_identity_residual(pt)


def test_oper_L_genus_one():
    pt = OperPoint((Q(2),), (Q(3),), IrregularTimes(1, (Q(5),)))
    L = oper_L(pt)
    H = Q(9) - Q(8) - Q(10)
    expected = RatFunc(lam(3) + lam().scale(Q(5)) + H) - RatFunc(Q(3), lam() - 2)
    assert L.L21 == expected
    assert L.L22 == RatFunc(LambdaSeries({0: ONE}), lam() - 2)


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("seed", range(5))
def test_gauge_consistency(g, seed):
    pt = _point(g, seed)
    hatL = geometric_hatL(pt)
    assert oper_transform(hatL) == oper_L(pt)
    G, Ginv = gauge_G(pt)
    M = gauge_action(G, Ginv, hatL)
    L = oper_L(pt)
    assert M[0][0] == RatFunc(LambdaSeries()) and M[0][1] == RatFunc(ONE)
    assert M[1][0] == L.L21 and M[1][1] == L.L22


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("seed", range(5))
def test_geometric_equals_symmetric_builder(g, seed):
    pt = _point(g, seed)
    assert hatL_symmetric(oper_to_sym(pt)) == geometric_hatL(pt)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_symmetric_hatL_shape(g):
    sym = symbolic_sym_point(g)
    L = hatL_symmetric(sym)
    assert L[1, 0].degree() == g + 1 and L[1, 0].leading() == 1
    assert L[1, 0][g] == sym.Qk(1)
    assert L[0, 1].degree() == g and L[0, 1].leading() == 1
    assert L[0, 0] == -L[1, 1]


@pytest.mark.parametrize("seed", SEEDS)
def test_coordinate_maps_round_trip(seed):
    pt = _point(3, seed)
    sym = oper_to_sym(pt)
    assert sym_to_oper(sym, pt.q) == pt
    assert poly_from_roots(pt.q) == geometric_hatL(pt)[0, 1]


def test_sym_to_oper_rejects_wrong_roots():
    pt = _point(2, 0)
    with pytest.raises(ValueError):
        sym_to_oper(oper_to_sym(pt), (pt.q[0] + 1, pt.q[1]))


@pytest.mark.parametrize("g", [2, 3, 4])
def test_nu_matrix_shape(g):
    T = IrregularTimes(g, tuple(Q(i - 1, 3) for i in range(g)))
    M = nu_matrix(T)
    assert all(M[i][i] == 2 for i in range(g))
    assert all(M[i][i - 1] == 0 for i in range(1, g))


def test_genus_one_hamiltonian_and_equations_of_motion():
    T = IrregularTimes(1, (t1,))
    assert nu_solve(T, e_dir(1)) == [1]
    pt = OperPoint((q1,), (p1,), T)
    H = ham_oper(pt, e_dir(1))
    assert H == p1 * p1 - q1 ** 3 - t1 * q1
    assert H.diff(p_atom(1)) == 2 * p1
    assert -H.diff(q_atom(1)) == 3 * q1 * q1 + t1


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("seed", range(10))
def test_symmetric_hamiltonian_matches_oper(g, seed):
    pt = _point(g, seed)
    sym = oper_to_sym(pt)
    for k in range(1, g + 1):
        assert ham_symmetric(sym, e_dir(k)) == ham_oper(pt, e_dir(k))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_symmetric_hamiltonian_is_quadratic_in_P(g):
    sym = symbolic_sym_point(g)
    from pi1.exact import Psym_atom

    for k in range(1, g + 1):
        H = ham_symmetric(sym, e_dir(k))
        assert max(sum(e for a, e in mono if a.tag == Psym_atom(1).tag) for mono in H.terms) == 2


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("seed", range(5))
def test_eigenvalue_expansion(g, seed):
    ok, bad = eigen_halfinteger_check(_point(g, seed))
    assert ok, bad


def test_sympoint_accessors():
    sp = SymPoint((Q(1), Q(2)), (Q(3), Q(4)), IrregularTimes(2, (Q(0), Q(0))))
    assert sp.Qk(0) == 1 and sp.Qk(3) == 0 and sp.Pk(2) == 4 and sp.Pk(0) == 0

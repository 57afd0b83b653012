import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pi1.diffjet import R, U, d_x
from pi1.exact import ONE, Q, MultiPoly
from pi1.psido import (
    B_op,
    PsiOp,
    Q_op,
    commutator,
    compose,
    invert,
    kdv_flow_check,
    proj_minus,
    proj_plus,
    residue,
    residue_R,
    sqrt_Q,
    string_operator_check,
)
from pi1.series import TruncationError

u, u1, u2, u3 = U(0), U(1), U(2), U(3)
D = PsiOp.D


def test_inverse_derivative():
    assert compose(D(-1), D(1)) == PsiOp({0: ONE})
    assert compose(D(1), D(-1)) == PsiOp({0: ONE})


def test_moving_a_function_past_the_inverse_derivative():
    op = compose(D(-1), PsiOp.mult(u), -4)
    assert op[-1] == u
    assert op[-2] == -u1
    assert op[-3] == u2
    assert op[-4] == -u3


def _random_op(rng: random.Random) -> PsiOp:
    coeffs = {}
    for order in range(2, -3, -1):
        c = MultiPoly()
        for k in range(3):
            if rng.random() < 0.4:
                c = c + U(k) * Q(rng.randint(-3, 3), rng.randint(1, 2))
        if rng.random() < 0.5:
            c = c + Q(rng.randint(-2, 2))
        coeffs[order] = c
    return PsiOp(coeffs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b, c = (_random_op(rng) for _ in range(3))
    low = -6
    left = compose(compose(a, b, low - 6), c, low)
    right = compose(a, compose(b, c, low - 6), low)
    assert left.agrees_with(right)


def test_projections():
    op = D(1) + PsiOp({-1: u})
    assert proj_plus(op) == D(1)
    assert proj_minus(op) == PsiOp({-1: u})
    rng = random.Random(5)
    for _ in range(10):
        a = _random_op(rng)
        assert proj_plus(a) + proj_minus(a) == a


def test_inverse():
    assert invert(PsiOp({0: ONE}), 4).agrees_with(PsiOp({0: ONE}))
    a = PsiOp({0: ONE, -1: u})
    inv = invert(a, 3)
    assert inv[-1] == -u
    assert inv[-2] == u * u  # u D^-1 u D^-1 = u^2 D^-2 + lower
    back = compose(a, inv, -3)
    assert back.agrees_with(PsiOp({0: ONE}, -3))
    twice = invert(invert(a, 6), 6)
    assert twice.agrees_with(a)


def test_inverse_rejects_positive_orders():
    with pytest.raises(ValueError):
        invert(D(1), 3)


def test_square_root_first_terms():
    r = sqrt_Q(4)
    assert r[1] == 1
    assert r[0] == 0
    assert r[-1] == u / 2
    assert r[-2] == -u1 / 4
    assert r[-3] == (u2 - u * u) / 8
    with pytest.raises(TruncationError):
        r[-5]


def test_square_root_squares_back():
    r = sqrt_Q(8)
    assert compose(r, r, -7).agrees_with(Q_op().truncate(-7))


def test_residue_of_half_power_is_R1():
    assert residue(sqrt_Q(2)) == u / 2 == R(1)


@pytest.mark.parametrize("l", range(6))
def test_residues_of_half_powers_are_lenard(l):
    assert residue_R(l) == R(2 * l + 1)


def test_B3_and_kdv():
    assert B_op(3) == PsiOp({3: ONE, 1: u * Q(3, 2), 0: u1 * Q(3, 4)})
    assert commutator(B_op(3), Q_op()) == PsiOp({0: u3 / 4 + u * u1 * Q(3, 2)})
    assert commutator(B_op(1), Q_op()) == PsiOp({0: u1})
    with pytest.raises(ValueError):
        B_op(2)


@pytest.mark.parametrize("l", range(4))
def test_kdv_flows_and_B_recursion(l):
    ok, parts = kdv_flow_check(l)
    assert ok
    assert parts["commutator"] == parts["flow"]


def test_string_operator_genus_one_explicit():
    ok, residual = string_operator_check(1)
    assert ok and not residual.coeffs
    from pi1.psido import P_operator

    lhs = commutator(Q_op(), P_operator(1)) - PsiOp({0: ONE})
    from pi1.diffjet import XVAR

    assert lhs == PsiOp({0: d_x(u2 / 8 + u * u * Q(3, 8) + XVAR / 2) * -2})
    assert set(lhs.coeffs) == {0}


@pytest.mark.parametrize("g", [2, 3])
def test_string_operator(g):
    ok, _ = string_operator_check(g)
    assert ok

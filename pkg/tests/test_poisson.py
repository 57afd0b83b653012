import random

import pytest

from pi1.exact import MultiPoly, Q, X, moduli_atom
from pi1.poisson import (
    LAM,
    MU,
    MumfordPhase,
    ad_flow_check,
    ad_flow_sides,
    antisymmetry_leibniz_check,
    canonical_brackets,
    canonical_check,
    casimir_check,
    commutator_table,
    derive_coeff_brackets,
    divided_difference,
    gauge_covariance_check,
    jacobi_check,
    lambda_gradient,
    commutator_table_check,
    minus_det,
    random_physical_jet,
    random_root_configuration,
    scalar_formulas,
    scalar_table_check,
    tensor_vs_scalar_check,
)


def test_divided_difference():
    # (z^3 - w^3)/(z - w)
    assert divided_difference({3: MultiPoly.const(1)}) == X(LAM, 2) + X(LAM) * X(MU) + X(MU, 2)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_b_block_vanishes(g):
    br = derive_coeff_brackets(g)
    for i in range(g):
        for j in range(g):
            assert not br[(moduli_atom("b", i), moduli_atom("b", j))]
            assert not br[(moduli_atom("a", i), moduli_atom("a", j))]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_two_variable_formulas_reconstruct(g):
    br = derive_coeff_brackets(g)
    ph = MumfordPhase(g)
    a_l, a_m = ph.poly("a", LAM), ph.poly("a", MU)
    assert br.reconstruct("b", "c") == divided_difference(ph.coeffs("a")).scale(2)
    assert br.reconstruct("c", "c") == (a_l - a_m).scale(-2)
    assert scalar_table_check(g)


def test_genus_one_table_entries():
    br = derive_coeff_brackets(1)
    a0, b0, c0, c1 = (moduli_atom(r, i) for r, i in (("a", 0), ("b", 0), ("c", 0), ("c", 1)))
    assert br[(a0, b0)] == 1
    assert br[(b0, c0)] == 0 and br[(b0, c1)] == 0
    assert br[(a0, c0)] == X(b0) - X(c1)
    assert br[(c0, c1)] == 0  # a(lam) is constant at genus one
    br2 = derive_coeff_brackets(2)
    assert br2[(c0, c1)] == 2 * X(moduli_atom("a", 1))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_tensor_definition_matches_table(g):
    r = tensor_vs_scalar_check(g)
    assert r["ok"], r["mismatches"]
    assert ("3", "3") not in r["components"]


def test_commutator_table():
    assert commutator_table_check() == []
    t = commutator_table()
    assert t[("1x+", "Delta")] == {("-", "3"): MultiPoly.const(1)}


def test_canonical_genus_two_at_roots_one_two():
    br = derive_coeff_brackets(2)
    rng = random.Random(0)
    cfg = random_root_configuration(2, rng)
    object.__setattr__(cfg, "roots", (Q(1), Q(2)))
    cfg.values[moduli_atom("b", 0)] = Q(2)
    cfg.values[moduli_atom("b", 1)] = Q(-3)
    m = canonical_brackets(br, cfg)
    assert m["lam_mu"] == [[1, 0], [0, 1]]
    assert m["lam_lam"] == [[0, 0], [0, 0]]
    assert m["mu_mu"] == [[0, 0], [0, 0]]


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_canonical_sweep(g):
    assert canonical_check(g, range(10))["ok"]


def test_repeated_root_is_rejected():
    cfg = random_root_configuration(2, random.Random(1))
    object.__setattr__(cfg, "roots", (Q(1), Q(1)))
    cfg.values[moduli_atom("b", 0)] = Q(1)
    cfg.values[moduli_atom("b", 1)] = Q(-2)
    with pytest.raises(ZeroDivisionError):
        lambda_gradient(cfg, 0)


@pytest.mark.parametrize("g", [1, 2])
def test_casimirs_symbolic(g):
    assert casimir_check(g, symbolic=True)


@pytest.mark.parametrize("g", [3, 4])
def test_casimirs_sampled(g):
    assert casimir_check(g, symbolic=False, seeds=range(3))


def test_minus_det_leading_term():
    h = minus_det(2).collect(LAM)
    assert h[5] == 1
    assert max(h) == 5


@pytest.mark.parametrize("g", [1, 2, 3])
def test_ad_flow_toeplitz_form(g):
    assert ad_flow_check(g, seed=g, literal=False)["ok"]


def test_ad_flow_single_generator_breaks_beyond_first_flow():
    r = ad_flow_check(3, seed=3, literal=True)
    assert not r["ok"]
    assert 0 not in r["failing_l"]


def test_ad_flow_single_generator_holds_for_first_flow():
    jet = random_physical_jet(2, random.Random(7))
    a, b = ad_flow_sides(2, 0, jet, literal=True)
    assert a == b


@pytest.mark.parametrize("g", [1, 2, 3])
def test_jacobi(g):
    assert jacobi_check(g, trials=10, seed=g)


@pytest.mark.parametrize("g", [1, 2])
def test_antisymmetry_and_leibniz(g):
    assert antisymmetry_leibniz_check(g, trials=4, seed=g)


def test_gauge_covariance():
    assert gauge_covariance_check(1)


def test_scalar_formula_keys():
    assert set(scalar_formulas(2)) == {("a", "a"), ("b", "b"), ("a", "b"), ("a", "c"), ("b", "c"), ("c", "c")}

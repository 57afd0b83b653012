"""Differential polynomials in u, the x- and KdV-time derivations, Lenard polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .exact import (
    ONE,
    STIME,
    UJET,
    MultiPoly,
    Q,
    RingTagError,
    X,
    s_atom,
    u_atom,
)
from .series import LambdaSeries

DiffPoly = MultiPoly


def U(k: int = 0) -> MultiPoly:
    """u^{(k)} as a polynomial."""
    return X(u_atom(k))


def S(l: int) -> MultiPoly:
    """s_{2l+1}; S(0) is x."""
    return X(s_atom(l))


XVAR = S(0)


def check_jet(p: MultiPoly) -> MultiPoly:
    if p.ring == 2:
        raise RingTagError("differential polynomial contains Darboux atoms")
    return p


def _dx_rule(a):
    if a.tag == UJET:
        return X(u_atom(a.index + 1))
    if a.tag == STIME:
        return ONE if a.index == 0 else None
    raise RingTagError(f"d_x is undefined on atom {a}")


def d_x(p: DiffPoly, times: int = 1) -> DiffPoly:
    for _ in range(times):
        p = p.derive(_dx_rule)
    return p


@lru_cache(maxsize=None)
def _lenard_entry(L: int) -> DiffPoly:
    """R_{2L-1} from the coefficient recursion of the generating-series relation.

    With B = sum_L R_L lambda^{-L}, matching lambda^{-L+1} in
    (1/4)B'^2 + ((lambda-u)B - B''/2)B = lambda gives
    2R_L = -sum_{i+j=L, 0<i,j<L} R_i R_j + sum_{i+j=L-1} (u R_i R_j + R_i'' R_j/2 - R_i' R_j'/4).
    """
    if L == 0:
        return MultiPoly.const(1)
    l = L - 1
    u = U(0)
    acc = MultiPoly()
    for i in range(1, L):
        acc = acc - _lenard_entry(i) * _lenard_entry(L - i)
    quad = MultiPoly()
    grad = MultiPoly()
    for i in range(0, l + 1):
        Ri, Rj = _lenard_entry(i), _lenard_entry(l - i)
        quad = quad + Ri * Rj
        grad = grad + d_x(Ri, 2) * Rj * Q(1, 2) - d_x(Ri) * d_x(Rj) * Q(1, 4)
    acc = acc + u * quad + grad
    return acc * Q(1, 2)


def R(k: int) -> DiffPoly:
    """Lenard polynomial R_k for odd k >= -1."""
    if k < -1 or k % 2 == 0:
        raise ValueError("Lenard polynomials carry odd indices >= -1")
    return _lenard_entry((k + 1) // 2)


@dataclass(frozen=True)
class LenardTable:
    """entries[l] = R_{2l-1}, l = 0..l_max."""

    entries: tuple

    def __getitem__(self, l: int) -> DiffPoly:
        return self.entries[l]

    def R(self, k: int) -> DiffPoly:
        return self.entries[(k + 1) // 2]

    @property
    def l_max(self) -> int:
        return len(self.entries) - 1


def lenard(l_max: int) -> LenardTable:
    return LenardTable(tuple(_lenard_entry(l) for l in range(l_max + 1)))


def integrate_x(f: DiffPoly) -> DiffPoly:
    """Antiderivative with no u-free part of an exact x-derivative in u-jets.

    Uses the homotopy formula F = sum_d (1/d) sum_{i>=1} sum_{j<i} u^{(j)} (-D)^{i-1-j} df_d/du^{(i)}
    on each homogeneous component f_d; the result is checked by differentiating back.
    """
    if any(a.tag != UJET for a in f.atoms()):
        raise ValueError("integrate_x handles autonomous u-jet polynomials only")
    by_degree: dict = {}
    for m, c in f.terms.items():
        d = sum(e for _, e in m)
        by_degree.setdefault(d, {})[m] = c
    F = MultiPoly()
    for d, terms in by_degree.items():
        if d == 0:
            raise ValueError("constant term is not an x-derivative")
        fd = MultiPoly(terms)
        top = max(a.index for a in fd.atoms())
        part = MultiPoly()
        for i in range(1, top + 1):
            partial = fd.diff(u_atom(i))
            if not partial:
                continue
            for j in range(i):
                k = i - 1 - j
                term = d_x(partial, k)
                if k % 2:
                    term = -term
                part = part + U(j) * term
        F = F + part * Q(1, d)
    if d_x(F) != f:
        raise ValueError("input is not an exact x-derivative")
    return F


@lru_cache(maxsize=None)
def _lenard_integrated(L: int) -> DiffPoly:
    """R_{2L-1} from R'_{2l+1} = (D^3/4 + u D + u'/2) R_{2l-1}, zero integration constant."""
    if L == 0:
        return MultiPoly.const(1)
    prev = _lenard_integrated(L - 1)
    rhs = d_x(prev, 3) * Q(1, 4) + U(0) * d_x(prev) + U(1) * prev * Q(1, 2)
    return integrate_x(rhs)


def lenard_by_integration(l_max: int) -> LenardTable:
    return LenardTable(tuple(_lenard_integrated(l) for l in range(l_max + 1)))


def generating_series_residual(l_max: int) -> LambdaSeries:
    """(1/4)B_x^2 + ((lambda-u)B - B_xx/2)B - lambda, valid down to lambda^{-l_max+1}."""
    B = LambdaSeries({-l: _lenard_entry(l) for l in range(l_max + 1)}, lowest=-l_max)
    Bx = B.map_coeffs(d_x)
    Bxx = Bx.map_coeffs(d_x)
    lam = LambdaSeries({1: ONE})
    u = LambdaSeries({0: U(0)})
    total = Bx * Bx * Q(1, 4) + ((lam - u) * B - Bxx * Q(1, 2)) * B - lam
    return total


def kdv_flow(l: int) -> DiffPoly:
    """du/ds_{2l+1} = 2 d_x R_{2l+1}."""
    return d_x(R(2 * l + 1)) * 2


def d_s(l: int, p: DiffPoly) -> DiffPoly:
    """Derivation d/ds_{2l+1} for l >= 1 (u-jets follow the KdV flow)."""
    if l < 1:
        raise ValueError("d_s needs l >= 1; use d_x for s_1 = x")
    flow = kdv_flow(l)
    jets: dict = {}

    def rule(a):
        if a.tag == UJET:
            if a.index not in jets:
                jets[a.index] = d_x(flow, a.index)
            return jets[a.index]
        if a.tag == STIME:
            return ONE if a.index == l else None
        raise RingTagError(f"d_s is undefined on atom {a}")

    return p.derive(rule)


def c_coeff(g: int, j: int) -> MultiPoly:
    """c_{2j-1}(s) for j = 0..g+1 (zero outside that range)."""
    if j < 0 or j > g + 1:
        return MultiPoly()
    if j == g + 1:
        return MultiPoly.const(1)
    if j == g:
        return MultiPoly()
    return S(j) * Q(2 * j + 1, 2)


def c_coeffs(g: int) -> dict:
    """{j: c_{2j-1}} for j = 0..g+1."""
    return {j: c_coeff(g, j) for j in range(g + 2)}


def string_lhs(g: int, with_x: bool = True) -> DiffPoly:
    """R_{2g+1} + sum_{l=1}^{g-1} c_{2l-1} R_{2l-1} (+ x/2)."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    total = R(2 * g + 1)
    for l in range(1, g):
        total = total + c_coeff(g, l) * R(2 * l - 1)
    if with_x:
        total = total + XVAR * Q(1, 2)
    return total


def jet_order(p: DiffPoly) -> int:
    return max((a.index for a in p.atoms() if a.tag == UJET), default=-1)


@lru_cache(maxsize=None)
def _string_rules(g: int, top: int) -> dict:
    """u^{(k)} for 2g <= k <= top written through lower jets on the string locus."""
    Sg = string_lhs(g)
    lead_atom = u_atom(2 * g)
    parts = Sg.collect(lead_atom)
    if set(parts) - {0, 1} or parts[1].is_constant() is False:
        raise ValueError("string equation is not linear with constant leading coefficient")
    lead = parts[1].to_rational()
    rules = {2 * g: parts.get(0, MultiPoly()) * (-1 / lead)}
    for k in range(2 * g + 1, top + 1):
        nxt = d_x(rules[k - 1]).subs({lead_atom: rules[2 * g]})
        rules[k] = nxt
    return rules


def reduce_mod_string(p: DiffPoly, g: int) -> DiffPoly:
    """Normal form modulo the differential ideal of the genus-g string equation."""
    top = jet_order(p)
    if top < 2 * g:
        return p
    rules = _string_rules(g, top)
    return p.subs({u_atom(k): rules[k] for k in range(2 * g, top + 1)})


def locus_jet(g: int, free: Mapping) -> dict:
    """Complete a rational assignment of u^{(0..2g-1)}, x and s to a string-locus jet.

    ``free`` maps atoms to rationals; u^{(2g)} is solved from the string equation.
    """
    vals = {a: Q(v) for a, v in free.items()}
    rule = _string_rules(g, 2 * g)[2 * g]
    vals[u_atom(2 * g)] = rule.evaluate(vals)
    return vals


def g2_reference_ode() -> DiffPoly:
    """The order-7 ODE for g=2, entered term by term as reference data."""
    u, u1, u2, u3, u4, u5, u7 = U(0), U(1), U(2), U(3), U(4), U(5), U(7)
    ut = u3 * Q(1, 4) + u * u1 * Q(3, 2)
    expr = (
        u * u7 * Q(1, 64)
        + u * (u3 * u2 * 10 + u1 * u4 * 5 + u * u5) * Q(3, 32)
        + u * u2 * ut * Q(5, 8)
        + u ** 2 * (u5 * Q(1, 4) + u * u3 * Q(3, 2) + u1 * u2 * Q(9, 2)) * Q(5, 8)
        + u * u1 * (u4 * Q(1, 4) + u1 ** 2 * Q(3, 2) + u * u2 * Q(3, 2)) * Q(5, 8)
        + u ** 3 * ut * Q(15, 8)
        + u ** 2 * Q(3, 2)
        - (u4 * Q(1, 16) + u * u2 * Q(5, 8) + u1 ** 2 * Q(5, 16) + u ** 3 * Q(5, 8) + XVAR) * ut
    )
    return expr


def g2_eliminated_ode() -> DiffPoly:
    """u * d_{s_3}(E) - u_{s_3} * E with E = 2*string_lhs(2): the s_3-free consequence."""
    E = string_lhs(2) * 2
    return U(0) * d_s(1, E) - kdv_flow(1) * E


def g2_ode_elimination_check(reference: DiffPoly | None = None) -> tuple:
    """(ok, residual) comparing the reference ODE with the computed elimination."""
    target = g2_reference_ode() if reference is None else reference
    residual = target - g2_eliminated_ode()
    return (not residual, residual)

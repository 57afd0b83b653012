"""Isomonodromic side: oper gauge, geometric Lax matrix, Darboux coordinates, Hamiltonians.

Everything lives under the canonical trivial-time choice: even times vanish,
t_{2g+3} = 2 and t_{2g+1} = 0, so only t_1, t_3, ..., t_{2g-1} are free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact import ONE, ZERO, MultiPoly, Q, solve_linear
from .laxmat import LaxMat
from .minimal import lagrange_poly, node_denominators, poly_from_roots
from .series import LambdaSeries, poly_divmod
from .symfunc import SymBasisVector, e_from_roots, h_from_e, powersum_from_e


@dataclass(frozen=True)
class IrregularTimes:
    """Free odd times t_1..t_{2g-1}; everything else fixed by the canonical choice."""

    g: int
    free: tuple  # (t_1, t_3, ..., t_{2g-1})

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("genus must be >= 1")
        if len(self.free) != self.g:
            raise ValueError(f"expected {self.g} free times, got {len(self.free)}")

    @classmethod
    def from_map(cls, g: int, t: Mapping) -> "IrregularTimes":
        """From {odd k: t_k}; missing free times default to 0."""
        for k in t:
            if k % 2 == 0 or k < 1 or k > 2 * g - 1:
                raise ValueError(f"t_{k} is not a free time at genus {g}")
        return cls(g, tuple(t.get(2 * i + 1, ZERO) for i in range(g)))

    def __getitem__(self, k: int):
        if k % 2 == 0 or k < 1:
            return ZERO
        if k <= 2 * self.g - 1:
            return self.free[(k - 1) // 2]
        if k == 2 * self.g + 1:
            return ZERO
        if k == 2 * self.g + 3:
            return Q(2)
        return ZERO

    @property
    def r_inf(self) -> int:
        return self.g + 3

    def with_t1(self, t1) -> "IrregularTimes":
        return IrregularTimes(self.g, (t1,) + self.free[1:])


@dataclass(frozen=True)
class OperPoint:
    q: tuple
    p: tuple
    times: IrregularTimes

    @property
    def g(self) -> int:
        return self.times.g


@dataclass(frozen=True)
class SymPoint:
    Q: tuple
    P: tuple
    times: IrregularTimes

    @property
    def g(self) -> int:
        return self.times.g

    def Qk(self, k: int):
        if k == 0:
            return ONE
        if 1 <= k <= self.g:
            return self.Q[k - 1]
        return ZERO

    def Pk(self, k: int):
        return self.P[k - 1] if 1 <= k <= self.g else ZERO


# -- P_2 ----------------------------------------------------------------------


def P2_coefficients(times: IrregularTimes) -> dict:
    """{k: P^{(2)}_{inf,k}} for k = g..2g+1."""
    g, t = times.g, times
    coeffs = {2 * g + 1: -ONE, 2 * g: ZERO}
    for k in range(g + 1, 2 * g):
        acc = t[2 * k - 2 * g + 1]
        for m in range(k - g + 3, g + 1):
            acc = acc + t[2 * m - 1] * t[2 * k - 2 * m + 5] * Q(1, 4)
        coeffs[k] = -acc
    acc = t[1]
    for m in range(3, g + 1):
        acc = acc + t[2 * m - 1] * t[2 * g - 2 * m + 5] * Q(1, 4)
    coeffs[g] = -acc
    return coeffs


def P2_poly(times: IrregularTimes) -> LambdaSeries:
    return LambdaSeries(P2_coefficients(times))


def _horner(coeffs: Mapping, x, zero=ZERO):
    top = max(coeffs)
    acc = zero + coeffs.get(top, ZERO)
    for k in range(top - 1, -1, -1):
        acc = acc * x + coeffs.get(k, ZERO)
    return acc


# -- Vandermonde Hamiltonians and the oper gauge -------------------------------


def vandermonde_rhs(point: OperPoint) -> list:
    """p_i^2 + P_2(q_i) + sum_{j != i} (p_j - p_i)/(q_i - q_j)."""
    q, p = point.q, point.p
    P2 = P2_coefficients(point.times)
    out = []
    for i in range(point.g):
        acc = p[i] * p[i] + _horner(P2, q[i])
        for j in range(point.g):
            if j != i:
                if q[i] == q[j]:
                    raise ZeroDivisionError("coincident apparent singularities")
                acc = acc + (p[j] - p[i]) / (q[i] - q[j])
        out.append(acc)
    return out


def vandermonde_Hinf(point: OperPoint) -> list:
    """H_{inf,0..g-1} solving (V_inf)^t H = rhs, via the Lagrange basis."""
    node_denominators(point.q)
    poly = lagrange_poly(point.q, vandermonde_rhs(point))
    return [poly[k] for k in range(point.g)]


class RatFunc:
    """num/den with exact polynomial parts; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num if isinstance(num, LambdaSeries) else LambdaSeries({0: num})
        self.den = LambdaSeries({0: ONE}) if den is None else den

    def __add__(self, o: "RatFunc") -> "RatFunc":
        o = _rf(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, o) -> "RatFunc":
        return self + (-_rf(o))

    def __mul__(self, o) -> "RatFunc":
        o = _rf(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    def inverse(self) -> "RatFunc":
        return RatFunc(self.den, self.num)

    def d_lambda(self) -> "RatFunc":
        return RatFunc(self.num.d_lambda() * self.den - self.num * self.den.d_lambda(), self.den * self.den)

    def __eq__(self, o) -> bool:
        o = _rf(o)
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def as_poly(self) -> LambdaSeries:
        """The polynomial value; raises if the division is not exact."""
        quot, rem = poly_divmod(self.num, self.den) if self.den.degree() > 0 else (self.num.scale(1 / self.den[0]), LambdaSeries())
        if rem:
            raise ArithmeticError("rational function is not a polynomial")
        return quot

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"

    __repr__ = __str__


def _rf(x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc(x)


def lagrange_Q(point: OperPoint) -> LambdaSeries:
    """Q(lambda) = -sum p_i prod_{j != i}(lambda - q_j)/(q_i - q_j), so Q(q_i) = -p_i."""
    return lagrange_poly(point.q, [-pi for pi in point.p])


@dataclass
class OperLax:
    """Companion form (0 1; L21 L22) with rational-function entries."""

    L21: RatFunc
    L22: RatFunc

    def __eq__(self, o) -> bool:
        return self.L21 == o.L21 and self.L22 == o.L22


def oper_L(point: OperPoint) -> OperLax:
    Pi = poly_from_roots(point.q)
    H = LambdaSeries({k: h for k, h in enumerate(vandermonde_Hinf(point))})
    poles = RatFunc(LambdaSeries())
    for j, qj in enumerate(point.q):
        poles = poles + RatFunc(point.p[j], LambdaSeries({1: ONE, 0: -qj}))
    L21 = RatFunc(-P2_poly(point.times) + H) - poles
    L22 = RatFunc(Pi.d_lambda(), Pi)
    return OperLax(L21, L22)


def gauge_G(point: OperPoint) -> tuple:
    """(G, G^{-1}) as 2x2 nested tuples of RatFunc."""
    Qp = lagrange_Q(point)
    Pi = poly_from_roots(point.q)
    one, zero = RatFunc(ONE), RatFunc(LambdaSeries())
    G = ((one, zero), (RatFunc(-Qp), RatFunc(Pi)))
    Ginv = ((one, zero), (RatFunc(Qp, Pi), RatFunc(LambdaSeries({0: ONE}), Pi)))
    return G, Ginv


def oper_transform(hatL: LaxMat) -> OperLax:
    """Companion entries from a geometric Lax matrix through G = (1 0; L11 L12)."""
    L11 = RatFunc(hatL[0, 0])
    det = RatFunc(hatL.det())
    tr = RatFunc(hatL.trace())
    log12 = RatFunc(hatL[0, 1].d_lambda(), hatL[0, 1])
    L21 = -det + L11.d_lambda() - L11 * log12
    L22 = tr + log12
    return OperLax(L21, L22)


def gauge_action(G, Ginv, hatL: LaxMat) -> tuple:
    """G hatL G^{-1} + (d_lambda G) G^{-1}, entrywise RatFunc."""
    M = [[RatFunc(hatL[i, j]) for j in range(2)] for i in range(2)]

    def mm(A, B):
        return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]

    dG = [[G[i][j].d_lambda() for j in range(2)] for i in range(2)]
    a = mm(mm(G, M), Ginv)
    b = mm(dG, Ginv)
    return tuple(tuple(a[i][j] + b[i][j] for j in range(2)) for i in range(2))


# -- geometric Lax matrix ----------------------------------------------------------


def geometric_hatL(point: OperPoint) -> LaxMat:
    """hatL in oper Darboux coordinates; the (2,1) entry is divided out exactly."""
    Qp = lagrange_Q(point)
    Pi = poly_from_roots(point.q)
    L = oper_L(point)
    ratio = RatFunc(Qp, Pi)
    L21 = ratio.d_lambda() + L.L21 * RatFunc(LambdaSeries({0: ONE}), Pi) - RatFunc(Qp * Qp, Pi)
    return LaxMat(-Qp, Pi, L21.as_poly(), Qp)


def _sym_h(sym: SymPoint, k_max: int) -> SymBasisVector:
    e = SymBasisVector("e", sym.g, (ONE,) + tuple(sym.Q))
    return h_from_e(e, k_max)


def _PQ_sum(sym: SymPoint, j: int):
    """sum_{i=j+1}^g P_i Q_{i-j-1}."""
    acc = ZERO
    for i in range(j + 1, sym.g + 1):
        acc = acc + sym.Pk(i) * sym.Qk(i - j - 1)
    return acc


def symmetric_Q_poly(sym: SymPoint) -> LambdaSeries:
    """sum_j (-1)^{j-1} (sum_{i>j} P_i Q_{i-j-1}) lambda^j."""
    return LambdaSeries({j: _PQ_sum(sym, j) * (-1 if j % 2 == 0 else 1) for j in range(sym.g)})


def hatL_symmetric(sym: SymPoint) -> LaxMat:
    g = sym.g
    Qp = symmetric_Q_poly(sym)
    L12 = LambdaSeries({m: sym.Qk(g - m) * (1 if (g - m) % 2 == 0 else -1) for m in range(g + 1)})
    h = _sym_h(sym, g + 1)
    P2 = P2_coefficients(sym.times)
    L21: dict = {}
    for i in range(g + 2):
        acc = ZERO
        for j in range(g + i, 2 * g + 2):
            acc = acc + P2.get(j, ZERO) * h[j - g - i]
        L21[i] = -acc
    for i in range(g - 1):
        acc = ZERO
        for j1 in range(i + 1, g):
            for j2 in range(g + i - j1, g):
                term = _PQ_sum(sym, j1) * _PQ_sum(sym, j2) * h[j1 + j2 - g - i]
                acc = acc + (term if (j1 + j2) % 2 == 0 else -term)
        L21[i] = L21[i] - acc
    return LaxMat(-Qp, L12, LambdaSeries(L21), Qp)


def normalization_X(hatL: LaxMat, g: int):
    """The lambda^g coefficient of hatL_{2,1}."""
    return hatL[1, 0][g]


# -- coordinate maps -------------------------------------------------------------


def _e_without(q: Sequence, i: int) -> SymBasisVector:
    return e_from_roots([x for j, x in enumerate(q) if j != i])


def dual_matrix(q: Sequence) -> list:
    """M[i][k-1] = d e_k / d q_i = e_{k-1}(q without q_i)."""
    g = len(q)
    return [[_e_without(q, i)[k - 1] for k in range(1, g + 1)] for i in range(g)]


def oper_to_sym(point: OperPoint) -> SymPoint:
    e = e_from_roots(point.q)
    Qs = tuple(e[k] for k in range(1, point.g + 1))
    Ps = tuple(solve_linear(dual_matrix(point.q), point.p))
    return SymPoint(Qs, Ps, point.times)


def sym_to_oper(sym: SymPoint, roots: Sequence) -> OperPoint:
    """Inverse map given the roots q of prod(lambda - q_j) (checked against Q)."""
    e = e_from_roots(roots)
    if any(e[k] != sym.Qk(k) for k in range(1, sym.g + 1)):
        raise ValueError("roots do not match the symmetric coordinates Q")
    M = dual_matrix(roots)
    p = tuple(sum((M[i][k] * sym.P[k] for k in range(sym.g)), ZERO) for i in range(sym.g))
    return OperPoint(tuple(roots), p, sym.times)


def lagrange_identity_residual(point: OperPoint) -> LambdaSeries:
    """Lagrange Q(lambda) minus its symmetric-coordinate expansion."""
    return lagrange_Q(point) - symmetric_Q_poly(oper_to_sym(point))


# -- Hamiltonians -----------------------------------------------------------------


def nu_matrix(times: IrregularTimes) -> list:
    """M_ij = t_{2g+3-2(i-j)} for j <= i: diagonal 2, first subdiagonal 0."""
    g = times.g
    return [[times[2 * g + 3 - 2 * (i - j)] if j <= i else ZERO for j in range(g)] for i in range(g)]


def direction_rhs(g: int, alpha: Mapping) -> list:
    """(2 alpha_{2g-1}/(2g-1), ..., 2 alpha_1/1) from {odd k: alpha_k}."""
    return [Q(2) * alpha.get(2 * g + 1 - 2 * i, ZERO) / (2 * g + 1 - 2 * i) for i in range(1, g + 1)]


def e_dir(k: int) -> dict:
    """The basis direction e_{2k-1}."""
    return {2 * k - 1: ONE}


def nu_solve(times: IrregularTimes, alpha: Mapping) -> list:
    """Forward substitution in the lower triangular nu-system."""
    M = nu_matrix(times)
    rhs = direction_rhs(times.g, alpha)
    out = []
    for i, b in enumerate(rhs):
        acc = b
        for j in range(i):
            if M[i][j]:
                acc = acc - M[i][j] * out[j]
        out.append(acc / M[i][i])
    return out


def ham_oper(point: OperPoint, alpha: Mapping):
    """Ham^(alpha) = sum_k nu_{k+1} H_{inf,k}."""
    nu = nu_solve(point.times, alpha)
    H = vandermonde_Hinf(point)
    return sum((n * h for n, h in zip(nu, H)), ZERO)


def ham_symmetric(sym: SymPoint, alpha: Mapping):
    """The (Q,P) polynomial Hamiltonian, transcribed term by term."""
    g = sym.g
    nu = nu_solve(sym.times, alpha)
    e = SymBasisVector("e", g, (ONE,) + tuple(sym.Q))
    h = h_from_e(e, 2 * g + 2)
    S = powersum_from_e(e, g)
    P2 = P2_coefficients(sym.times)
    Qk, Pk = sym.Qk, sym.Pk
    total = ZERO
    for i in range(1, g + 1):
        lin = ZERO
        for k in range(i + 1, g + 1):
            term = Pk(k) * Qk(k - 1 - i) * (g - i)
            lin = lin + (term if i % 2 == 0 else -term)
            for m in range(i + 1, k):
                t2 = Pk(k) * Qk(k - 1 - m) * S[m - i]
                lin = lin + (t2 if m % 2 == 0 else -t2)
        quad = ZERO
        for k1 in range(1, g + 1):
            for k2 in range(1, g + 1):
                br = ZERO
                for r1 in range(max(0, i - k2), min(k1 - 1, i - 1) + 1):
                    br = br + Qk(k1 - 1 - r1) * Qk(k2 - i + r1)
                if (i - 1) % 2:
                    br = -br
                for r1 in range(k1):
                    for r2 in range(k2):
                        if r1 + r2 < g:
                            continue
                        inner = ZERO
                        for m in range(i, g + 1):
                            idx = r1 + r2 + m - i - g + 1
                            t3 = Qk(g - m) * (h[idx] if idx >= 0 else ZERO)
                            inner = inner + (t3 if (g - m) % 2 == 0 else -t3)
                        t4 = Qk(k1 - 1 - r1) * Qk(k2 - 1 - r2) * inner
                        br = br + (t4 if (r1 + r2) % 2 == 0 else -t4)
                quad = quad + Pk(k1) * Pk(k2) * br
        pot = ZERO
        for r in range(g, 2 * g + 2):
            for m in range(i, g + 1):
                idx = r + m - i - g + 1
                t5 = P2.get(r, ZERO) * Qk(g - m) * (h[idx] if idx >= 0 else ZERO)
                pot = pot + (t5 if (g - m) % 2 == 0 else -t5)
        total = total + nu[i - 1] * (quad + pot - lin)
    return total


# -- eigenvalue expansion ------------------------------------------------------------


def eigen_expansion(hatL: LaxMat, g: int) -> LambdaSeries:
    """sqrt(-det hatL) with leading +lambda^{g+1/2}, down to lambda^{-3/2}."""
    return (-hatL.det()).sqrt(Q(-3, 2))


def eigen_halfinteger_check(point: OperPoint) -> tuple:
    """Leading coefficient 1 and (1/2) t_{2k+1} at lambda^{k-1/2} (k < g); 0 at lambda^{g-1/2}."""
    g = point.g
    y = eigen_expansion(geometric_hatL(point), g)
    expected = {Q(2 * g + 1, 2): ONE, Q(2 * g - 1, 2): ZERO}
    for k in range(g):
        expected[Q(2 * k - 1, 2)] = point.times[2 * k + 1] * Q(1, 2)
    bad = {e: (y[e], v) for e, v in expected.items() if y[e] != v}
    integer_terms = {e: c for e, c in y.items() if e.denominator == 1}
    return (not bad and not integer_terms, bad)


# -- LaTeX ---------------------------------------------------------------------------


def latex_oper_L(point: OperPoint) -> str:
    L = oper_L(point)
    return (
        "L_{2,1}(\\lambda) = \\frac{" + L.L21.num.latex() + "}{" + L.L21.den.latex() + "}, \\quad "
        "L_{2,2}(\\lambda) = \\frac{" + L.L22.num.latex() + "}{" + L.L22.den.latex() + "}"
    )


def latex_hatL(m: LaxMat) -> str:
    return "\\hat{L}(\\lambda) = " + m.latex()


def symbolic_sym_point(g: int, times: IrregularTimes | None = None) -> SymPoint:
    """(Q,P) as atoms and times as atoms t_1..t_{2g-1} unless given."""
    from .exact import Psym_atom, Qsym_atom, X, t_atom

    if times is None:
        times = IrregularTimes(g, tuple(X(t_atom(2 * i + 1)) for i in range(g)))
    return SymPoint(
        tuple(X(Qsym_atom(i)) for i in range(1, g + 1)),
        tuple(X(Psym_atom(i)) for i in range(1, g + 1)),
        times,
    )


def is_poly_in(value, atoms) -> bool:
    return isinstance(value, MultiPoly) and value.atoms() <= set(atoms)

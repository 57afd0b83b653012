"""The dictionary between the isomonodromic and minimal-model formulations."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import factorial
from typing import Mapping, Sequence

from .diffjet import string_lhs
from .exact import ONE, ZERO, Q, s_atom, u_atom
from .isomono import (
    IrregularTimes,
    OperPoint,
    P2_coefficients,
    SymPoint,
    e_dir,
    geometric_hatL,
    ham_oper,
    oper_to_sym,
    vandermonde_Hinf,
)
from .laxmat import LaxMat
from .minimal import (
    A_vector,
    K_hamiltonian,
    build_Ag,
    c_values,
    cconv,
    correction_residue_sides,
    correction_terms,
    forward_solve_unit,
    spectral_from_h,
    toeplitz,
)
from .symfunc import SymBasisVector, h_from_e


# -- times ------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeMap:
    """t_{2k+1} = (2k+1) s_{2k+1} for k = 0..g-1."""

    g: int

    @property
    def D(self) -> tuple:
        return tuple(2 * k + 1 for k in range(self.g))

    def to_t(self, s: Mapping) -> IrregularTimes:
        """s = {l: s_{2l+1}} to the free irregular times."""
        return IrregularTimes(self.g, tuple(Q(s.get(l, 0)) * (2 * l + 1) for l in range(self.g)))

    def to_s(self, t: IrregularTimes) -> dict:
        return {l: t[2 * l + 1] / (2 * l + 1) for l in range(self.g)}


# -- truncated x-series with forward-mode gradients ----------------------------------


class TJet:
    """Power series in x truncated after x^order."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs: Sequence, order: int):
        c = [Q(v) for v in coeffs[: order + 1]]
        c += [ZERO] * (order + 1 - len(c))
        self.c = c
        self.order = order

    @classmethod
    def const(cls, v, order: int) -> "TJet":
        return cls([v], order)

    def _lift(self, o) -> "TJet":
        return o if isinstance(o, TJet) else TJet.const(o, self.order)

    def __add__(self, o):
        if isinstance(o, Dual):
            return NotImplemented
        o = self._lift(o)
        return TJet([a + b for a, b in zip(self.c, o.c)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TJet([-a for a in self.c], self.order)

    def __sub__(self, o):
        if isinstance(o, Dual):
            return NotImplemented
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if isinstance(o, Dual):
            return NotImplemented
        if not isinstance(o, TJet):
            return TJet([a * o for a in self.c], self.order)
        n = self.order
        out = [ZERO] * (n + 1)
        for i, a in enumerate(self.c):
            if a:
                for j in range(n + 1 - i):
                    if o.c[j]:
                        out[i + j] += a * o.c[j]
        return TJet(out, n)

    __rmul__ = __mul__

    def reciprocal(self) -> "TJet":
        if not self.c[0]:
            raise ZeroDivisionError("series with zero constant term")
        n = self.order
        inv0 = 1 / self.c[0]
        y = [inv0]
        for k in range(1, n + 1):
            acc = ZERO
            for j in range(1, k + 1):
                acc += self.c[j] * y[k - j]
            y.append(-acc * inv0)
        return TJet(y, n)

    def __truediv__(self, o):
        if isinstance(o, Dual):
            return NotImplemented
        if not isinstance(o, TJet):
            return TJet([a / o for a in self.c], self.order)
        return self * o.reciprocal()

    def __rtruediv__(self, o):
        return self._lift(o) * self.reciprocal()

    def __pow__(self, n: int):
        out = TJet.const(ONE, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o) -> bool:
        return isinstance(o, TJet) and self.c == o.c

    __hash__ = None

    def __bool__(self) -> bool:
        return any(self.c)


class Dual:
    """value + sum_i grad[i] eps_i with eps_i eps_j = 0."""

    __slots__ = ("v", "d")

    def __init__(self, v, d: Sequence):
        self.v = v
        self.d = tuple(d)

    def _lift(self, o) -> "Dual":
        if isinstance(o, Dual):
            return o
        zero = self.v * 0
        return Dual(o, [zero] * len(self.d))

    def __add__(self, o):
        o = self._lift(o)
        return Dual(self.v + o.v, [a + b for a, b in zip(self.d, o.d)])

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.v, [-a for a in self.d])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return Dual(self.v * o.v, [a * o.v + self.v * b for a, b in zip(self.d, o.d)])

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        inv = 1 / o.v
        val = self.v * inv
        return Dual(val, [(a - val * b) * inv for a, b in zip(self.d, o.d)])

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, n: int):
        out = self._lift(ONE)
        for _ in range(n):
            out = out * self
        return out


def _lagrange_top_coefficient(q: Sequence, values: Sequence):
    """Leading (lambda^{g-1}) coefficient of the interpolant: sum_i v_i / prod_{j!=i}(q_i - q_j)."""
    total = None
    for i, qi in enumerate(q):
        den = None
        for j, qj in enumerate(q):
            if j != i:
                f = qi - qj
                den = f if den is None else den * f
        term = values[i] if den is None else values[i] / den
        total = term if total is None else total + term
    return total


def ham_e1_generic(q: Sequence, p: Sequence, P2: Mapping):
    """Ham^(e_1) = H_{inf,g-1} with arithmetic left to the operands' types."""
    g = len(q)
    rhs = []
    for i in range(g):
        top = max(P2)
        acc = P2[top] + q[i] * 0
        for k in range(top - 1, -1, -1):
            acc = acc * q[i] + P2.get(k, ZERO)
        acc = acc + p[i] * p[i]
        for j in range(g):
            if j != i:
                acc = acc + (p[j] - p[i]) / (q[i] - q[j])
        rhs.append(acc)
    return _lagrange_top_coefficient(q, rhs)


@dataclass
class JetReconstruction:
    point: OperPoint
    order: int
    q_series: list
    p_series: list
    u_jet: list

    def jet_values(self, s: Mapping) -> dict:
        vals = {u_atom(k): v for k, v in enumerate(self.u_jet)}
        vals.update({s_atom(l): Q(v) for l, v in s.items()})
        return vals


def jet_reconstruct(point: OperPoint, order: int | None = None) -> JetReconstruction:
    """Taylor coefficients of the t_1-flow of Ham^(e_1) from the base point, and u = -2 sum q_j."""
    g = point.g
    N = 2 * g + 2 if order is None else order
    base_times = point.times.with_t1(ZERO)
    P2 = dict(P2_coefficients(base_times))
    q = [[Q(v)] for v in point.q]
    p = [[Q(v)] for v in point.p]
    for n in range(N):
        x = TJet([point.times[1], ONE], N)
        P2x = {k: TJet.const(v, N) for k, v in P2.items()}
        P2x[g] = P2x[g] - x
        zero = TJet.const(ZERO, N)
        dq, dp = [], []
        for j in range(g):
            grad = [zero] * (2 * g)
            grad[j] = TJet.const(ONE, N)
            dq.append(Dual(TJet(q[j], N), grad))
            grad = [zero] * (2 * g)
            grad[g + j] = TJet.const(ONE, N)
            dp.append(Dual(TJet(p[j], N), grad))
        H = ham_e1_generic(dq, dp, P2x)
        for j in range(g):
            q[j].append(H.d[g + j].c[n] / (n + 1))
            p[j].append(-H.d[j].c[n] / (n + 1))
    qsum = [sum((q[j][k] for j in range(g)), ZERO) for k in range(N + 1)]
    u_jet = [qsum[k] * factorial(k) * -2 for k in range(N + 1)]
    return JetReconstruction(point, N, q, p, u_jet)


# -- identification checks -------------------------------------------------------


def minimal_lax_at(g: int, jet: Mapping) -> LaxMat:
    return build_Ag(g).map_coeffs(lambda c: c.evaluate(jet))


def lax_identity(point: OperPoint) -> dict:
    """hatL(q,p,t) against A^(g) at the reconstructed jet; also the string equation there."""
    g = point.g
    s = TimeMap(g).to_s(point.times)
    rec = jet_reconstruct(point)
    jet = rec.jet_values(s)
    hatL = geometric_hatL(point)
    A = minimal_lax_at(g, jet)
    diffs = {}
    names = ("1,1", "1,2", "2,1", "2,2")
    for name, a, b in zip(names, hatL.entries(), A.entries()):
        if a != b:
            diffs[name] = (str(a), str(b))
    return {
        "equal": not diffs,
        "string_equation": string_lhs(g).evaluate(jet),
        "diffs": diffs,
        "u": rec.u_jet[0],
    }


def residue_vector(point: OperPoint) -> list:
    """Res lambda^{-(g+1-k)} sum_i p_i/(lambda-q_i) prod_{j!=i}(lambda-q_j)/(q_i-q_j), k = 1..g."""
    return [correction_residue_sides(point.g, k, list(point.q), list(point.p))[0] for k in range(1, point.g + 1)]


def invariants_sides(point: OperPoint) -> tuple:
    """(I from -det hatL, H_inf - c-convolution - residue) as lists over k = 1..g."""
    g = point.g
    s = TimeMap(g).to_s(point.times)
    c = c_values(g, s)
    h = -geometric_hatL(point).det()
    lhs = [h[g - k] - cconv(c, g, k) for k in range(1, g + 1)]
    Hinf = vandermonde_Hinf(point)
    res = residue_vector(point)
    rhs = [Hinf[g - k] - cconv(c, g, k) - res[k - 1] for k in range(1, g + 1)]
    return lhs, rhs


def spectral_H_at(point: OperPoint) -> list:
    """H_k read off sqrt(-det hatL)."""
    g = point.g
    c = c_values(g, TimeMap(g).to_s(point.times))
    return spectral_from_h(-geometric_hatL(point).det(), c, g).H


def _Cinv(c: Mapping, g: int, vec: Sequence) -> list:
    return forward_solve_unit(toeplitz(c, g, g), list(vec))


@dataclass
class HamiltonianComparison:
    """Both Hamiltonian identities at one point, for one k.

    H_sqrt is the lambda^{-(2k+1)/2} coefficient of sqrt(-det hatL); K_sum is the
    coordinate-sum Hamiltonian (mu^2 - I~_0) R~ / beta' minus the correction.
    """

    k: int
    scaled_ham: object  # (2k-1) Ham^(e_{2k-1})
    H_sqrt: object
    CinvR: object
    K_sum: object
    correction: object
    f: object

    def spectral_ok(self, literal: bool = True) -> bool:
        H = self.H_sqrt if literal else 2 * self.H_sqrt
        return self.scaled_ham == H + self.CinvR

    def identification_ok(self, literal: bool = True) -> bool:
        K = self.K_sum if literal else 2 * self.H_sqrt - self.correction
        return self.scaled_ham == K + self.f

    @property
    def offset(self):
        """(2k-1) Ham - K_sum; depends on the times only."""
        return self.scaled_ham - self.K_sum


def hamiltonian_comparison(point: OperPoint) -> list:
    g = point.g
    s = TimeMap(g).to_s(point.times)
    c = c_values(g, s)
    H = spectral_H_at(point)
    A = A_vector(c, g)
    CR = _Cinv(c, g, [a + r for a, r in zip(A, residue_vector(point))])
    f = _Cinv(c, g, A)
    corr = correction_terms(g, list(point.q), list(point.p), c)
    out = []
    for k in range(1, g + 1):
        ham = ham_oper(point, e_dir(k)) * (2 * k - 1)
        K = K_hamiltonian(g, k, list(point.q), list(point.p), s)
        out.append(HamiltonianComparison(k, ham, H[k - 1], CR[k - 1], K, corr[k - 1], f[k - 1]))
    return out


def symmetric_correction(sym: SymPoint, k: int, literal: bool = True):
    """The correction term as a polynomial in (Q, P).

    literal=True transcribes the closed form term by term: the composition sum
    starts at r = 1, so h_0 contributes 0.  literal=False keeps h_0 = 1 and flips
    the overall sign, which is what matches the coordinate definition.
    """
    g = sym.g
    if k == 1:
        return ZERO
    Qk, Pk = sym.Qk, sym.Pk
    first = ZERO
    for i in range(g + 2 - k, g + 1):
        first = first + Pk(i) * Qk(i + k - g - 2)
    first = first * (g + 1 - k) * (1 if (g - k) % 2 == 0 else -1)
    e = SymBasisVector("e", g, (ONE,) + tuple(sym.Q))
    second = ZERO
    for i in range(1, g + 1):
        for j in range(0, g):
            n = i + j + k - 2 * g - 1
            if n < 0:
                continue
            if n == 0:
                hn = ZERO if literal else ONE
            else:
                hn = h_from_e(e, n)[n]
            pq = ZERO
            for m in range(j + 1, g + 1):
                pq = pq + Pk(m) * Qk(m - j - 1)
            term = Qk(g - i) * i * hn * pq
            second = second + (term if (g + j - i) % 2 == 0 else -term)
    total = first + second
    return total if literal else -total


def correction_value(point: OperPoint, k: int):
    """-sum_j mu_j beta'_{k-1}(lambda_j)/prod_{i!=j}(lambda_j - lambda_i)."""
    return correction_residue_sides(point.g, k, list(point.q), list(point.p))[1]


# -- seeded checks ----------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 9, den: int = 4):
    return Q(rng.randint(-bound, bound), rng.randint(1, den))


def random_oper_point(g: int, rng: random.Random) -> OperPoint:
    """Distinct integer q, rational p and free times."""
    q = tuple(Q(v) for v in rng.sample(range(-3 * g - 6, 3 * g + 7), g))
    p = tuple(random_rational(rng) for _ in range(g))
    t = tuple(random_rational(rng) for _ in range(g))
    return OperPoint(q, p, IrregularTimes(g, t))


@dataclass
class CheckResult:
    ok: bool
    witness: dict | None = None


def lax_identity_check(g: int, seeds: Sequence[int]) -> CheckResult:
    for seed in seeds:
        pt = random_oper_point(g, random.Random(seed))
        r = lax_identity(pt)
        if not r["equal"] or r["string_equation"] != 0:
            return CheckResult(False, {"seed": seed, "diffs": r["diffs"], "string": str(r["string_equation"])})
    return CheckResult(True)


def invariants_check(g: int, seeds: Sequence[int]) -> CheckResult:
    for seed in seeds:
        pt = random_oper_point(g, random.Random(seed))
        lhs, rhs = invariants_sides(pt)
        if lhs != rhs:
            return CheckResult(False, {"seed": seed, "I": [str(v) for v in lhs], "formula": [str(v) for v in rhs]})
    return CheckResult(True)


def hamiltonian_checks(g: int, seeds: Sequence[int], literal: bool = True) -> CheckResult:
    """Both identities at every seed, plus seed-independence of (2k-1)Ham - K at fixed times."""
    for seed in seeds:
        rng = random.Random(seed)
        pt = random_oper_point(g, rng)
        rows = hamiltonian_comparison(pt)
        other = random_oper_point(g, rng)
        other = OperPoint(other.q, other.p, pt.times)
        rows2 = hamiltonian_comparison(other)
        for a, b in zip(rows, rows2):
            bad = {}
            if not a.spectral_ok(literal):
                bad["spectral"] = [str(a.scaled_ham), str((a.H_sqrt if literal else 2 * a.H_sqrt) + a.CinvR)]
            if not a.identification_ok(literal):
                K = a.K_sum if literal else 2 * a.H_sqrt - a.correction
                bad["identification"] = [str(a.scaled_ham), str(K + a.f)]
            if a.offset != b.offset:
                bad["constancy"] = [str(a.offset), str(b.offset)]
            if bad:
                return CheckResult(False, {"seed": seed, "k": a.k, **bad})
    return CheckResult(True)


def symmetric_correction_check(g: int, seeds: Sequence[int], literal: bool = True) -> CheckResult:
    for seed in seeds:
        pt = random_oper_point(g, random.Random(seed))
        sym = oper_to_sym(pt)
        for k in range(1, g + 1):
            a, b = symmetric_correction(sym, k, literal), correction_value(pt, k)
            if a != b:
                return CheckResult(False, {"seed": seed, "k": k, "closed_form": str(a), "coordinates": str(b)})
    return CheckResult(True)


# -- dictionary -------------------------------------------------------------------------


def dictionary(g: int) -> dict:
    """The correspondence table between both formulations, as JSON-ready data."""
    return {
        "genus": g,
        "r_infinity": g + 3,
        "times": {
            "rule": "t_{2k+1} = (2k+1) s_{2k+1}, k = 0..g-1",
            "D": [2 * k + 1 for k in range(g)],
            "fixed": {f"t_{2 * g + 1}": "0", f"t_{2 * g + 3}": "2", "even t": "0", f"s_{2 * g + 1}": "0"},
        },
        "coordinates": {
            "lax": "hatL(lambda) = A^(g)(lambda)",
            "darboux": "(q_j, p_j) = (lambda_j, mu_j)",
            "symmetric": "Q_i = e_i(q), p_i = sum_k P_k d e_k / d q_i",
            "u": "u = -2 Q_1",
        },
        "hamiltonians": [
            {
                "k": k,
                "isomonodromic": f"{2 * k - 1} Ham^(e_{2 * k - 1})",
                "minimal_model": f"K_{2 * k - 1} + f_{2 * k - 1}(s)",
                "spectral": f"2 xi[lambda^(-{2 * k + 1}/2)] + [C(s)^-1 R]_{k}",
            }
            for k in range(1, g + 1)
        ],
    }


def f_symbolic_text(g: int) -> list:
    """f_{2k-1}(s) as text, from C(s)^{-1} A(s)."""
    c = c_values(g)
    return [str(v) for v in forward_solve_unit(toeplitz(c, g, g), A_vector(c, g))]


__all__ = [
    "TimeMap",
    "TJet",
    "Dual",
    "JetReconstruction",
    "jet_reconstruct",
    "lax_identity",
    "invariants_sides",
    "hamiltonian_comparison",
    "symmetric_correction",
    "correction_value",
    "random_oper_point",
    "lax_identity_check",
    "invariants_check",
    "hamiltonian_checks",
    "symmetric_correction_check",
    "dictionary",
]

"""Truncated pseudo-differential operators over differential polynomials."""

from __future__ import annotations

from functools import lru_cache
from math import factorial

from .diffjet import R, U, c_coeff, d_x, string_lhs
from .exact import ONE, MultiPoly, Q
from .series import TruncationError


def binom(k: int, j: int):
    """Generalized binomial coefficient for any integer k and j >= 0."""
    num = 1
    for i in range(j):
        num *= k - i
    return Q(num, factorial(j))


class PsiOp:
    """sum_i coeffs[i] * D^i; orders below ``lowest`` are unknown (None = exact)."""

    __slots__ = ("coeffs", "lowest")

    def __init__(self, coeffs: dict | None = None, lowest: int | None = None):
        data = {}
        for i, c in (coeffs or {}).items():
            c = MultiPoly.lift(c)
            if c and (lowest is None or i >= lowest):
                data[i] = c
        self.coeffs = data
        self.lowest = lowest

    @classmethod
    def mult(cls, f) -> "PsiOp":
        return cls({0: f})

    @classmethod
    def D(cls, power: int = 1) -> "PsiOp":
        return cls({power: ONE})

    @property
    def max_order(self) -> int:
        return max(self.coeffs, default=-(10 ** 9))

    @property
    def min_guaranteed(self):
        return self.lowest

    def __getitem__(self, order: int) -> MultiPoly:
        if self.lowest is not None and order < self.lowest:
            raise TruncationError(f"order {order} lies below watermark {self.lowest}")
        return self.coeffs.get(order, MultiPoly())

    def __add__(self, other: "PsiOp") -> "PsiOp":
        other = _lift(other)
        lowest = _max_water(self.lowest, other.lowest)
        data = dict(self.coeffs)
        for i, c in other.coeffs.items():
            data[i] = data[i] + c if i in data else c
        return PsiOp(data, lowest)

    def __neg__(self) -> "PsiOp":
        return PsiOp({i: -c for i, c in self.coeffs.items()}, self.lowest)

    def __sub__(self, other) -> "PsiOp":
        return self + (-_lift(other))

    def scale(self, f) -> "PsiOp":
        """Left multiplication by a function (or constant)."""
        return PsiOp({i: c * f for i, c in self.coeffs.items()}, self.lowest)

    def __mul__(self, other) -> "PsiOp":
        if isinstance(other, PsiOp):
            return compose(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        other = _lift(other)
        return self.lowest == other.lowest and self.coeffs == other.coeffs

    __hash__ = None

    def agrees_with(self, other: "PsiOp") -> bool:
        other = _lift(other)
        low = _max_water(self.lowest, other.lowest)
        for i in set(self.coeffs) | set(other.coeffs):
            if low is not None and i < low:
                continue
            if self.coeffs.get(i, MultiPoly()) != other.coeffs.get(i, MultiPoly()):
                return False
        return True

    def truncate(self, lowest: int) -> "PsiOp":
        if self.lowest is not None and self.lowest > lowest:
            raise TruncationError("cannot lower the watermark")
        return PsiOp(dict(self.coeffs), lowest)

    def __str__(self) -> str:
        parts = []
        for i in sorted(self.coeffs, reverse=True):
            c = self.coeffs[i]
            ctext = str(c) if len(c.terms) == 1 else f"({c})"
            if i == 0:
                parts.append(ctext)
            else:
                d = "D" if i == 1 else f"D^{i}"
                parts.append(d if ctext == "1" else f"{ctext}*{d}")
        body = " + ".join(parts) if parts else "0"
        if self.lowest is not None:
            body += f"  [exact down to D^{self.lowest}]"
        return body

    __repr__ = __str__

    def latex(self) -> str:
        parts = []
        for i in sorted(self.coeffs, reverse=True):
            c = self.coeffs[i]
            ctext = c.latex() if len(c.terms) == 1 else f"\\left({c.latex()}\\right)"
            if i == 0:
                parts.append(ctext)
            else:
                d = "\\partial" if i == 1 else f"\\partial^{{{i}}}"
                parts.append(d if ctext == "1" else f"{ctext}{d}")
        return (" + ".join(parts) if parts else "0").replace("+ -", "- ")


def _lift(x) -> PsiOp:
    return x if isinstance(x, PsiOp) else PsiOp({0: x})


def _max_water(*ws):
    finite = [w for w in ws if w is not None]
    return max(finite) if finite else None


def compose(a: PsiOp, b: PsiOp, lowest: int | None = None) -> PsiOp:
    """a o b via D^i o f = sum_k binom(i,k) f^{(k)} D^{i-k}.

    ``lowest`` requests a watermark; it is mandatory when the exact result would
    be an infinite series.
    """
    bounds = []
    if a.lowest is not None and b.coeffs:
        bounds.append(a.lowest + b.max_order)
    if b.lowest is not None and a.coeffs:
        bounds.append(b.lowest + a.max_order)
    if lowest is not None:
        bounds.append(lowest)
    water = max(bounds) if bounds else None
    infinite = any(i < 0 for i in a.coeffs) and any(not c.is_constant() for c in b.coeffs.values())
    if water is None and infinite:
        raise TruncationError("composition is an infinite series; pass lowest=")
    data: dict = {}
    derivs: dict = {}

    def deriv(j, k):
        key = (j, k)
        if key not in derivs:
            derivs[key] = b.coeffs[j] if k == 0 else d_x(deriv(j, k - 1))
        return derivs[key]

    for i, ai in a.coeffs.items():
        for j in b.coeffs:
            k = 0
            while True:
                order = i + j - k
                if water is not None and order < water:
                    break
                if i >= 0 and k > i:
                    break
                bk = deriv(j, k)
                if bk:
                    term = ai * bk * binom(i, k)
                    data[order] = data[order] + term if order in data else term
                elif b.coeffs[j].is_constant() and k > 0:
                    break
                k += 1
    return PsiOp(data, water)


def commutator(a: PsiOp, b: PsiOp, lowest: int | None = None) -> PsiOp:
    return compose(a, b, lowest) - compose(b, a, lowest)


def proj_plus(a: PsiOp) -> PsiOp:
    if a.lowest is not None and a.lowest > 0:
        raise TruncationError("differential part needs orders down to 0")
    return PsiOp({i: c for i, c in a.coeffs.items() if i >= 0})


def proj_minus(a: PsiOp) -> PsiOp:
    return PsiOp({i: c for i, c in a.coeffs.items() if i < 0}, a.lowest)


def residue(a: PsiOp) -> MultiPoly:
    return a[-1]


def invert(a: PsiOp, depth: int) -> PsiOp:
    """Inverse of 1 + (negative orders), valid down to D^{-depth}."""
    if a[0] != 1 or any(i > 0 for i in a.coeffs):
        raise ValueError("invert needs an operator of the form 1 + lower order terms")
    N = PsiOp({i: c for i, c in a.coeffs.items() if i < 0}, a.lowest)
    lowest = -depth if a.lowest is None else max(-depth, a.lowest)
    result = PsiOp({0: ONE}, lowest)
    power = PsiOp({0: ONE})
    for _ in range(depth):
        power = compose(power, -N, lowest)
        if not power.coeffs:
            break
        result = result + power
    return result.truncate(lowest) if result.lowest is None else result


def Q_op() -> PsiOp:
    return PsiOp({2: ONE, 0: U(0)})


@lru_cache(maxsize=None)
def sqrt_Q(depth: int) -> PsiOp:
    """The root D + sum_{k>=0} x_k D^{-k} of D^2 + u, valid down to D^{-depth}."""
    Qop = Q_op()
    X = PsiOp({1: ONE})
    for k in range(0, depth + 1):
        order = 1 - k
        sq = compose(X, X, order)
        defect = (sq - Qop)[order]
        if defect:
            X = X + PsiOp({-k: -defect * Q(1, 2)})
    return X.truncate(-depth)


@lru_cache(maxsize=None)
def Q_power(n: int) -> PsiOp:
    if n == 0:
        return PsiOp({0: ONE})
    return compose(Q_power(n - 1), Q_op())


def Q_half_power(k: int, lowest: int) -> PsiOp:
    """Q^{k/2} for odd k, valid down to D^{lowest}."""
    n = (k - 1) // 2
    depth = 2 * n - lowest
    return compose(Q_power(n), sqrt_Q(max(depth, 1)), lowest)


def residue_R(l: int) -> MultiPoly:
    """res Q^{l+1/2}, which should equal R_{2l+1}."""
    return residue(Q_half_power(2 * l + 1, -1))


@lru_cache(maxsize=None)
def B_op(k: int) -> PsiOp:
    """B_k = (Q^{k/2})_+ for odd k."""
    if k % 2 == 0 or k < 1:
        raise ValueError("B_k needs odd k >= 1")
    return proj_plus(Q_half_power(k, 0))


def kdv_flow_check(l: int) -> tuple:
    """[B_{2l+1}, Q] = 2 d_x R_{2l+1} and the B-recursion B_{2l+1} from B_{2l-1}."""
    Qop = Q_op()
    comm = commutator(B_op(2 * l + 1), Qop)
    target = PsiOp({0: d_x(R(2 * l + 1)) * 2})
    ok_flow = comm == target
    if l >= 1:
        k = 2 * l - 1
        rebuilt = compose(B_op(k), Qop) + PsiOp({1: R(k), 0: -d_x(R(k)) * Q(1, 2)})
        ok_rec = rebuilt == B_op(k + 2)
    else:
        ok_rec = B_op(1) == PsiOp({1: ONE})
    return ok_flow and ok_rec, {"commutator": comm, "flow": target}


def P_operator(g: int) -> PsiOp:
    """B_{2g+1} + sum_{l=1}^{g-1} c_{2l-1} B_{2l-1}."""
    P = B_op(2 * g + 1)
    for l in range(1, g):
        P = P + B_op(2 * l - 1).scale(c_coeff(g, l))
    return P


def string_operator_check(g: int) -> tuple:
    """[Q, P^(g)] - 1 = -2 d_x(string_lhs(g)) as operators."""
    lhs = commutator(Q_op(), P_operator(g)) - PsiOp({0: ONE})
    rhs = PsiOp({0: d_x(string_lhs(g)) * -2})
    residual = lhs - rhs
    return (not residual.coeffs, residual)


def render(op: PsiOp) -> str:
    return str(op)


__all__ = [
    "PsiOp",
    "binom",
    "compose",
    "commutator",
    "proj_plus",
    "proj_minus",
    "residue",
    "invert",
    "Q_op",
    "sqrt_Q",
    "Q_half_power",
    "residue_R",
    "B_op",
    "kdv_flow_check",
    "P_operator",
    "string_operator_check",
]

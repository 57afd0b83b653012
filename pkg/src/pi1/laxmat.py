"""2x2 matrices with lambda-series entries."""

from __future__ import annotations

from typing import Callable

from .exact import ONE, MultiPoly
from .series import LambdaSeries


def _s(x) -> LambdaSeries:
    return x if isinstance(x, LambdaSeries) else LambdaSeries({0: x})


class LaxMat:
    __slots__ = ("e",)

    def __init__(self, a, b, c, d):
        self.e = ((_s(a), _s(b)), (_s(c), _s(d)))

    def __getitem__(self, ij):
        i, j = ij
        return self.e[i][j]

    def entries(self):
        return [self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]]

    def __add__(self, o: "LaxMat") -> "LaxMat":
        return LaxMat(*(x + y for x, y in zip(self.entries(), o.entries())))

    def __sub__(self, o: "LaxMat") -> "LaxMat":
        return LaxMat(*(x - y for x, y in zip(self.entries(), o.entries())))

    def __neg__(self) -> "LaxMat":
        return LaxMat(*(-x for x in self.entries()))

    def scale(self, c) -> "LaxMat":
        return LaxMat(*(x.scale(c) for x in self.entries()))

    def __matmul__(self, o: "LaxMat") -> "LaxMat":
        (a, b), (c, d) = self.e
        (p, q), (r, s) = o.e
        return LaxMat(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)

    def commutator(self, o: "LaxMat") -> "LaxMat":
        return (self @ o) - (o @ self)

    def map_coeffs(self, f: Callable) -> "LaxMat":
        return LaxMat(*(x.map_coeffs(f) for x in self.entries()))

    def d_lambda(self) -> "LaxMat":
        return LaxMat(*(x.d_lambda() for x in self.entries()))

    def shift(self, e) -> "LaxMat":
        return LaxMat(*(x.shift(e) for x in self.entries()))

    def plus_part(self) -> "LaxMat":
        return LaxMat(*(x.plus_part() for x in self.entries()))

    def det(self) -> LambdaSeries:
        (a, b), (c, d) = self.e
        return a * d - b * c

    def trace(self) -> LambdaSeries:
        return self.e[0][0] + self.e[1][1]

    def is_zero(self) -> bool:
        return not any(x.coeffs for x in self.entries())

    def __eq__(self, o) -> bool:
        return isinstance(o, LaxMat) and all(x == y for x, y in zip(self.entries(), o.entries()))

    __hash__ = None

    def agrees_with(self, o: "LaxMat") -> bool:
        return all(x.agrees_with(y) for x, y in zip(self.entries(), o.entries()))

    def __str__(self) -> str:
        names = ("[1,1]", "[1,2]", "[2,1]", "[2,2]")
        return "\n".join(f"{n} = {x}" for n, x in zip(names, self.entries()))

    __repr__ = __str__

    def latex(self) -> str:
        (a, b), (c, d) = self.e
        return f"\\begin{{pmatrix}} {a.latex()} & {b.latex()} \\\\ {c.latex()} & {d.latex()} \\end{{pmatrix}}"


def E21(c=ONE) -> LaxMat:
    zero = LambdaSeries()
    return LaxMat(zero, zero, LambdaSeries({0: c}), zero)


def zeros() -> LaxMat:
    z = LambdaSeries()
    return LaxMat(z, z, z, z)


def const_poly_mat(m) -> LaxMat:
    return LaxMat(*(LambdaSeries({0: x}) for row in m for x in row))


def evaluate_mat(m: LaxMat, values) -> LaxMat:
    def ev(c):
        return c.evaluate(values) if isinstance(c, MultiPoly) else c

    return m.map_coeffs(ev)

"""Exact rationals, tagged atoms and sparse multivariate polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Union

import gmpy2

Rational = type(gmpy2.mpq())
Scalar = Union[int, Fraction, "gmpy2.mpq"]

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def Q(value, den: int | None = None) -> Rational:
    """Coerce ints, Fractions, mpq or "p/q" strings to an exact rational."""
    if den is not None:
        return gmpy2.mpq(value, den)
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    return gmpy2.mpq(value)


def rational_text(r) -> str:
    r = Q(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def parse_rational(text: str) -> Rational:
    return gmpy2.mpq(text.strip())


class RingTagError(ValueError):
    """Raised when jet atoms would mix with oper Darboux atoms."""


# Atom tags, in canonical order.
UJET, STIME, ITIME, OPERQ, OPERP, SYMQ, SYMP, MODULI, SPECTRAL = range(9)
_TAG_NAMES = ["u", "s", "t", "q", "p", "Q", "P", "m", "lam"]
_ROLES = "abc"
_JET_TAGS = frozenset((UJET, STIME))
_OPER_TAGS = frozenset((OPERQ, OPERP))


class Atom(NamedTuple):
    tag: int
    index: int
    sub: int = 0

    def __str__(self) -> str:
        if self.tag == UJET:
            return "u" if self.index == 0 else f"u{self.index}"
        if self.tag == STIME:
            return "x" if self.index == 0 else f"s{2 * self.index + 1}"
        if self.tag == MODULI:
            return f"{_ROLES[self.index]}{self.sub}"
        if self.tag == SPECTRAL:
            return ("lam", "mu")[self.index] if self.index < 2 else f"z{self.index}"
        return f"{_TAG_NAMES[self.tag]}{self.index}"

    def latex(self) -> str:
        if self.tag == UJET:
            if self.index == 0:
                return "u"
            if self.index <= 3:
                return "u_{" + "x" * self.index + "}"
            return f"u^{{({self.index})}}"
        if self.tag == STIME:
            return "x" if self.index == 0 else f"s_{{{2 * self.index + 1}}}"
        if self.tag == ITIME:
            return f"t_{{\\infty,{self.index}}}"
        if self.tag == MODULI:
            return f"{_ROLES[self.index]}_{{{self.sub}}}"
        if self.tag == SPECTRAL:
            return ("\\lambda", "\\mu")[self.index] if self.index < 2 else f"z_{{{self.index}}}"
        return f"{_TAG_NAMES[self.tag]}_{{{self.index}}}"


def u_atom(k: int) -> Atom:
    return Atom(UJET, k)


def s_atom(l: int) -> Atom:
    """s_{2l+1}; l = 0 is x."""
    return Atom(STIME, l)


def t_atom(k: int) -> Atom:
    if k % 2 == 0:
        raise ValueError("irregular times carry odd indices")
    return Atom(ITIME, k)


def q_atom(i: int) -> Atom:
    return Atom(OPERQ, i)


def p_atom(i: int) -> Atom:
    return Atom(OPERP, i)


def Qsym_atom(i: int) -> Atom:
    return Atom(SYMQ, i)


def Psym_atom(i: int) -> Atom:
    return Atom(SYMP, i)


def moduli_atom(role: str, index: int) -> Atom:
    return Atom(MODULI, _ROLES.index(role), index)


def spec_atom(i: int) -> Atom:
    """Auxiliary spectral variables for two-variable identities (0 = lambda, 1 = mu)."""
    return Atom(SPECTRAL, i)


Monomial = tuple  # tuple of (Atom, exponent) pairs sorted by atom


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        a, ea = m1[i]
        b, eb = m2[j]
        if a == b:
            out.append((a, ea + eb))
            i += 1
            j += 1
        elif a < b:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _ring_of_atoms(atoms: Iterable[Atom]) -> int:
    """0 = neutral, 1 = jet ring, 2 = oper Darboux ring."""
    ring = 0
    for a in atoms:
        if a.tag in _JET_TAGS:
            r = 1
        elif a.tag in _OPER_TAGS:
            r = 2
        else:
            continue
        if ring and ring != r:
            raise RingTagError("u-jet/s-time atoms mixed with oper Darboux atoms")
        ring = r
    return ring


def _join(r1: int, r2: int) -> int:
    if r1 and r2 and r1 != r2:
        raise RingTagError("u-jet/s-time atoms mixed with oper Darboux atoms")
    return r1 or r2


class MultiPoly:
    """Sparse polynomial over Q in tagged atoms. Treated as immutable."""

    __slots__ = ("terms", "ring", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict = {}
        if terms:
            for mono, c in terms.items():
                c = Q(c)
                if c:
                    mono = tuple(sorted((a, e) for a, e in mono if e))
                    clean[mono] = clean.get(mono, ZERO) + c
                    if not clean[mono]:
                        del clean[mono]
        self.terms = clean
        self.ring = _ring_of_atoms(a for m in clean for a, _ in m)
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, ring: int) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.ring = ring
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        c = Q(c)
        return cls._raw({(): c} if c else {}, 0)

    @classmethod
    def var(cls, atom: Atom, power: int = 1) -> "MultiPoly":
        if power == 0:
            return cls.const(ONE)
        if power < 0:
            raise ValueError("negative powers are not polynomial")
        return cls._raw({((atom, power),): ONE}, _ring_of_atoms([atom]))

    # -- inspection ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get((), ZERO)

    def to_rational(self) -> Rational:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.constant_term()

    def atoms(self) -> set:
        return {a for m in self.terms for a, _ in m}

    def degree_in(self, atom: Atom) -> int:
        d = 0
        for m in self.terms:
            for a, e in m:
                if a == atom and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def coeff_of(self, mono: Monomial) -> Rational:
        return self.terms.get(tuple(mono), ZERO)

    def collect(self, atom: Atom) -> dict:
        """Split into {power: coefficient polynomial} with respect to one atom."""
        parts: dict = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for a, e in m:
                if a == atom:
                    k = e
                else:
                    rest.append((a, e))
            parts.setdefault(k, {})[tuple(rest)] = c
        return {k: MultiPoly._raw(v, _ring_of_atoms(a for mm in v for a, _ in mm)) for k, v in parts.items()}

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def lift(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.const(x)

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = Q(other)
            if not other:
                return self
            t = dict(self.terms)
            c = t.get((), ZERO) + other
            if c:
                t[()] = c
            else:
                t.pop((), None)
            return MultiPoly._raw(t, self.ring)
        ring = _join(self.ring, other.ring)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        t = dict(big)
        for m, c in small.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return MultiPoly._raw(t, ring if t else 0)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-other if isinstance(other, MultiPoly) else -Q(other))

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = Q(c)
        if not c:
            return MultiPoly._raw({}, 0)
        return MultiPoly._raw({m: v * c for m, v in self.terms.items()}, self.ring)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        ring = _join(self.ring, other.ring)
        if not self.terms or not other.terms:
            return MultiPoly._raw({}, 0)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = t.get(m)
                t[m] = c1 * c2 if v is None else v + c1 * c2
        t = {m: c for m, c in t.items() if c}
        return MultiPoly._raw(t, ring if t else 0)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            other = other.to_rational()
        other = Q(other)
        if not other:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(1 / other)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        try:
            c = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and substitution -----------------------------------------

    def diff(self, atom: Atom) -> "MultiPoly":
        t: dict = {}
        for m, c in self.terms.items():
            for i, (a, e) in enumerate(m):
                if a == atom:
                    nm = m[:i] + ((a, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
                    t[nm] = t.get(nm, ZERO) + c * e
                    break
        t = {m: c for m, c in t.items() if c}
        return MultiPoly._raw(t, _ring_of_atoms(a for mm in t for a, _ in mm))

    def derive(self, rule: Callable[[Atom], "MultiPoly | Scalar | None"]) -> "MultiPoly":
        """Apply the derivation fixed by its values on atoms (None means 0)."""
        cache: dict = {}
        acc: dict = {}
        pieces: list = []
        for m, c in self.terms.items():
            for i, (a, e) in enumerate(m):
                if a not in cache:
                    cache[a] = rule(a)
                da = cache[a]
                if da is None or (not isinstance(da, MultiPoly) and not Q(da)):
                    continue
                rest = m[:i] + ((a, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
                pieces.append((rest, c * e, da))
        for rest, c, da in pieces:
            if isinstance(da, MultiPoly):
                for dm, dc in da.terms.items():
                    mm = _mono_mul(rest, dm)
                    acc[mm] = acc.get(mm, ZERO) + c * dc
            else:
                acc[rest] = acc.get(rest, ZERO) + c * Q(da)
        acc = {m: c for m, c in acc.items() if c}
        out = MultiPoly._raw(acc, _ring_of_atoms(a for mm in acc for a, _ in mm))
        return out

    def subs(self, mapping: Mapping[Atom, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Replace every occurrence of the mapped atoms."""
        if not mapping:
            return self
        mapping = {a: (v if isinstance(v, MultiPoly) else Q(v)) for a, v in mapping.items()}
        powers: dict = {}

        def power(a, e):
            key = (a, e)
            if key not in powers:
                v = mapping[a]
                powers[key] = v ** e if isinstance(v, MultiPoly) else v ** e
            return powers[key]

        total_terms: dict = {}
        poly_parts: list = []
        for m, c in self.terms.items():
            kept = []
            scalar = c
            polys = []
            for a, e in m:
                if a in mapping:
                    v = power(a, e)
                    if isinstance(v, MultiPoly):
                        polys.append(v)
                    else:
                        scalar = scalar * v
                else:
                    kept.append((a, e))
            if not scalar:
                continue
            kept = tuple(kept)
            if not polys:
                total_terms[kept] = total_terms.get(kept, ZERO) + scalar
            else:
                prod = MultiPoly._raw({kept: scalar}, _ring_of_atoms(a for a, _ in kept))
                for p in polys:
                    prod = prod * p
                poly_parts.append(prod)
        total_terms = {m: c for m, c in total_terms.items() if c}
        result = MultiPoly._raw(total_terms, _ring_of_atoms(a for mm in total_terms for a, _ in mm))
        for p in poly_parts:
            result = result + p
        return result

    def evaluate(self, values: Mapping[Atom, Scalar]) -> Rational:
        """Evaluate at rational values of every atom present."""
        total = ZERO
        vals = {a: Q(v) for a, v in values.items()}
        for m, c in self.terms.items():
            term = c
            for a, e in m:
                try:
                    term = term * vals[a] ** e
                except KeyError:
                    raise KeyError(f"no value for atom {a}") from None
            total += term
        return total

    # -- text forms --------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]))

    def canonical(self) -> str:
        """Sorted monomial list, e.g. '[[[0,2,0],1],3/8]'-free readable form."""
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"{a}^{e}" if e > 1 else str(a) for a, e in m) or "1"
            parts.append(f"{rational_text(c)}:{mono}")
        return "{" + ", ".join(parts) + "}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"{a}^{e}" if e > 1 else str(a) for a, e in m)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = rational_text(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{rational_text(mag)}*{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def latex(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = " ".join(f"{a.latex()}^{{{e}}}" if e > 1 else a.latex() for a, e in m)
            mag = abs(c)
            if mag.denominator == 1:
                num = "" if (mag == 1 and mono) else str(mag.numerator)
                body = f"{num}{mono}" if not num or not mono else f"{num}{mono}"
            else:
                body = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}{mono}"
            out.append(("-" if c < 0 else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s


def X(atom: Atom, power: int = 1) -> MultiPoly:
    """Shorthand for the polynomial consisting of one atom."""
    return MultiPoly.var(atom, power)


def C(c) -> MultiPoly:
    return MultiPoly.const(c)


def as_rational(v) -> Rational:
    if isinstance(v, MultiPoly):
        return v.to_rational()
    return Q(v)


def is_zero(v) -> bool:
    return not v


def solve_linear(M, rhs) -> list:
    """Exact solution of a square rational system; the pivot is the first nonzero entry."""
    n = len(M)
    A = [[Q(x) for x in row] + [Q(b)] for row, b in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]

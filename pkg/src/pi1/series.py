"""Truncated Laurent/Puiseux series in the spectral variable lambda.

Exponents are stored as integers in half-units (key 2e for exponent e).
A series knows the lowest exponent below which its coefficients are not
guaranteed; ``lowest is None`` marks an exact (finite) expansion.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .exact import ONE, ZERO, MultiPoly, Q, Rational, rational_text


class TruncationError(ArithmeticError):
    """A coefficient below the validity watermark was requested."""


class NotInvertibleError(ArithmeticError):
    pass


def _key(e) -> int:
    k = Q(e) * 2
    if k.denominator != 1:
        raise ValueError(f"exponent {e} is not a half-integer")
    return int(k)


def _exp(key: int) -> Rational:
    return Q(key, 2)


def _nonzero(c) -> bool:
    return bool(c)


def _min_water(*ws):
    finite = [w for w in ws if w is not None]
    return max(finite) if finite else None


class LambdaSeries:
    __slots__ = ("coeffs", "lowest", "half_step")

    def __init__(self, coeffs: dict | None = None, lowest=None, half_step: bool | None = None, *, keys: bool = False):
        """``coeffs`` maps exponents (or half-unit keys when keys=True) to coefficients."""
        data = {}
        for e, c in (coeffs or {}).items():
            k = e if keys else _key(e)
            if _nonzero(c):
                data[k] = data[k] + c if k in data else c
                if not _nonzero(data[k]):
                    del data[k]
        self.lowest = lowest if (lowest is None or keys) else _key(lowest)
        if self.lowest is not None:
            data = {k: c for k, c in data.items() if k >= self.lowest}
        self.coeffs = data
        odd = any(k % 2 for k in data)
        self.half_step = odd if half_step is None else (half_step or odd)

    @classmethod
    def _raw(cls, data: dict, lowest, half_step: bool) -> "LambdaSeries":
        obj = cls.__new__(cls)
        if lowest is not None:
            data = {k: c for k, c in data.items() if k >= lowest and _nonzero(c)}
        else:
            data = {k: c for k, c in data.items() if _nonzero(c)}
        obj.coeffs = data
        obj.lowest = lowest
        obj.half_step = half_step or any(k % 2 for k in data)
        return obj

    @classmethod
    def monomial(cls, e, c=ONE) -> "LambdaSeries":
        return cls({e: c})

    @classmethod
    def poly(cls, coefficients: Iterable, var_power_start: int = 0) -> "LambdaSeries":
        """Exact polynomial from ascending coefficient list."""
        return cls({i + var_power_start: c for i, c in enumerate(coefficients)})

    # -- inspection ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.lowest is None

    @property
    def lowest_valid(self):
        return None if self.lowest is None else _exp(self.lowest)

    def top_key(self) -> int:
        if not self.coeffs:
            raise ValueError("zero series has no leading term")
        return max(self.coeffs)

    def degree(self) -> Rational:
        return _exp(self.top_key())

    def leading(self):
        return self.coeffs[self.top_key()]

    def __getitem__(self, e):
        k = _key(e)
        if self.lowest is not None and k < self.lowest:
            raise TruncationError(f"coefficient of lambda^{_exp(k)} lies below watermark lambda^{_exp(self.lowest)}")
        return self.coeffs.get(k, ZERO)

    coeff = __getitem__

    def exponents(self) -> list:
        return [_exp(k) for k in sorted(self.coeffs, reverse=True)]

    def items(self):
        """(exponent, coefficient) pairs in descending exponent order."""
        return [(_exp(k), self.coeffs[k]) for k in sorted(self.coeffs, reverse=True)]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "LambdaSeries":
        other = _lift(other)
        lowest = _min_water(self.lowest, other.lowest)
        data = dict(self.coeffs)
        for k, c in other.coeffs.items():
            data[k] = data[k] + c if k in data else c
        return LambdaSeries._raw(data, lowest, self.half_step or other.half_step)

    __radd__ = __add__

    def __neg__(self) -> "LambdaSeries":
        return LambdaSeries._raw({k: -c for k, c in self.coeffs.items()}, self.lowest, self.half_step)

    def __sub__(self, other) -> "LambdaSeries":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "LambdaSeries":
        return _lift(other) - self

    def scale(self, c) -> "LambdaSeries":
        return LambdaSeries._raw({k: v * c for k, v in self.coeffs.items()}, self.lowest, self.half_step)

    def shift(self, e) -> "LambdaSeries":
        """Multiply by lambda^e."""
        d = _key(e)
        return LambdaSeries._raw(
            {k + d: c for k, c in self.coeffs.items()},
            None if self.lowest is None else self.lowest + d,
            self.half_step or bool(d % 2),
        )

    def __mul__(self, other) -> "LambdaSeries":
        if not isinstance(other, LambdaSeries):
            return self.scale(other)
        bounds = []
        if self.lowest is not None:
            bounds.append(self.lowest + (other.top_key() if other.coeffs else -10**9))
        if other.lowest is not None:
            bounds.append(other.lowest + (self.top_key() if self.coeffs else -10**9))
        lowest = max(bounds) if bounds else None
        data: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if lowest is not None and k < lowest:
                    continue
                p = c1 * c2
                data[k] = data[k] + p if k in data else p
        return LambdaSeries._raw(data, lowest, self.half_step or other.half_step)

    def __rmul__(self, other) -> "LambdaSeries":
        return self.scale(other)

    def __pow__(self, n: int) -> "LambdaSeries":
        result = LambdaSeries({0: ONE})
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, lowest) -> "LambdaSeries":
        """Drop everything below lambda^lowest and record it as the watermark."""
        k = _key(lowest)
        if self.lowest is not None and self.lowest > k:
            raise TruncationError("cannot lower the watermark by truncating")
        return LambdaSeries._raw(dict(self.coeffs), k, self.half_step)

    def reciprocal(self, depth) -> "LambdaSeries":
        """1/self, valid down to lambda^depth (or the inherited watermark, if higher)."""
        if not self.coeffs:
            raise NotInvertibleError("zero series")
        top = self.top_key()
        lead = self.coeffs[top]
        inv_lead = _invert_scalar(lead)
        target = _key(depth)
        if self.lowest is not None:
            # offsets beyond (top - lowest) are unknown in the input
            target = max(target, self.lowest - 2 * top)
        # normalized: self = lead*lambda^top*(1 + r), r in offsets d>0
        r = {top - k: c * inv_lead for k, c in self.coeffs.items() if k != top}
        max_off = -top - target
        y = {0: ONE}
        for d in range(1, max_off + 1):
            acc = ZERO
            for j, rc in r.items():
                if j <= d and (d - j) in y:
                    acc = acc + rc * y[d - j]
            if _nonzero(acc):
                y[d] = -acc
        data = {-top - d: c * inv_lead for d, c in y.items()}
        return LambdaSeries._raw(data, target, self.half_step)

    def __truediv__(self, other) -> "LambdaSeries":
        if not isinstance(other, LambdaSeries):
            return self.scale(_invert_scalar(other))
        depth_key = self.lowest if self.lowest is not None else None
        if depth_key is None:
            raise TruncationError("dividing an exact series needs div(a, b, depth)")
        return div(self, other, _exp(depth_key))

    def sqrt(self, depth=None) -> "LambdaSeries":
        """Square root with branch fixed by leading coefficient +1."""
        if not self.coeffs:
            raise NotInvertibleError("sqrt of zero series")
        top = self.top_key()
        if self.coeffs[top] != 1:
            raise NotInvertibleError("series_sqrt needs a monic leading term")
        if top % 2:
            raise ValueError("leading exponent must be an integer")
        half_top = top // 2
        if self.lowest is not None:
            target = self.lowest - half_top
            if depth is not None:
                target = max(target, _key(depth))
        else:
            if depth is None:
                raise TruncationError("sqrt of an exact series needs a depth")
            target = _key(depth)
        a = {top - k: c for k, c in self.coeffs.items()}
        max_off = half_top - target
        y: dict = {0: ONE}
        for d in range(1, max_off + 1):
            acc = a.get(d, ZERO)
            for i in range(1, d):
                if i in y and (d - i) in y:
                    acc = acc - y[i] * y[d - i]
            if _nonzero(acc):
                y[d] = acc * Q(1, 2)
        data = {half_top - d: c for d, c in y.items()}
        return LambdaSeries._raw(data, target, True)

    def residue(self):
        """Res at infinity, defined as minus the lambda^{-1} coefficient."""
        return -self[-1]

    def plus_part(self) -> "LambdaSeries":
        """[.]_{infinity,+}: the terms with non-negative integer exponent."""
        if self.lowest is not None and self.lowest > 0:
            raise TruncationError("polynomial part needs coefficients down to lambda^0")
        return LambdaSeries._raw({k: c for k, c in self.coeffs.items() if k >= 0 and k % 2 == 0}, None, False)

    def minus_part(self) -> "LambdaSeries":
        return LambdaSeries._raw({k: c for k, c in self.coeffs.items() if k < 0 or k % 2}, self.lowest, self.half_step)

    def d_lambda(self) -> "LambdaSeries":
        data = {}
        for k, c in self.coeffs.items():
            if k:
                data[k - 2] = c * _exp(k)
        return LambdaSeries._raw(data, None if self.lowest is None else self.lowest - 2, self.half_step)

    def map_coeffs(self, f: Callable) -> "LambdaSeries":
        return LambdaSeries._raw({k: f(c) for k, c in self.coeffs.items()}, self.lowest, self.half_step)

    def evaluate(self, x):
        """Value of an exact polynomial (non-negative integer exponents) at x."""
        if self.lowest is not None or any(k < 0 or k % 2 for k in self.coeffs):
            raise ValueError("evaluation needs an exact polynomial")
        total = ZERO
        for k, c in self.coeffs.items():
            total = total + c * x ** (k // 2)
        return total

    def poly_coeffs(self) -> list:
        """Ascending coefficient list of an exact polynomial."""
        if self.lowest is not None or any(k < 0 or k % 2 for k in self.coeffs):
            raise ValueError("not an exact polynomial")
        if not self.coeffs:
            return []
        n = self.top_key() // 2
        return [self.coeffs.get(2 * i, ZERO) for i in range(n + 1)]

    # -- comparison and text -----------------------------------------------

    def agrees_with(self, other: "LambdaSeries") -> bool:
        """Equal on every exponent both sides guarantee."""
        other = _lift(other)
        lowest = _min_water(self.lowest, other.lowest)
        keys = set(self.coeffs) | set(other.coeffs)
        for k in keys:
            if lowest is not None and k < lowest:
                continue
            if self.coeffs.get(k, ZERO) != other.coeffs.get(k, ZERO):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaSeries):
            other = _lift(other)
        return self.lowest == other.lowest and self.coeffs == other.coeffs

    __hash__ = None

    def canonical(self) -> str:
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            ctext = c.canonical() if isinstance(c, MultiPoly) else rational_text(c)
            parts.append(f"{rational_text(_exp(k))}:{ctext}")
        tail = "" if self.lowest is None else f" | valid>={rational_text(_exp(self.lowest))}"
        return "[" + ", ".join(parts) + "]" + tail

    def __str__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for k in sorted(self.coeffs, reverse=True):
                c = self.coeffs[k]
                e = _exp(k)
                ctext = str(c) if not isinstance(c, MultiPoly) or len(c.terms) == 1 else f"({c})"
                if e == 0:
                    parts.append(ctext)
                else:
                    pw = "lam" if e == 1 else f"lam^{rational_text(e)}"
                    parts.append(pw if ctext == "1" else f"{ctext}*{pw}")
            body = " + ".join(parts)
        if self.lowest is not None:
            body += f"  [exact down to lam^{rational_text(_exp(self.lowest))}]"
        return body

    def __repr__(self) -> str:
        return f"LambdaSeries({self})"

    def latex(self) -> str:
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            e = _exp(k)
            ctext = c.latex() if isinstance(c, MultiPoly) else str(c)
            if e == 0:
                parts.append(ctext)
                continue
            pw = "\\lambda" if e == 1 else f"\\lambda^{{{rational_text(e)}}}"
            if ctext == "1":
                parts.append(pw)
            elif isinstance(c, MultiPoly) and len(c.terms) > 1:
                parts.append(f"\\left({ctext}\\right){pw}")
            else:
                parts.append(f"{ctext}{pw}")
        s = " + ".join(parts) if parts else "0"
        return s.replace("+ -", "- ")


def _invert_scalar(c):
    if isinstance(c, MultiPoly):
        c = c.to_rational() if c.is_constant() else None
        if c is None:
            raise NotInvertibleError("leading coefficient is not an invertible constant")
    c = Q(c)
    if not c:
        raise NotInvertibleError("zero leading coefficient")
    return 1 / c


def _lift(x) -> LambdaSeries:
    if isinstance(x, LambdaSeries):
        return x
    return LambdaSeries({0: x})


def lam(power=1) -> LambdaSeries:
    return LambdaSeries({power: ONE})


def div(a: LambdaSeries, b: LambdaSeries, depth) -> LambdaSeries:
    """a/b with the result valid down to lambda^depth when inputs allow."""
    a = _lift(a)
    if not a.coeffs:
        return LambdaSeries._raw({}, _key(depth), False)
    ta = a.top_key()
    inv_depth = _exp(_key(depth) - ta)
    result = a * b.reciprocal(inv_depth)
    if result.lowest is not None and result.lowest < _key(depth):
        result = result.truncate(_exp(_key(depth)))
    return result


def series_sqrt(a: LambdaSeries, depth=None) -> LambdaSeries:
    return a.sqrt(depth)


def residue_at_infinity(a: LambdaSeries):
    return a.residue()


def poly_divmod(a: LambdaSeries, b: LambdaSeries) -> tuple:
    """(quotient, remainder) of exact polynomials with b monic."""
    qc = a.poly_coeffs()
    bc = b.poly_coeffs()
    if not bc or bc[-1] != 1:
        raise NotInvertibleError("poly_divmod needs a monic divisor")
    n = len(bc) - 1
    rem = list(qc)
    quot: dict = {}
    for top in range(len(rem) - 1, n - 1, -1):
        c = rem[top]
        if not _nonzero(c):
            continue
        quot[top - n] = c
        for i, bi in enumerate(bc):
            if _nonzero(bi):
                rem[top - n + i] = rem[top - n + i] - c * bi
    return LambdaSeries(quot), LambdaSeries({i: c for i, c in enumerate(rem[:n])})

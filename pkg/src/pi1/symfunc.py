"""Elementary, complete homogeneous and power-sum symmetric polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Sequence

from .exact import ONE, ZERO, Q


@dataclass(frozen=True)
class SymBasisVector:
    kind: str  # "e", "h" or "S"
    n: int
    values: tuple

    def __getitem__(self, k: int):
        if k < 0:
            return ZERO
        if self.kind == "e" and k > self.n:
            return ZERO
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


def _prod(items, one=ONE):
    out = one
    for it in items:
        out = out * it
    return out


def e_from_roots(x: Sequence) -> SymBasisVector:
    """e_0..e_n of the given roots, by expanding prod (1 + x_j T)."""
    e = [ONE]
    for xj in x:
        nxt = list(e) + [ZERO]
        for k in range(len(e), 0, -1):
            nxt[k] = nxt[k] + e[k - 1] * xj
        e = nxt
    return SymBasisVector("e", len(x), tuple(e))


def e_brute(x: Sequence, k: int):
    """Definitional e_k: sum over k-subsets."""
    return sum((_prod(c) for c in combinations(x, k)), ZERO) if k else ONE


def compositions(k: int, max_part: int | None = None):
    """Ordered tuples of positive integers summing to k."""
    if k == 0:
        yield ()
        return
    top = k if max_part is None else min(k, max_part)
    for first in range(1, top + 1):
        for rest in compositions(k - first, max_part):
            yield (first,) + rest


def h_from_e(e: SymBasisVector, k_max: int) -> SymBasisVector:
    """h_k = sum_j (-1)^j sum over compositions of k into j parts of prod (-1)^b e_b."""
    if e.kind != "e":
        raise ValueError("h_from_e needs an elementary basis vector")
    h = [ONE]
    for k in range(1, k_max + 1):
        total = ZERO
        for comp in compositions(k, e.n):
            term = ONE if len(comp) % 2 == 0 else -ONE
            for b in comp:
                term = term * (e[b] if b % 2 == 0 else -e[b])
            total = total + term
        h.append(total)
    return SymBasisVector("h", e.n, tuple(h))


def _weak_partitions(m: int, n: int):
    """Vectors (b_1..b_n) with sum i*b_i = m."""

    def rec(i, remaining):
        if i > n:
            if remaining == 0:
                yield ()
            return
        for b in range(remaining // i + 1):
            for rest in rec(i + 1, remaining - i * b):
                yield (b,) + rest

    yield from rec(1, m)


def powersum_from_e(e: SymBasisVector, m_max: int) -> SymBasisVector:
    """Power sums through the multinomial closed form in the e_k."""
    if e.kind != "e":
        raise ValueError("powersum_from_e needs an elementary basis vector")
    n = e.n
    out = [Q(n)]
    for m in range(1, m_max + 1):
        total = ZERO
        for b in _weak_partitions(m, n):
            s = sum(b)
            multinom = factorial(s)
            for bi in b:
                multinom //= factorial(bi)
            coeff = Q((-1) ** s * multinom, s)
            term = coeff
            for i, bi in enumerate(b, start=1):
                if bi:
                    term = term * e[i] ** bi
            total = total + term
        out.append(total * ((-1) ** m * m))
    return SymBasisVector("S", n, tuple(out))


def powersum_brute(x: Sequence, m: int):
    return sum((xj ** m for xj in x), ZERO) if m else Q(len(x))


def h_brute(x: Sequence, k: int):
    """Definitional h_k: sum over multisets of size k."""
    from itertools import combinations_with_replacement

    if k == 0:
        return ONE
    return sum((_prod(c) for c in combinations_with_replacement(x, k)), ZERO)


def newton_e_identity(e: SymBasisVector, S: SymBasisVector, k: int):
    """Residual of (n-k) e_k = sum_{i=0}^k (-1)^i e_{k-i} S_i (k <= n)."""
    rhs = ZERO
    for i in range(k + 1):
        term = e[k - i] * S[i]
        rhs = rhs + (term if i % 2 == 0 else -term)
    return e[k] * (e.n - k) - rhs


def newton_S_identity(e: SymBasisVector, S: SymBasisVector, k: int):
    """Residual of S_k = sum_{i=k-n}^{k-1} (-1)^{k-1+i} e_{k-i} S_i (k >= n)."""
    rhs = ZERO
    for i in range(k - e.n, k):
        term = e[k - i] * S[i]
        rhs = rhs + (term if (k - 1 + i) % 2 == 0 else -term)
    return S[k] - rhs

"""Counting and enumeration primitives.

Falling factorials, generalized binomials, weighted compositions, set
partitions (restricted-growth order), multiset partitions induced by set
partitions, and equivalence-class counting for multiset partitions.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

__all__ = [
    "falling_factorial",
    "gen_binomial",
    "stirling2",
    "OrderedMultiset",
    "SetPartition",
    "MultisetPartition",
    "Composition",
    "compositions",
    "set_partitions",
    "multiset_partitions",
    "count_equivalent",
]


def falling_factorial(x, k: int):
    """Return ``x (x-1) ... (x-k+1)``; the empty product (k=0) is 1.

    ``x`` may be anything supporting ``-`` with ints and ``*``: ints,
    Fractions, complex numbers, mpmath numbers or LaurentPoly values.
    """
    if k < 0:
        raise ValueError(f"falling factorial needs k >= 0, got {k}")
    result = 1
    for i in range(k):
        result = (x - i) * result
    return result


def gen_binomial(x, m: int):
    """Generalized binomial ``(x)_m / m!``, defined as 0 for negative ``m``."""
    if m < 0:
        return 0
    ff = falling_factorial(x, m)
    f = math.factorial(m)
    if f == 1:
        return ff
    if isinstance(ff, int):
        return Fraction(ff, f)
    return ff * Fraction(1, f)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind by the standard recurrence."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@dataclass(frozen=True)
class OrderedMultiset:
    """An ordered multiset ``I`` of ``[1, d]``."""

    entries: tuple[int, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if self.d < 1:
            raise ValueError("ambient size d must be >= 1")
        for e in self.entries:
            if not 1 <= e <= self.d:
                raise ValueError(f"entry {e} outside [1, {self.d}]")

    @classmethod
    def from_multiplicities(cls, n: Sequence[int]) -> "OrderedMultiset":
        """Sorted multiset with ``n[i-1]`` copies of ``i``."""
        entries = tuple(i + 1 for i, ni in enumerate(n) for _ in range(ni))
        return cls(entries, len(n))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def multiplicity(self, n: int) -> int:
        return sum(1 for e in self.entries if e == n)

    def multiplicities(self) -> tuple[int, ...]:
        counts = Counter(self.entries)
        return tuple(counts.get(i, 0) for i in range(1, self.d + 1))

    def remove(self, h: int) -> "OrderedMultiset":
        """``I(h^)``: drop the element at 0-based position ``h``."""
        return OrderedMultiset(self.entries[:h] + self.entries[h + 1:], self.d)

    def sorted(self) -> "OrderedMultiset":
        return OrderedMultiset(tuple(sorted(self.entries)), self.d)


@dataclass(frozen=True)
class SetPartition:
    """Partition of ``[1, N]`` into blocks ordered by their minima."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(p)) for p in self.parts)
        if any(len(p) == 0 for p in parts):
            raise ValueError("blocks must be non-empty")
        if [p[0] for p in parts] != sorted(p[0] for p in parts):
            raise ValueError("blocks must be ordered by their minima")
        flat = sorted(e for p in parts for e in p)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError("blocks must be disjoint and cover [1, N]")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.parts)


@dataclass(frozen=True)
class MultisetPartition:
    """The image ``J`` of a set partition under an ordered multiset ``I``."""

    parts: tuple[OrderedMultiset, ...]

    @classmethod
    def induced(cls, I: OrderedMultiset, s: SetPartition) -> "MultisetPartition":
        if s.size != len(I):
            raise ValueError("set partition size does not match |I|")
        return cls(tuple(OrderedMultiset(tuple(I[j - 1] for j in block), I.d) for block in s.parts))

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def d(self) -> int:
        return self.parts[0].d

    def signature(self) -> tuple[tuple[int, ...], ...]:
        """Sorted multiplicity vectors of the parts; equal iff equivalent."""
        return tuple(sorted(p.multiplicities() for p in self.parts))


@dataclass(frozen=True)
class Composition:
    """Finite-support sequence ``(mu_1, mu_2, ...)`` stored densely."""

    mu: tuple[int, ...]

    def __post_init__(self):
        mu = tuple(int(m) for m in self.mu)
        if any(m < 0 for m in mu):
            raise ValueError("composition parts must be non-negative")
        while mu and mu[-1] == 0:
            mu = mu[:-1]
        object.__setattr__(self, "mu", mu)

    def __getitem__(self, i: int) -> int:
        """1-based access; zero beyond the stored support."""
        if i < 1:
            raise IndexError("compositions are indexed from 1")
        return self.mu[i - 1] if i <= len(self.mu) else 0

    @property
    def total(self) -> int:
        return sum(self.mu)

    @property
    def weight(self) -> int:
        """``sum_{i >= 2} (i-1) mu_i``."""
        return sum((i - 1) * m for i, m in enumerate(self.mu, start=1))

    @property
    def tail(self) -> int:
        """``sum_{i >= 2} mu_i``."""
        return sum(self.mu[1:])


def compositions(r: int, weight_bound: int) -> list[Composition]:
    """All ``mu`` with ``sum mu_i = r`` and weight at most ``weight_bound``.

    Ordered lexicographically on ``(mu_2, mu_3, ...)``. A part at index
    ``i >= 2`` costs ``i - 1`` weight, so indices stop at ``weight_bound + 1``.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if weight_bound < 0:
        return []
    top = weight_bound + 1
    out: list[Composition] = []

    def rec(i: int, remaining: int, budget: int, acc: list[int]):
        if i > top:
            out.append(Composition((remaining, *acc)))
            return
        for m in range(0, min(remaining, budget // (i - 1)) + 1):
            acc.append(m)
            rec(i + 1, remaining - m, budget - m * (i - 1), acc)
            acc.pop()

    rec(2, r, weight_bound, [])
    return out


def _restricted_growth(N: int, k: int) -> Iterator[tuple[int, ...]]:
    # a[0] = 0, a[j] <= 1 + max(a[:j]), exactly k distinct labels
    a = [0] * N

    def rec(j: int, mx: int):
        if N - j < k - 1 - mx:
            return
        if j == N:
            if mx == k - 1:
                yield tuple(a)
            return
        for v in range(min(mx + 1, k - 1) + 1):
            a[j] = v
            yield from rec(j + 1, max(mx, v))

    if N == 0:
        return
    yield from rec(1, 0)


def set_partitions(N: int, k: int) -> list[SetPartition]:
    """Partitions of ``[1, N]`` into ``k`` blocks, in restricted-growth order."""
    if N < 1 or k < 1:
        raise ValueError("set_partitions needs N >= 1 and k >= 1")
    if k > N:
        return []
    out = []
    for rgs in _restricted_growth(N, k):
        blocks: list[list[int]] = [[] for _ in range(k)]
        for pos, label in enumerate(rgs, start=1):
            blocks[label].append(pos)
        out.append(SetPartition(tuple(tuple(b) for b in blocks)))
    return out


def multiset_partitions(I: OrderedMultiset, k: int) -> list[MultisetPartition]:
    """``Parts(I, k)``: one multiset partition per set partition of positions."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(I) == 0 or k > len(I):
        return []
    return [MultisetPartition.induced(I, s) for s in set_partitions(len(I), k)]


def count_equivalent(J: MultisetPartition) -> int:
    """Number of members of ``Parts(I, k)`` equivalent to ``J``.

    ``I`` is any ordered multiset whose multiplicities match the
    concatenation of the parts of ``J``; the count does not depend on order.
    """
    d = J.d
    total = [0] * d
    for part in J.parts:
        for i, m in enumerate(part.multiplicities()):
            total[i] += m
    num = 1
    for t in total:
        num *= math.factorial(t)
    den = 1
    for part in J.parts:
        for m in part.multiplicities():
            den *= math.factorial(m)
    for b in Counter(J.signature()).values():
        den *= math.factorial(b)
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("equivalence count is not an integer")
    return q

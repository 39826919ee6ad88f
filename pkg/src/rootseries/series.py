"""Taylor coefficients of a perturbed simple zero.

The zero ``phi(a)`` of ``f(z) = g(z) + sum_i a_i z**gamma_i`` with
``phi(0) = alpha`` is expanded three ways:

* :func:`phi_coeff` -- the closed form ``F(sum gamma, |I|-1, 1)``;
* :func:`phi_coeff_oracle` -- repeated implicit differentiation of
  ``f(phi(a)) = 0``, solved order by order for the top derivative;
* :func:`phi_coeff_twoterm` -- the product formula valid for the base
  ``g(z) = 1 + b z**beta``.

Every routine works in two modes selected by the :class:`BaseFunction`:
numeric (mpmath context at the base's precision, ``alpha`` a
:class:`BranchPoint`) or exact (Laurent polynomials over the rationals,
``alpha`` a ring symbol).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .branch import BranchPoint, branch_pow, branch_pow_near, get_context, to_num
from .combinatorics import (
    OrderedMultiset,
    compositions,
    falling_factorial,
    gen_binomial,
    multiset_partitions,
)
from .symbolic import AlphaScaled, LaurentPoly, Ring, coeff_ring

__all__ = [
    "TwoTerm",
    "BaseFunction",
    "Perturbation",
    "MultiIndex",
    "multi_indices",
    "F_eval",
    "phi_coeff",
    "phi_coeff_oracle",
    "phi_coeff_twoterm",
    "taylor_coeff",
    "series_coefficients",
    "series_eval",
    "base_from_twoterm",
    "MAX_PARTS_SIZE",
]

MAX_PARTS_SIZE = 10


@dataclass(frozen=True)
class TwoTerm:
    """Closed form ``g(z) = 1 + b z**beta``."""

    b: object
    beta: object


@dataclass(frozen=True)
class BaseFunction:
    """Base function with simple zero ``alpha`` and coefficients ``c_1..c_K``.

    ``coeffs[k-1]`` is ``c_k``; coefficients past ``K`` are zero. In exact
    mode ``ring`` is set and ``alpha`` is the ring's ``alpha`` symbol (or a
    rational power of it); in numeric mode ``alpha`` is a :class:`BranchPoint`.
    """

    coeffs: tuple
    alpha: object
    ring: Ring | None = None
    prec: int = 53
    closed_form: TwoTerm | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("a base function needs at least c1")
        if self.coeffs[0] == 0:
            raise ValueError("c1 must be nonzero (alpha must be a simple zero)")
        if self.ring is None and not isinstance(self.alpha, BranchPoint):
            raise TypeError("numeric base functions need alpha as a BranchPoint")

    @property
    def mode(self) -> str:
        return "exact" if self.ring is not None else "numeric"

    @property
    def K(self) -> int:
        return len(self.coeffs)

    @classmethod
    def numeric(cls, alpha, coeffs: Sequence, prec: int = 53, closed_form=None) -> "BaseFunction":
        ctx = get_context(prec)
        if not isinstance(alpha, BranchPoint):
            alpha = BranchPoint.from_complex(alpha, ctx=ctx)
        return cls(tuple(to_num(ctx, c) for c in coeffs), alpha, None, prec, closed_form)

    @classmethod
    def symbolic(cls, K: int, indeterminates: Iterable[str] = ()) -> "BaseFunction":
        """Formal base: ``c_k`` are the ring symbols ``c1..cK``."""
        ring = coeff_ring(K, indeterminates)
        return cls(tuple(ring.gen(f"c{k}") for k in range(1, K + 1)), ring.gen("alpha"), ring)

    @classmethod
    def exact(cls, coeffs: Sequence, ring: Ring | None = None, alpha: LaurentPoly | None = None) -> "BaseFunction":
        """Exact base with given coefficients (rationals or ring elements)."""
        if ring is None:
            ring = next((c.ring for c in coeffs if isinstance(c, LaurentPoly)), None) or Ring(("alpha",))
        cs = tuple(c if isinstance(c, LaurentPoly) else ring.const(c) for c in coeffs)
        return cls(cs, ring.gen("alpha") if alpha is None else alpha, ring)

    @classmethod
    def from_polynomial(cls, poly: Sequence, alpha, prec: int = 53, tol: float = 1e-9) -> "BaseFunction":
        """Base ``g(z) = sum_j poly[j] z**j`` re-expanded about its zero ``alpha``."""
        ctx = get_context(prec)
        p = [to_num(ctx, c) for c in poly]
        if not isinstance(alpha, BranchPoint):
            alpha = BranchPoint.from_complex(alpha, ctx=ctx)
        a = alpha.value(ctx)
        deg = len(p) - 1
        coeffs = []
        for k in range(0, deg + 1):
            coeffs.append(sum(math.comb(j, k) * p[j] * a ** (j - k) for j in range(k, deg + 1)))
        scale = max(1, *(abs(c) for c in p))
        if abs(coeffs[0]) > tol * scale:
            raise ValueError(f"alpha is not a zero of the polynomial (residual {abs(coeffs[0])})")
        return cls(tuple(coeffs[1:]), alpha, None, prec)

    def c(self, k: int):
        if k < 1:
            raise ValueError("coefficients are indexed from 1")
        if k <= len(self.coeffs):
            return self.coeffs[k - 1]
        return self.ring.zero if self.ring is not None else 0

    def context(self):
        return get_context(self.prec)

    def g(self, z):
        """Value and derivative of ``g`` at a complex ``z`` near ``alpha``."""
        if self.ring is not None:
            raise TypeError("exact base functions are not evaluable at points")
        ctx = self.context()
        z = to_num(ctx, z)
        if self.closed_form is not None:
            b = to_num(ctx, self.closed_form.b)
            beta = to_num(ctx, self.closed_form.beta)
            zb = branch_pow_near(z, self.alpha, beta, ctx)
            return 1 + b * zb, b * beta * zb / z
        w = z - self.alpha.value(ctx)
        val = 0
        der = 0
        for k in range(len(self.coeffs), 0, -1):
            der = der * w + k * self.coeffs[k - 1]
            val = val * w + self.coeffs[k - 1]
        return val * w, der


@dataclass(frozen=True)
class Perturbation:
    """Exponents ``gamma_1..gamma_d`` of ``sum_i a_i z**gamma_i``."""

    gammas: tuple

    def __post_init__(self):
        g = tuple(self.gammas)
        if len(g) < 1:
            raise ValueError("need at least one perturbation term")
        for x in g:
            if isinstance(x, float) and not math.isfinite(x):
                raise ValueError("gammas must be finite")
        object.__setattr__(self, "gammas", g)

    @property
    def d(self) -> int:
        return len(self.gammas)

    def is_rational(self) -> bool:
        return all(isinstance(x, Rational) for x in self.gammas)

    def scaled(self, factor) -> "Perturbation":
        return Perturbation(tuple(factor * x for x in self.gammas))


@dataclass(frozen=True)
class MultiIndex:
    """A d-tuple ``n`` of non-negative integers."""

    n: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(x) for x in self.n)
        if any(x < 0 for x in n):
            raise ValueError("multi-index entries must be non-negative")
        object.__setattr__(self, "n", n)

    @property
    def total(self) -> int:
        return sum(self.n)

    @property
    def d(self) -> int:
        return len(self.n)

    def multiset(self) -> OrderedMultiset:
        return OrderedMultiset.from_multiplicities(self.n)

    def factorial(self) -> int:
        return math.prod(math.factorial(x) for x in self.n)


def multi_indices(d: int, max_order: int, min_order: int = 1) -> list[MultiIndex]:
    """Multi-indices with ``min_order <= sum n <= max_order`` in graded-lex order.

    Lower total degree first; within a degree, lexicographically
    decreasing, so ``(1, 0)`` precedes ``(0, 1)``.
    """

    def rec(slots: int, total: int):
        if slots == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in rec(slots - 1, total - first):
                yield (first, *rest)

    return [MultiIndex(t) for s in range(min_order, max_order + 1) for t in rec(d, s)]


def _as_multiset(I, d: int | None = None) -> OrderedMultiset:
    if isinstance(I, OrderedMultiset):
        return I
    if isinstance(I, MultiIndex):
        return I.multiset()
    entries = tuple(I)
    return OrderedMultiset(entries, d if d is not None else max(entries, default=1))


# arithmetic domains ------------------------------------------------------------


class _Exact:
    def __init__(self, base: BaseFunction):
        self.base = base
        self.ring = base.ring
        self.zero = base.ring.zero
        self.one = base.ring.one
        self.alpha = base.alpha
        self._c1inv = base.coeffs[0].inverse()

    def num(self, x):
        if isinstance(x, (LaurentPoly, Rational)):
            return x
        raise TypeError(f"exact mode needs rational exponents, got {x!r}")

    def alpha_pow(self, x):
        return self.alpha ** Fraction(x)

    def alpha_int_pow(self, m: int):
        return self.alpha ** m

    def c(self, k: int):
        return self.base.c(k)

    def c1inv_pow(self, m: int):
        return self._c1inv ** m

    def div_c1(self, v):
        return v * self._c1inv


class _Numeric:
    def __init__(self, base: BaseFunction):
        self.base = base
        self.ctx = ctx = base.context()
        self.zero = ctx.mpc(0)
        self.one = ctx.mpc(1)
        self.alpha_bp = base.alpha
        self.alpha_val = base.alpha.value(ctx)
        self._c1 = base.coeffs[0]

    def num(self, x):
        return to_num(self.ctx, x)

    def alpha_pow(self, x):
        return branch_pow(self.alpha_bp, x, self.ctx)

    def alpha_int_pow(self, m: int):
        return self.alpha_val ** m

    def c(self, k: int):
        return self.base.c(k)

    def c1inv_pow(self, m: int):
        return self._c1 ** (-m)

    def div_c1(self, v):
        return v / self._c1


def _domain(base: BaseFunction):
    return _Exact(base) if base.mode == "exact" else _Numeric(base)


# closed form -------------------------------------------------------------------


def _F_reduced(x, r: int, a: int, dom):
    """``F(x, r, a) / alpha**x``."""
    total = dom.zero
    for mu in compositions(r, r - (a - 1)):
        m = r - mu.weight - (a - 1)
        S = mu.tail
        term = gen_binomial(x, m) * math.factorial(r + S)
        if mu[1] % 2:
            term = -term
        term = term * dom.alpha_int_pow(-m) * dom.c1inv_pow(r + 1 + S)
        for i in range(2, len(mu.mu) + 1):
            if mu[i]:
                term = term * dom.c(i) ** mu[i] * Fraction(1, math.factorial(mu[i]))
        total = total + term
    return total * Fraction(-1, math.factorial(a - 1))


def F_eval(x, r: int, a: int, base: BaseFunction):
    """``F(x, r, a)``: the closed-form sum over compositions of ``r``.

    ``x`` may be a number, or in exact mode a polynomial in pure
    indeterminates, in which case an :class:`AlphaScaled` is returned.
    """
    if a < 1:
        raise ValueError("F needs a >= 1")
    if r < -1:
        raise ValueError("F needs r >= -1")
    dom = _domain(base)
    if r == -1:
        return dom.zero
    if isinstance(x, LaurentPoly):
        if base.mode != "exact":
            raise TypeError("indeterminate x needs an exact base")
        return AlphaScaled(x, _F_reduced(x, r, a, dom))
    x = dom.num(x)
    return dom.alpha_pow(x) * _F_reduced(x, r, a, dom)


def _exponent_sum(entries, pert: Perturbation, dom):
    x = 0
    for e in entries:
        x = x + pert.gammas[e - 1]
    return dom.num(x) if isinstance(dom, _Numeric) else Fraction(x) if isinstance(x, Rational) else x


def phi_coeff(I, pert: Perturbation, base: BaseFunction):
    """Mixed partial ``d(phi, I)`` at ``a = 0`` via ``F(sum gamma, |I|-1, 1)``."""
    I = _as_multiset(I, pert.d)
    if len(I) == 0:
        raise ValueError("phi_coeff needs |I| >= 1")
    if I.d != pert.d:
        raise ValueError("multiset ambient size does not match the perturbation")
    return _phi_coeff_cached(tuple(sorted(I.entries)), pert, base)


@lru_cache(maxsize=4096)
def _phi_coeff_cached(key, pert, base):
    dom = _domain(base)
    x = _exponent_sum(key, pert, dom)
    return dom.alpha_pow(x) * _F_reduced(x, len(key) - 1, 1, dom)


# recursive oracle --------------------------------------------------------------


@lru_cache(maxsize=None)
def _grouped_parts(key: tuple[int, ...], k: int) -> tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]:
    """``Parts(I, k)`` grouped by the sorted tuple of sorted parts, with counts."""
    if len(key) > MAX_PARTS_SIZE:
        raise ValueError(f"multiset partitions are capped at |I| <= {MAX_PARTS_SIZE}")
    d = max(key)
    counts: Counter = Counter()
    for J in multiset_partitions(OrderedMultiset(key, d), k):
        counts[tuple(sorted(tuple(sorted(p.entries)) for p in J.parts))] += 1
    return tuple(sorted((c, parts) for parts, c in counts.items()))


def _oracle(key: tuple[int, ...], pert, dom, memo: dict | None):
    if memo is not None:
        hit = memo.get(key)
        if hit is not None:
            return hit
    N = len(key)
    gam = pert.gammas
    total = dom.zero
    if N == 1:
        total = dom.alpha_pow(dom.num(gam[key[0] - 1]))
    else:

        def parts_sum(k_key, k):
            s = dom.zero
            for count, parts in _grouped_parts(k_key, k):
                prod = count
                for p in parts:
                    prod = prod * _oracle(p, pert, dom, memo)
                s = s + prod
            return s

        # a_{I(h)} z**gamma_{I(h)}: the a-derivative is spent, the rest hit z**gamma
        for v, mult in sorted(Counter(key).items()):
            rest = list(key)
            rest.remove(v)
            rest = tuple(rest)
            gv = dom.num(gam[v - 1])
            inner = dom.zero
            for k in range(1, N):
                coef = falling_factorial(gv, k) * dom.alpha_pow(gv - k)
                inner = inner + coef * parts_sum(rest, k)
            total = total + inner * mult
        # g(z): g^(k)(alpha) = k! c_k
        for k in range(2, N + 1):
            ck = dom.c(k)
            if not ck:
                continue
            total = total + parts_sum(key, k) * (ck * math.factorial(k))
    value = -dom.div_c1(total)
    if memo is not None:
        memo.setdefault(key, value)
    return value


def phi_coeff_oracle(I, pert: Perturbation, base: BaseFunction, memo: dict | None = None, use_memo: bool = True):
    """``d(phi, I)`` by implicit differentiation, without using ``F``.

    ``memo`` may be shared across calls with the same ``(pert, base)``;
    ``use_memo=False`` recomputes every sub-derivative from scratch.
    """
    I = _as_multiset(I, pert.d)
    if len(I) == 0:
        raise ValueError("phi_coeff_oracle needs |I| >= 1")
    if I.d != pert.d:
        raise ValueError("multiset ambient size does not match the perturbation")
    dom = _domain(base)
    if use_memo and memo is None:
        memo = {}
    return _oracle(tuple(sorted(I.entries)), pert, dom, memo if use_memo else None)


# two-term base -----------------------------------------------------------------


def phi_coeff_twoterm(n, pert: Perturbation, b, beta, alpha, prec: int = 53):
    """``d_n phi`` at 0 for ``g(z) = 1 + b z**beta`` by the product formula.

    ``alpha`` is a :class:`BranchPoint` (numeric) or a monomial ``alpha**q``
    in a :class:`Ring` (exact, with rational ``beta`` and ``gammas``).
    """
    n = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    if n.d != pert.d:
        raise ValueError("multi-index length does not match the perturbation")
    N = n.total
    if N < 1:
        raise ValueError("need sum(n) >= 1")
    if beta == 0 or (not isinstance(b, LaurentPoly) and b == 0):
        raise ValueError("b and beta must be nonzero")
    if isinstance(alpha, BranchPoint):
        ctx = get_context(prec)
        b_, beta_ = to_num(ctx, b), to_num(ctx, beta)
        s = sum((ni * to_num(ctx, g) for ni, g in zip(n.n, pert.gammas)), ctx.mpf(0))
        gprime = b_ * beta_ * branch_pow(alpha, beta_ - 1, ctx)
        lead = branch_pow(alpha, 1 + s - N, ctx)
        prod = ctx.mpc(1)
        for i in range(1, N):
            prod *= -1 + i * beta_ - s
        return -lead / gprime ** N * prod
    if not isinstance(alpha, LaurentPoly):
        raise TypeError("alpha must be a BranchPoint or a ring monomial")
    beta = Fraction(beta)
    s = sum((ni * Fraction(g) for ni, g in zip(n.n, pert.gammas)), Fraction(0))
    gprime = (alpha ** (beta - 1)) * b * beta
    prod = Fraction(1)
    for i in range(1, N):
        prod *= -1 + i * beta - s
    return -(alpha ** (1 + s - N)) * gprime.inverse() ** N * prod


def base_from_twoterm(b, beta, alpha, K: int, prec: int = 53, check_zero: bool = True, tol: float = 1e-9) -> BaseFunction:
    """Coefficients ``c_k = b binom(beta, k) alpha**(beta - k)`` of ``1 + b z**beta``."""
    if beta == 0:
        raise ValueError("beta must be nonzero")
    if K < 1:
        raise ValueError("K must be >= 1")
    if isinstance(alpha, BranchPoint):
        ctx = get_context(prec)
        b_, beta_ = to_num(ctx, b), to_num(ctx, beta)
        if b_ == 0:
            raise ValueError("b must be nonzero")
        ab = b_ * branch_pow(alpha, beta_, ctx)
        if check_zero and abs(1 + ab) > tol * max(1, abs(ab)):
            raise ValueError(f"alpha is not a zero of 1 + b z**beta (residual {abs(1 + ab)})")
        coeffs = [b_ * gen_binomial(beta_, k) * branch_pow(alpha, beta_ - k, ctx) for k in range(1, K + 1)]
        return BaseFunction(tuple(coeffs), alpha, None, prec, TwoTerm(b, beta))
    if not isinstance(alpha, LaurentPoly):
        raise TypeError("alpha must be a BranchPoint or a ring monomial")
    ring = alpha.ring
    beta = Fraction(beta)
    b = b if isinstance(b, LaurentPoly) else ring.const(b)
    if not b:
        raise ValueError("b must be nonzero")
    if check_zero and (b * alpha ** beta + 1):
        raise ValueError("alpha is not a zero of 1 + b z**beta")
    coeffs = tuple(b * gen_binomial(beta, k) * alpha ** (beta - k) for k in range(1, K + 1))
    return BaseFunction(coeffs, alpha, ring)


# assembled series --------------------------------------------------------------


def taylor_coeff(n, pert: Perturbation, base: BaseFunction, engine: str = "closed"):
    """``d_n phi / prod n_i!`` -- the coefficient of ``prod a_i**n_i``."""
    n = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    if n.total < 1:
        raise ValueError("the constant term is alpha; taylor_coeff needs sum(n) >= 1")
    if engine == "closed":
        v = phi_coeff(n.multiset(), pert, base)
    elif engine == "oracle":
        v = phi_coeff_oracle(n.multiset(), pert, base)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return v * Fraction(1, n.factorial())


def series_coefficients(pert: Perturbation, base: BaseFunction, order: int, engine: str = "closed") -> dict:
    """``{MultiIndex: taylor_coeff}`` for ``1 <= sum n <= order``, graded-lex."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return {n: taylor_coeff(n, pert, base, engine) for n in multi_indices(pert.d, order)}


def series_eval(a: Sequence, order: int, pert: Perturbation, base: BaseFunction, coeffs: dict | None = None):
    """Truncated series ``alpha + sum_{1 <= |n| <= order} coeff_n a**n``."""
    if base.mode != "numeric":
        raise TypeError("series_eval needs a numeric base function")
    if len(a) != pert.d:
        raise ValueError(f"expected {pert.d} perturbation values, got {len(a)}")
    ctx = base.context()
    a = [to_num(ctx, x) for x in a]
    if coeffs is None:
        coeffs = series_coefficients(pert, base, order)
    total = base.alpha.value(ctx)
    for n, c in coeffs.items():
        if n.total > order:
            continue
        term = c
        for ai, ni in zip(a, n.n):
            if ni:
                term = term * ai ** ni
        total = total + term
    return total

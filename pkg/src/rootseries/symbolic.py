"""Exact multivariate Laurent polynomials over the rationals.

A :class:`Ring` fixes an ordered symbol table. Polynomials built in the
same ring combine freely; mixing rings raises :class:`RingMismatchError`.
By default ``alpha`` and ``c1`` may carry negative exponents and ``alpha``
may also carry rational exponents (needed for ``alpha**gamma`` with
rational ``gamma``); every other symbol is an ordinary polynomial variable.
"""
from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "Ring",
    "LaurentPoly",
    "AlphaScaled",
    "RingMismatchError",
    "poly_add",
    "poly_mul",
    "poly_eval",
    "is_integral",
    "coeff_ring",
]


class RingMismatchError(ValueError):
    """Operands live in rings with different symbol tables."""


def _norm(e):
    if type(e) is int:
        return e
    e = Fraction(e)
    return e.numerator if e.denominator == 1 else e


@dataclass(frozen=True)
class Ring:
    symbols: tuple[str, ...]
    invertible: frozenset = frozenset({"alpha", "c1"})
    fractional: frozenset = frozenset({"alpha"})
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbol names")
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        object.__setattr__(self, "fractional", frozenset(self.fractional))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"symbol {name!r} not in ring {self.symbols}") from None

    @property
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    @property
    def one(self) -> "LaurentPoly":
        return self.const(1)

    def const(self, value) -> "LaurentPoly":
        value = Fraction(value)
        if value == 0:
            return self.zero
        return LaurentPoly(self, {(0,) * len(self.symbols): value})

    def gen(self, name: str) -> "LaurentPoly":
        return self.monomial(1, **{name: 1})

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(self.gen(s) for s in self.symbols)

    def monomial(self, coeff=1, **exps) -> "LaurentPoly":
        key = [0] * len(self.symbols)
        for name, e in exps.items():
            key[self.index(name)] = _norm(e)
        return LaurentPoly(self, {tuple(key): Fraction(coeff)}, check=True)

    def check_exponents(self, key: tuple) -> None:
        for s, e in zip(self.symbols, key):
            if type(e) is not int and s not in self.fractional:
                raise ValueError(f"symbol {s!r} cannot take the rational exponent {e}")
            if e < 0 and s not in self.invertible:
                raise ValueError(f"symbol {s!r} cannot take the negative exponent {e}")


def coeff_ring(K: int, indeterminates: Iterable[str] = ()) -> Ring:
    """Ring on ``alpha, c1..cK`` followed by extra pure indeterminates."""
    return Ring(("alpha", *(f"c{k}" for k in range(1, K + 1)), *indeterminates))


class LaurentPoly:
    """Sparse map from exponent tuples to nonzero rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Fraction], check: bool = False):
        self.ring = ring
        clean = {}
        for k, v in terms.items():
            if v:
                k = tuple(_norm(e) for e in k)
                if check:
                    if len(k) != len(ring.symbols):
                        raise ValueError("exponent tuple length does not match ring")
                    ring.check_exponents(k)
                clean[k] = Fraction(v)
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # coercion

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.symbols} vs {other.ring.symbols}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = terms.get(k, 0) + v
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return LaurentPoly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            if other == 0:
                return self.ring.zero
            return LaurentPoly._raw(self.ring, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(_norm(a + b) if (type(a) is not int or type(b) is not int) else a + b
                          for a, b in zip(k1, k2))
                s = terms.get(k, 0) + v1 * v2
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return LaurentPoly._raw(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e):
        if isinstance(e, int):
            if e >= 0:
                out = self.ring.one
                base = self
                while e:
                    if e & 1:
                        out = out * base
                    base = base * base
                    e >>= 1
                return out
            return self.inverse() ** (-e)
        e = Fraction(e)
        if e.denominator == 1:
            return self ** e.numerator
        if not self.is_monomial() or self.leading_coeff() != 1:
            raise ValueError("rational powers need a monomial with coefficient 1")
        (key,) = self.terms
        new = tuple(_norm(x * e) for x in key)
        self.ring.check_exponents(new)
        return LaurentPoly._raw(self.ring, {new: Fraction(1)})

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError("only nonzero monomials are invertible")
        ((key, v),) = self.terms.items()
        new = tuple(-x for x in key)
        self.ring.check_exponents(new)
        return LaurentPoly._raw(self.ring, {new: 1 / v})

    # comparisons

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.symbols, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # inspection

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def leading_coeff(self) -> Fraction:
        return self.terms[max(self.terms)] if self.terms else Fraction(0)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.ring.symbols), Fraction(0))

    def exponents(self, name: str) -> set:
        i = self.ring.index(name)
        return {k[i] for k in self.terms}

    def used_symbols(self) -> set[str]:
        return {s for i, s in enumerate(self.ring.symbols) if any(k[i] != 0 for k in self.terms)}

    def shift(self, name: str, e) -> "LaurentPoly":
        """Multiply by ``name**e`` (no coefficient)."""
        i = self.ring.index(name)
        out = {}
        for k, v in self.terms.items():
            k2 = list(k)
            k2[i] = _norm(k2[i] + e)
            out[tuple(k2)] = v
        for k in out:
            self.ring.check_exponents(k)
        return LaurentPoly._raw(self.ring, out)

    def diff(self, name: str) -> "LaurentPoly":
        i = self.ring.index(name)
        out = {}
        for k, v in self.terms.items():
            e = k[i]
            if e:
                k2 = list(k)
                k2[i] = _norm(e - 1)
                out[tuple(k2)] = v * e
        return LaurentPoly._raw(self.ring, out)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.terms.values())

    def evaluate(self, bindings: Mapping[str, object]) -> complex:
        """Numeric value; a binding may be a number or a ``BranchPoint``.

        Rational exponents on a plain complex binding use the principal
        branch; bind a ``BranchPoint`` to pick another sheet.
        """
        from .branch import BranchPoint, branch_pow

        used = self.used_symbols()
        for s in used:
            if s not in bindings:
                raise KeyError(f"unbound symbol {s!r}")
        vals = []
        for s in self.ring.symbols:
            if s not in used:
                vals.append(None)
                continue
            b = bindings[s]
            if isinstance(b, BranchPoint):
                if b.r == 0:
                    raise ZeroDivisionError(f"{s!r} bound to zero")
            elif any(k[self.ring.index(s)] < 0 for k in self.terms) and b == 0:
                raise ZeroDivisionError(f"{s!r} bound to zero but has negative exponents")
            vals.append(b)
        total = 0j
        for k, v in self.terms.items():
            term = complex(v)
            for b, e in zip(vals, k):
                if e == 0:
                    continue
                if isinstance(b, BranchPoint):
                    term *= complex(branch_pow(b, e))
                elif type(e) is int:
                    term *= complex(b) ** e
                else:
                    term *= cmath.exp(float(e) * cmath.log(complex(b)))
            total += term
        return total

    # text form

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for n, (k, v) in enumerate(self.sorted_terms()):
            mono = "*".join(_fmt_power(s, e) for s, e in zip(self.ring.symbols, k) if e != 0)
            mag = abs(v)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if n == 0:
                pieces.append(("-" if v < 0 else "") + body)
            else:
                pieces.append((" - " if v < 0 else " + ") + body)
        return "".join(pieces)

    @classmethod
    def from_text(cls, ring: Ring, text: str) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return ring.zero
        out = ring.zero
        for sign, body in _split_terms(text):
            coeff = Fraction(1)
            key = [0] * len(ring.symbols)
            for factor in body.split("*"):
                m = _FACTOR.fullmatch(factor)
                if m is None:
                    raise ValueError(f"cannot parse factor {factor!r}")
                if m.group("num"):
                    coeff *= Fraction(m.group("num"))
                else:
                    e = m.group("exp")
                    e = Fraction(e.strip("()")) if e else 1
                    key[ring.index(m.group("sym"))] += e
            out = out + LaurentPoly(ring, {tuple(key): sign * coeff}, check=True)
        return out

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r})"

    __str__ = to_text


_FACTOR = re.compile(r"(?P<num>\d+(?:/\d+)?)|(?P<sym>[A-Za-z_][A-Za-z_0-9]*)(?:\^(?P<exp>-?\d+|\(-?\d+/\d+\)))?")


def _split_terms(text: str):
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    parts = re.split(r" ([+-]) ", text)
    yield sign, parts[0]
    for op, body in zip(parts[1::2], parts[2::2]):
        yield (1 if op == "+" else -1), body


def _fmt_power(sym: str, e) -> str:
    if e == 1:
        return sym
    if type(e) is int:
        return f"{sym}^{e}"
    return f"{sym}^({e})"


class AlphaScaled:
    """``alpha**shift * poly`` where ``shift`` is a polynomial in indeterminates.

    Used when an exponent of ``alpha`` is itself a formal indeterminate
    (e.g. ``F(x1 + x2, r, a)``); products add shifts, sums require equal shifts.
    """

    __slots__ = ("shift", "poly")

    def __init__(self, shift: LaurentPoly, poly: LaurentPoly):
        if shift.ring != poly.ring:
            raise RingMismatchError("shift and poly must share a ring")
        if shift.used_symbols() & {"alpha"} or any(s.startswith("c") and s[1:].isdigit() for s in shift.used_symbols()):
            raise ValueError("shift must only involve pure indeterminates")
        const = shift.terms.get((0,) * len(shift.ring.symbols))
        if const is not None:
            poly = poly.shift("alpha", const)
            shift = shift - const
        self.shift = shift
        self.poly = poly

    def __mul__(self, other):
        if isinstance(other, AlphaScaled):
            return AlphaScaled(self.shift + other.shift, self.poly * other.poly)
        return AlphaScaled(self.shift, self.poly * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, (int, Rational)) and other == 0:
            return self
        if not isinstance(other, AlphaScaled):
            other = AlphaScaled(self.shift.ring.zero, self.shift.ring.zero + other)
        if not self.poly:
            return other
        if not other.poly:
            return self
        if self.shift != other.shift:
            raise ValueError("cannot add terms with different alpha exponents")
        return AlphaScaled(self.shift, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return AlphaScaled(self.shift, -self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, AlphaScaled):
            if not self.poly and not other.poly:
                return True
            return self.shift == other.shift and self.poly == other.poly
        if isinstance(other, LaurentPoly):
            return self == AlphaScaled(other.ring.zero, other)
        return NotImplemented

    __hash__ = None

    def to_text(self) -> str:
        if not self.shift:
            return self.poly.to_text()
        return f"alpha^({self.shift.to_text()})*({self.poly.to_text()})"

    def __repr__(self):
        return f"AlphaScaled({self.to_text()!r})"


def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_eval(p: LaurentPoly, bindings: Mapping[str, object]) -> complex:
    return p.evaluate(bindings)


def is_integral(p: LaurentPoly) -> bool:
    """True iff every coefficient is an integer (the zero polynomial included)."""
    return p.is_integral()

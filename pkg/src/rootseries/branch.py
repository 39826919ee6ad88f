"""Points of the logarithm's Riemann surface and branch-correct powers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

__all__ = ["BranchPoint", "branch_pow", "branch_pow_near", "get_context", "to_num"]


@lru_cache(maxsize=None)
def get_context(prec: int = 53):
    """mpmath context for ``prec`` bits; 53 bits maps to the float context."""
    if prec == 53:
        return mpmath.fp
    if prec < 53:
        raise ValueError("precision below double is not supported")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def to_num(ctx, x):
    """Convert ints, Fractions, floats, complex and mpmath values into ``ctx``."""
    if isinstance(x, Rational) and not isinstance(x, int):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        return ctx.mpf(x)
    if isinstance(x, (float, complex)):
        return ctx.mpc(x) if isinstance(x, complex) else ctx.mpf(x)
    if hasattr(x, "imag") and x.imag != 0:
        return ctx.mpc(to_num(ctx, x.real), to_num(ctx, x.imag))
    if hasattr(x, "real"):
        return ctx.mpf(x.real)
    return ctx.convert(x)


@dataclass(frozen=True)
class BranchPoint:
    """``(r, theta, n)`` with ``r > 0`` and ``theta`` in ``(-pi, pi]``."""

    r: object
    theta: object = 0
    n: int = 0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"radius must be positive, got {self.r}")
        t = float(self.theta)
        if t <= -math.pi or t > math.pi + 4e-16:
            raise ValueError(f"theta must lie in (-pi, pi], got {self.theta}")
        if int(self.n) != self.n:
            raise ValueError("branch index must be an integer")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_complex(cls, z, n: int = 0, ctx=None) -> "BranchPoint":
        """Principal polar coordinates of ``z`` placed on sheet ``n``."""
        ctx = ctx or get_context()
        z = to_num(ctx, z)
        if z == 0:
            raise ValueError("zero is not on the logarithm surface")
        theta = ctx.arg(z)
        if theta <= -ctx.pi:
            theta = ctx.pi
        return cls(abs(z), theta, n)

    @classmethod
    def from_log(cls, L, ctx=None) -> "BranchPoint":
        """The point whose logarithm ``ln r + i(theta + 2 pi n)`` equals ``L``."""
        ctx = ctx or get_context()
        L = to_num(ctx, L)
        im = ctx.im(L)
        n = int(ctx.ceil((im - ctx.pi) / (2 * ctx.pi)))
        theta = im - 2 * ctx.pi * n
        if theta <= -ctx.pi:
            theta += 2 * ctx.pi
            n -= 1
        return cls(ctx.exp(ctx.re(L)), theta, n)

    def log(self, ctx=None):
        ctx = ctx or get_context()
        return ctx.mpc(ctx.log(to_num(ctx, self.r)), to_num(ctx, self.theta) + 2 * ctx.pi * self.n)

    def value(self, ctx=None):
        """The underlying complex number (independent of the sheet)."""
        ctx = ctx or get_context()
        return to_num(ctx, self.r) * ctx.expj(to_num(ctx, self.theta))


def branch_pow(z: BranchPoint, gamma, ctx=None):
    """``z**gamma = exp(gamma ln r + i gamma theta + 2 pi i n gamma)``."""
    ctx = ctx or get_context()
    return ctx.exp(to_num(ctx, gamma) * z.log(ctx))


def branch_pow_near(w, anchor: BranchPoint, gamma, ctx=None):
    """``w**gamma`` for complex ``w`` near ``anchor``, on the anchor's sheet.

    The logarithm is continued from the anchor as ``log(anchor) + Log(w/anchor)``.
    """
    ctx = ctx or get_context()
    w = to_num(ctx, w)
    L = anchor.log(ctx) + ctx.log(w / anchor.value(ctx))
    return ctx.exp(to_num(ctx, gamma) * L)

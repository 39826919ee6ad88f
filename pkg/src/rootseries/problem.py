"""JSON problem specifications for the command line.

Numbers: complex values are ``[re, im]`` pairs (plain numbers are accepted
on input); exact rationals are ``"num/den"`` strings (ints accepted).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

from .branch import BranchPoint, get_context
from .series import BaseFunction, Perturbation, base_from_twoterm
from .symbolic import Ring

__all__ = ["SpecError", "ProblemSpec"]


class SpecError(ValueError):
    """Invalid problem specification."""


def _complex(v, what: str) -> complex:
    if isinstance(v, bool):
        raise SpecError(f"{what}: expected a number, got {v!r}")
    if isinstance(v, Number):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(float(Fraction(v)))
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"{what}: cannot parse {v!r}") from None
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, Number) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise SpecError(f"{what}: expected [re, im], got {v!r}")


def _rational(v, what: str) -> Fraction:
    if isinstance(v, bool):
        raise SpecError(f"{what}: expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"{what}: cannot parse rational {v!r}") from None
    if isinstance(v, (list, tuple)) and len(v) == 2 and v[1] == 0:
        return _rational(v[0], what)
    raise SpecError(f"{what}: exact mode needs rationals as 'num/den' strings, got {v!r}")


def _dump_complex(z: complex) -> list:
    return [z.real, z.imag]


def _dump_alpha(a: BranchPoint) -> dict:
    return {"r": float(a.r), "theta": float(a.theta), "n": a.n}


def _parse_alpha(d, what="base.alpha") -> BranchPoint:
    if not isinstance(d, dict) or "r" not in d:
        raise SpecError(f"{what}: expected {{r, theta, n}}")
    try:
        return BranchPoint(float(d["r"]), float(d.get("theta", 0.0)), int(d.get("n", 0)))
    except (TypeError, ValueError) as e:
        raise SpecError(f"{what}: {e}") from None


@dataclass(frozen=True)
class ProblemSpec:
    gammas: tuple
    mode: str = "numeric"
    max_order: int = 4
    alpha: BranchPoint | None = None
    coeffs: tuple | None = None
    twoterm: tuple | None = None  # (b, beta); b is None in exact mode
    a_values: tuple | None = None
    tracking_radius: float | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "numeric"):
            raise SpecError(f"mode must be 'exact' or 'numeric', got {self.mode!r}")
        if not self.gammas:
            raise SpecError("gammas must be non-empty")
        if not isinstance(self.max_order, int) or isinstance(self.max_order, bool) or self.max_order < 1:
            raise SpecError("max_order must be an integer >= 1")
        if (self.coeffs is None) == (self.twoterm is None) and not (self.mode == "exact" and self.twoterm is None):
            raise SpecError("base needs exactly one of coeffs or twoterm")
        if self.coeffs is not None:
            if len(self.coeffs) == 0:
                raise SpecError("coeffs must be non-empty")
            if self.coeffs[0] == 0:
                raise SpecError("c1 must be nonzero")
        if self.mode == "numeric":
            if self.twoterm is None and self.alpha is None:
                raise SpecError("numeric bases need alpha")
            if self.twoterm is not None and (self.twoterm[0] == 0 or self.twoterm[1] == 0):
                raise SpecError("two-term base needs nonzero b and beta")
        elif self.twoterm is not None:
            if self.twoterm[0] is not None:
                raise SpecError("exact two-term bases fix b = -alpha**(-beta); omit b")
            if self.twoterm[1] == 0:
                raise SpecError("beta must be nonzero")
        if self.a_values is not None:
            for row in self.a_values:
                if len(row) != len(self.gammas):
                    raise SpecError("each a-value row needs one entry per gamma")

    @property
    def d(self) -> int:
        return len(self.gammas)

    # parsing

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemSpec":
        if not isinstance(data, dict):
            raise SpecError("spec must be a JSON object")
        mode = data.get("mode", "numeric")
        num = _rational if mode == "exact" else _complex
        if "gammas" not in data or not isinstance(data["gammas"], list):
            raise SpecError("gammas must be a list")
        gammas = tuple(num(g, "gammas") for g in data["gammas"])
        base = data.get("base")
        if not isinstance(base, dict):
            raise SpecError("base must be an object")
        alpha = coeffs = twoterm = None
        if "twoterm" in base:
            tt = base["twoterm"]
            if not isinstance(tt, dict) or "beta" not in tt:
                raise SpecError("twoterm needs beta")
            b = None if tt.get("b") is None else num(tt["b"], "twoterm.b")
            twoterm = (b, num(tt["beta"], "twoterm.beta"))
            if "alpha" in tt:
                alpha = _parse_alpha(tt["alpha"], "twoterm.alpha")
        else:
            if "coeffs" in base:
                if not isinstance(base["coeffs"], list):
                    raise SpecError("coeffs must be a list")
                coeffs = tuple(num(c, "coeffs") for c in base["coeffs"])
            if "alpha" in base:
                alpha = _parse_alpha(base["alpha"])
        a_values = None
        if data.get("a_values") is not None:
            a_values = tuple(tuple(_complex(x, "a_values") for x in row) for row in data["a_values"])
        radius = data.get("tracking_radius")
        return cls(gammas, mode, data.get("max_order", 4), alpha, coeffs, twoterm, a_values,
                   None if radius is None else float(radius))

    @classmethod
    def from_json(cls, text: str) -> "ProblemSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON: {e}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        dump = str if self.mode == "exact" else _dump_complex
        if self.twoterm is not None:
            tt = {"beta": dump(self.twoterm[1])}
            if self.twoterm[0] is not None:
                tt["b"] = dump(self.twoterm[0])
            if self.alpha is not None:
                tt["alpha"] = _dump_alpha(self.alpha)
            base = {"twoterm": tt}
        else:
            base = {}
            if self.alpha is not None:
                base["alpha"] = _dump_alpha(self.alpha)
            if self.coeffs is not None:
                base["coeffs"] = [dump(c) for c in self.coeffs]
        out = {"mode": self.mode, "gammas": [dump(g) for g in self.gammas], "max_order": self.max_order,
               "base": base}
        if self.a_values is not None:
            out["a_values"] = [[_dump_complex(x) for x in row] for row in self.a_values]
        if self.tracking_radius is not None:
            out["tracking_radius"] = self.tracking_radius
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    # engine objects

    def perturbation(self) -> Perturbation:
        return Perturbation(self.gammas)

    def base_function(self, prec: int = 53, order: int | None = None) -> BaseFunction:
        K = order or self.max_order
        if self.mode == "exact":
            if self.twoterm is not None:
                ring = Ring(("alpha",))
                alpha = ring.gen("alpha")
                beta = self.twoterm[1]
                return base_from_twoterm(-(alpha ** (-beta)), beta, alpha, K)
            if self.coeffs is None:
                return BaseFunction.symbolic(K)
            return BaseFunction.exact(self.coeffs)
        if self.twoterm is not None:
            b, beta = self.twoterm
            ctx = get_context(prec)
            alpha = self.alpha
            if alpha is None:
                alpha = BranchPoint.from_log(ctx.log(-1 / ctx.mpc(b)) / ctx.mpc(beta), ctx)
            try:
                return base_from_twoterm(b, beta, alpha, K, prec)
            except ValueError as e:
                raise SpecError(str(e)) from None
        return BaseFunction.numeric(self.alpha, self.coeffs, prec)

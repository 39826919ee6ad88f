"""Independent checks of the series engines.

Newton root tracking against truncated series, the integrality check for
integer exponents, the exponent-rescaling transform check, and exact
checks of the supporting falling-factorial, set-partition and derivation
identities. Every identity check returns an :class:`IdentityReport`.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .branch import BranchPoint, branch_pow, branch_pow_near, get_context, to_num
from .combinatorics import falling_factorial, gen_binomial, set_partitions
from .series import (
    BaseFunction,
    MultiIndex,
    Perturbation,
    F_eval,
    base_from_twoterm,
    multi_indices,
    phi_coeff,
    phi_coeff_oracle,
    phi_coeff_twoterm,
    series_coefficients,
    series_eval,
    taylor_coeff,
)
from .symbolic import LaurentPoly, Ring

__all__ = [
    "IdentityReport",
    "TrackReport",
    "TrackingError",
    "SingularJacobianError",
    "branch_pow",
    "newton_track",
    "convergence_order_fit",
    "integrality_check",
    "integrality_suite",
    "transform_check",
    "check_F_prod",
    "check_nu",
    "check_deriv_set",
    "check_newton_series",
    "check_vandermonde",
    "check_main_consistency",
    "check_twoterm_consistency",
]


class TrackingError(RuntimeError):
    """Newton iteration failed to converge."""


class SingularJacobianError(TrackingError):
    """Derivative of ``f`` too small to take a Newton step."""


@dataclass
class IdentityReport:
    identity: str
    range: dict
    instances: list = field(default_factory=list)
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.instances) and self.counterexample is None

    def record(self, params: dict, ok: bool, detail: dict | None = None) -> None:
        self.instances.append((params, ok))
        if not ok and self.counterexample is None:
            self.counterexample = {"params": params, **(detail or {})}

    def merge(self, other: "IdentityReport") -> None:
        self.instances.extend(other.instances)
        if self.counterexample is None and other.counterexample is not None:
            self.counterexample = other.counterexample

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "range": self.range,
            "passed": self.passed,
            "instances": [{"params": p, "passed": ok} for p, ok in self.instances],
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out

    def summary(self) -> str:
        bad = sum(1 for _, ok in self.instances if not ok)
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.identity}: {len(self.instances)} instances, {bad} failed"


@dataclass
class TrackReport:
    order: int
    samples: list
    newton: list
    series: list
    errors: list
    slope: float
    residual: float
    iterations: list
    exact: bool

    @property
    def passed(self) -> bool:
        return self.exact or self.slope >= self.order + 0.5

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "samples": [float(t) for t in self.samples],
            "errors": [float(e) for e in self.errors],
            "slope": self.slope,
            "residual": self.residual,
            "iterations": self.iterations,
            "exact": self.exact,
            "passed": self.passed,
        }


# newton tracking ---------------------------------------------------------------


def _f_and_df(z, a, pert: Perturbation, base: BaseFunction, ctx):
    g, dg = base.g(z)
    f, df = g, dg
    for ai, gam in zip(a, pert.gammas):
        if ai == 0:
            continue
        gam = to_num(ctx, gam)
        zg = branch_pow_near(z, base.alpha, gam, ctx)
        f += ai * zg
        df += ai * gam * zg / z
    return f, df


def _newton(z, a, pert, base, ctx, tol, max_iter):
    for it in range(1, max_iter + 1):
        f, df = _f_and_df(z, a, pert, base, ctx)
        if abs(f) <= tol:
            return z, it - 1
        if abs(df) <= ctx.eps * 1e3 * max(1, abs(f)):
            raise SingularJacobianError(f"|f'(z)| = {abs(df)} at z = {z}")
        z = z - f / df
    f, _ = _f_and_df(z, a, pert, base, ctx)
    if abs(f) <= tol:
        return z, max_iter
    raise TrackingError(f"no convergence in {max_iter} iterations (|f| = {abs(f)})")


def _default_tol(base: BaseFunction, ctx):
    alpha = base.alpha.value(ctx)
    return ctx.eps * 1024 * max(1, abs(alpha)) * max(1, abs(base.coeffs[0]))


def _track(pert, base, a, tol=None, max_iter=60, steps=32, radius=None):
    if base.mode != "numeric":
        raise TypeError("Newton tracking needs a numeric base function")
    if len(a) != pert.d:
        raise ValueError(f"expected {pert.d} perturbation values, got {len(a)}")
    ctx = base.context()
    a = [to_num(ctx, x) for x in a]
    if radius is not None and max((abs(x) for x in a), default=0) > radius:
        raise TrackingError(f"|a| exceeds the tracking radius {radius}")
    tol = _default_tol(base, ctx) if tol is None else tol
    alpha = base.alpha.value(ctx)
    try:
        return _newton(alpha, a, pert, base, ctx, tol, max_iter)
    except TrackingError:
        pass
    z, used = alpha, 0
    for j in range(1, steps + 1):
        s = ctx.mpf(j) / steps
        z, it = _newton(z, [s * x for x in a], pert, base, ctx, tol, max_iter)
        used += it
    return z, used


def newton_track(pert: Perturbation, base: BaseFunction, a: Sequence, tol=None, max_iter: int = 60,
                 steps: int = 32, radius=None):
    """Root of ``g(z) + sum a_i z**gamma_i`` continued from ``alpha``.

    A direct Newton solve from ``alpha`` is tried first, then a linear
    homotopy in ``steps`` warm-started stages from 0 to ``a``. Powers of
    ``z`` stay on the sheet of ``alpha``.
    """
    return _track(pert, base, a, tol, max_iter, steps, radius)[0]


def convergence_order_fit(pert: Perturbation, base: BaseFunction, order: int, samples: Sequence | None = None,
                          direction: Sequence | None = None) -> TrackReport:
    """Fit the log-log slope of truncation error against ``|a|``.

    ``a = t * direction`` for ``t`` in ``samples`` (default: 7 geometric
    points in ``[1e-5, 1e-3]``). Errors at the working precision's noise
    floor mark the series as exact for this base.
    """
    ctx = base.context()
    if samples is None:
        samples = np.geomspace(1e-5, 1e-3, 7)
    if len(samples) < 2:
        raise ValueError("need at least two samples for a slope")
    if direction is None:
        direction = [1 / math.sqrt(pert.d)] * pert.d
    direction = [to_num(ctx, x) for x in direction]
    coeffs = series_coefficients(pert, base, order)
    roots, vals, errs, iters = [], [], [], []
    for t in samples:
        tt = to_num(ctx, float(t))
        a = [tt * x for x in direction]
        root, it = _track(pert, base, a)
        val = series_eval(a, order, pert, base, coeffs)
        roots.append(root)
        vals.append(val)
        errs.append(abs(val - root))
        iters.append(it)
    floor = ctx.eps * 1e3 * max(1, abs(base.alpha.value(ctx)))
    exact = all(e <= floor for e in errs)
    logt = np.log([float(t) for t in samples])
    loge = np.array([float(ctx.log(max(e, floor * 1e-3))) for e in errs])
    (slope, icept), res, *_ = np.polyfit(logt, loge, 1, full=True)
    resid = float(res[0]) if len(res) else 0.0
    return TrackReport(order, list(samples), roots, vals, errs, float(slope), resid, iters, exact)


# integrality -------------------------------------------------------------------


def _integer_gammas(gammas) -> tuple[int, ...]:
    out = []
    for g in gammas:
        if isinstance(g, bool):
            raise ValueError("gammas must be integers")
        if isinstance(g, Rational) and Fraction(g).denominator == 1:
            out.append(int(g))
        elif isinstance(g, float) and g.is_integer():
            out.append(int(g))
        else:
            raise ValueError(f"integrality needs integer gammas, got {g!r}")
    return tuple(out)


def integrality_check(n, gammas, scale=1) -> IdentityReport:
    """Check ``coeff_n / alpha**(n.gamma)`` lies in ``Z[alpha^-1, c1^-1, c2, .., c_|n|]``.

    ``scale`` multiplies the coefficient first (negative controls).
    """
    gammas = _integer_gammas(gammas)
    n = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    if n.d != len(gammas):
        raise ValueError("multi-index length does not match gammas")
    report = IdentityReport("integrality", {"n": list(n.n), "gammas": list(gammas)})
    base = BaseFunction.symbolic(max(n.total, 1))
    coeff = taylor_coeff(n, Perturbation(gammas), base) * Fraction(scale)
    report.record({"n": list(n.n), "gammas": list(gammas)}, *_integral_verdict(coeff, n, gammas))
    return report


def _integral_verdict(coeff: LaurentPoly, n: MultiIndex, gammas) -> tuple[bool, dict]:
    shift = sum(ni * g for ni, g in zip(n.n, gammas))
    reduced = coeff.shift("alpha", -shift)
    ring = reduced.ring
    ia, ic1 = ring.index("alpha"), ring.index("c1")
    for key, v in reduced.sorted_terms():
        why = None
        if v.denominator != 1:
            why = "non-integer coefficient"
        elif key[ia] > 0 or type(key[ia]) is not int:
            why = "positive or fractional alpha exponent"
        elif key[ic1] > 0:
            why = "positive c1 exponent"
        if why:
            term = LaurentPoly(ring, {key: v})
            return False, {"reason": why, "term": term.to_text(), "reduced": reduced.to_text()}
    return True, {}


def integrality_suite(max_abs_gamma: int = 3, max_d: int = 2, max_order: int = 6, scale=1) -> IdentityReport:
    report = IdentityReport("integrality",
                            {"max_abs_gamma": max_abs_gamma, "max_d": max_d, "max_order": max_order})
    base = BaseFunction.symbolic(max_order)
    span = range(-max_abs_gamma, max_abs_gamma + 1)
    for d in range(1, max_d + 1):
        for gammas in itertools.product(span, repeat=d):
            pert = Perturbation(gammas)
            for n in multi_indices(d, max_order):
                coeff = taylor_coeff(n, pert, base) * Fraction(scale)
                ok, detail = _integral_verdict(coeff, n, gammas)
                report.record({"n": list(n.n), "gammas": list(gammas)}, ok, detail)
    return report


# transformation rule -----------------------------------------------------------


def _trunc_mul(p: dict, q: dict, order: int, zero) -> dict:
    out: dict = {}
    for k1, v1 in p.items():
        s1 = sum(k1)
        for k2, v2 in q.items():
            if s1 + sum(k2) > order:
                continue
            k = tuple(x + y for x, y in zip(k1, k2))
            out[k] = out.get(k, zero) + v1 * v2
    return out


def _binomial_power(u: dict, p, order: int, zero, binom) -> dict:
    """Coefficients of ``(1 + u)**p - 1`` to total degree ``order``; ``u(0) = 0``."""
    acc: dict = {}
    cur = dict(u)
    for k in range(1, order + 1):
        ck = binom(p, k)
        for key, v in cur.items():
            acc[key] = acc.get(key, zero) + v * ck
        cur = _trunc_mul(cur, u, order, zero)
    return acc


def transform_check(pert: Perturbation, b, beta1, beta2, order: int, mode: str = "numeric",
                    alpha1: BranchPoint | None = None, alpha2: BranchPoint | None = None,
                    prec: int = 53, rtol: float = 1e-9) -> IdentityReport:
    """Compare ``phi(a; gamma, b, beta1)**(1/beta2)`` with ``phi(a; beta2 gamma, b, beta2 beta1)``.

    The left side raises the order-``order`` series from the closed-form
    engine to the power ``1/beta2`` formally; the right side uses the
    two-term product formula. In exact mode ``b`` is ignored and taken as
    ``-alpha**(-beta1)`` so that ``alpha`` stays a free symbol.
    """
    if beta1 == 0 or beta2 == 0:
        raise ValueError("beta1 and beta2 must be nonzero")
    params = {"gammas": [str(g) for g in pert.gammas], "b": str(b), "beta1": str(beta1),
              "beta2": str(beta2), "order": order, "mode": mode}
    report = IdentityReport("transform", params)
    d = pert.d
    if mode == "exact":
        beta1, beta2 = Fraction(beta1), Fraction(beta2)
        ring = Ring(("alpha",))
        a1 = ring.gen("alpha")
        bb = -(a1 ** (-beta1))
        base1 = base_from_twoterm(bb, beta1, a1, order)
        a2 = a1 ** (1 / beta2)
        zero = ring.zero
        binom = gen_binomial
        inv_a1 = a1.inverse()
        close = lambda x, y: x == y  # noqa: E731
    elif mode == "numeric":
        ctx = get_context(prec)
        bb = to_num(ctx, b)
        beta1_, beta2_ = to_num(ctx, beta1), to_num(ctx, beta2)
        if alpha1 is None:
            alpha1 = BranchPoint.from_log(ctx.log(-1 / bb) / beta1_, ctx)
        base1 = base_from_twoterm(bb, beta1_, alpha1, order, prec)
        L2 = alpha1.log(ctx) / beta2_
        if alpha2 is not None:
            if abs(alpha2.log(ctx) - L2) > 1e-9 * max(1, abs(L2)):
                raise ValueError("alpha2 is not alpha1**(1/beta2) on the supplied branch")
        else:
            alpha2 = BranchPoint.from_log(L2, ctx)
        a2 = alpha2.value(ctx)
        inv_a1 = 1 / alpha1.value(ctx)
        zero = ctx.mpc(0)
        binom = lambda p, k: gen_binomial(p, k)  # noqa: E731
        beta1, beta2 = beta1_, beta2_
        close = None
    else:
        raise ValueError(f"unknown mode {mode!r}")

    u = {n.n: taylor_coeff(n, pert, base1) * inv_a1 for n in multi_indices(d, order)}
    left = _binomial_power(u, 1 / beta2, order, zero, binom)
    pert2 = pert.scaled(beta2)
    rhs_alpha = a2 if mode == "exact" else alpha2
    right = {}
    for n in multi_indices(d, order):
        v = phi_coeff_twoterm(n, pert2, bb, beta2 * beta1, rhs_alpha, prec) * Fraction(1, n.factorial())
        right[n.n] = v
    if close is None:
        scale = max(abs(v) for v in right.values())

        def close(x, y):
            return abs(x - y) <= rtol * max(abs(x), abs(y), scale * 1e-3)

    for n in multi_indices(d, order):
        lv = a2 * left.get(n.n, zero)
        rv = right[n.n]
        ok = close(lv, rv)
        detail = {} if ok else {"left": _fmt(lv), "right": _fmt(rv)}
        report.record({"n": list(n.n)}, ok, detail)
    return report


def _fmt(v):
    if isinstance(v, LaurentPoly):
        return v.to_text()
    c = complex(v)
    return [c.real, c.imag]


# identity suite ----------------------------------------------------------------


def check_F_prod(M: int, a: int) -> IdentityReport:
    """Sum over ``S(M, a)`` of products of ``F(., |s_i|-1, 1)`` equals ``F(sum x, M-1, a)``."""
    if not 1 <= a <= M:
        raise ValueError("need 1 <= a <= M")
    report = IdentityReport("fprod", {"M": M, "a": a})
    xs_names = [f"x{m}" for m in range(1, M + 1)]
    base = BaseFunction.symbolic(M, xs_names)
    xs = [base.ring.gen(n) for n in xs_names]
    lhs = 0
    for s in set_partitions(M, a):
        prod = None
        for block in s.parts:
            x = sum((xs[m - 1] for m in block), base.ring.zero)
            f = F_eval(x, len(block) - 1, 1, base)
            prod = f if prod is None else prod * f
        lhs = lhs + prod
    rhs = F_eval(sum(xs, base.ring.zero), M - 1, a, base)
    ok = lhs == rhs
    report.record({"M": M, "a": a}, ok, {} if ok else {"left": lhs.to_text(), "right": rhs.to_text()})
    return report


def check_nu(N: int, k: int) -> IdentityReport:
    """Alternating falling-factorial sum against the set-partition product sum."""
    if not 1 <= k <= N:
        raise ValueError("need 1 <= k <= N")
    report = IdentityReport("nu", {"N": N, "k": k})
    ring = Ring(("nu", *(f"x{i}" for i in range(1, N + 1))), frozenset(), frozenset())
    nu, *xs = ring.gens()
    sx = sum(xs, ring.zero)
    lhs = ring.zero
    for r in range(k):
        term = falling_factorial((r + 1) * nu - 1 + sx, N - 1) * math.comb(k - 1, r)
        lhs = lhs + (term if (k - 1 - r) % 2 == 0 else -term)
    lhs = lhs * Fraction(1, math.factorial(k - 1))
    rhs = ring.zero
    for s in set_partitions(N, k):
        prod = ring.one
        for block in s.parts:
            prod = prod * falling_factorial(nu - 1 + sum((xs[m - 1] for m in block), ring.zero), len(block) - 1)
        rhs = rhs + prod
    rhs = rhs * nu ** (k - 1)
    ok = lhs == rhs
    report.record({"N": N, "k": k}, ok, {} if ok else {"left": lhs.to_text(), "right": rhs.to_text()})
    return report


def _random_poly(ring: Ring, rng: random.Random, degree: int, exact_degree: bool = False) -> LaurentPoly:
    p = ring.zero
    t = ring.gen(ring.symbols[0])
    for j in range(degree + 1):
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if exact_degree and j == degree and c == 0:
            c = Fraction(1)
        p = p + t ** j * c
    return p


def _nth_diff(p: LaurentPoly, name: str, k: int) -> LaurentPoly:
    for _ in range(k):
        p = p.diff(name)
    return p


def check_deriv_set(M: int, trials: int = 10, seed: int = 0, max_degree: int = 3) -> IdentityReport:
    """Subset expansion of ``delta**M (f_A f_B prod f_i)`` with ``delta = d/dt``."""
    report = IdentityReport("derivset", {"M": M, "trials": trials, "seed": seed, "max_degree": max_degree})
    ring = Ring(("t",), frozenset(), frozenset())
    rng = random.Random(seed * 1000 + M)
    for trial in range(trials):
        fA = _random_poly(ring, rng, rng.randint(0, max_degree))
        fB = _random_poly(ring, rng, rng.randint(0, max_degree))
        fs = [_random_poly(ring, rng, rng.randint(0, max_degree)) for _ in range(M)]
        dfA = fA.diff("t")
        lhs = ring.zero
        for mask in range(1 << M):
            w = [i for i in range(M) if mask >> i & 1]
            wc = [i for i in range(M) if not mask >> i & 1]
            pb = fB
            for i in w:
                pb = pb * fs[i]
            if wc:
                pa = dfA
                for i in wc:
                    pa = pa * fs[i]
                pa = _nth_diff(pa, "t", len(wc) - 1)
            else:
                pa = fA
            lhs = lhs + pa * _nth_diff(pb, "t", len(w))
        full = fA * fB
        for f in fs:
            full = full * f
        rhs = _nth_diff(full, "t", M)
        ok = lhs == rhs
        report.record({"M": M, "trial": trial}, ok,
                      {} if ok else {"left": lhs.to_text(), "right": rhs.to_text(), "fA": fA.to_text()})
    return report


def check_newton_series(m: int, trials: int = 3, seed: int = 0) -> IdentityReport:
    """Rebuild a degree-``m`` polynomial from its values at ``1..m+1``."""
    report = IdentityReport("newton", {"degree": m, "trials": trials, "seed": seed})
    ring = Ring(("x",), frozenset(), frozenset())
    x = ring.gen("x")
    rng = random.Random(seed * 1000 + m)
    for trial in range(trials):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m + 1)]
        if coeffs[-1] == 0:
            coeffs[-1] = Fraction(1)
        F = sum((x ** j * c for j, c in enumerate(coeffs)), ring.zero)

        def at(v):
            return sum(c * v ** j for j, c in enumerate(coeffs))

        rebuilt = ring.zero
        for k in range(1, m + 2):
            diff = sum(((-1) ** (k - 1 - r)) * math.comb(k - 1, r) * at(r + 1) for r in range(k))
            rebuilt = rebuilt + falling_factorial(x - 1, k - 1) * Fraction(diff, math.factorial(k - 1))
        ok = rebuilt == F
        report.record({"degree": m, "trial": trial}, ok,
                      {} if ok else {"original": F.to_text(), "rebuilt": rebuilt.to_text()})
    return report


def check_vandermonde(n: int, trials: int = 5, seed: int = 0) -> IdentityReport:
    """``(a+b)_n = sum_i binom(n, i) (a)_i (b)_{n-i}`` as polynomials and at random rationals."""
    report = IdentityReport("vandermonde", {"n": n, "trials": trials, "seed": seed})
    ring = Ring(("a", "b"), frozenset(), frozenset())
    a, b = ring.gens()

    def sides(a, b):
        lhs = falling_factorial(a + b, n)
        rhs = sum((math.comb(n, i) * falling_factorial(a, i) * falling_factorial(b, n - i) for i in range(n + 1)),
                  0)
        return lhs, rhs

    lhs, rhs = sides(a, b)
    report.record({"n": n, "kind": "polynomial"}, lhs == rhs,
                  {} if lhs == rhs else {"left": lhs.to_text(), "right": rhs.to_text()})
    lhs, rhs = gen_binomial(a + b, n), sum((gen_binomial(a, i) * gen_binomial(b, n - i) for i in range(n + 1)), 0)
    report.record({"n": n, "kind": "binomial"}, lhs == rhs)
    rng = random.Random(seed * 1000 + n)
    for trial in range(trials):
        qa = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        qb = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        lhs, rhs = sides(qa, qb)
        report.record({"n": n, "kind": "rational", "a": str(qa), "b": str(qb)}, lhs == rhs)
    return report


def _random_gammas(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(d))


def check_main_consistency(d: int, max_order: int = 6, seed: int = 0, gammas=None) -> IdentityReport:
    """Closed form against the implicit-differentiation oracle, exactly."""
    rng = random.Random(seed * 1000 + d)
    gammas = tuple(gammas) if gammas is not None else _random_gammas(rng, d)
    report = IdentityReport("theorem-main-consistency",
                            {"d": d, "max_order": max_order, "gammas": [str(g) for g in gammas]})
    pert = Perturbation(gammas)
    base = BaseFunction.symbolic(max_order)
    memo: dict = {}
    for n in multi_indices(d, max_order):
        closed = phi_coeff(n.multiset(), pert, base)
        oracle = phi_coeff_oracle(n.multiset(), pert, base, memo=memo)
        ok = closed == oracle
        report.record({"n": list(n.n)}, ok,
                      {} if ok else {"closed": closed.to_text(), "oracle": oracle.to_text()})
    return report


def check_twoterm_consistency(beta, max_order: int = 5, gammas=(Fraction(1, 3), Fraction(-2)), b=None) -> IdentityReport:
    """Product formula for ``1 + b z**beta`` against the closed form with ``c_k`` substituted.

    ``b`` defaults to ``-alpha**(-beta)``, the value making ``alpha`` a zero.
    """
    beta = Fraction(beta)
    ring = Ring(("alpha",))
    alpha = ring.gen("alpha")
    check_zero = b is None
    bb = -(alpha ** (-beta)) if b is None else (b if isinstance(b, LaurentPoly) else ring.const(b))
    report = IdentityReport("twoterm", {"beta": str(beta), "max_order": max_order, "b": bb.to_text(),
                                        "gammas": [str(g) for g in gammas]})
    base = base_from_twoterm(bb, beta, alpha, max_order, check_zero=check_zero)
    pert = Perturbation(tuple(gammas))
    for n in multi_indices(pert.d, max_order):
        closed = phi_coeff(n.multiset(), pert, base)
        product = phi_coeff_twoterm(n, pert, bb, beta, alpha)
        ok = closed == product
        report.record({"n": list(n.n)}, ok,
                      {} if ok else {"closed": closed.to_text(), "product": product.to_text()})
    return report

"""Estimator-style wrappers around the series and Newton engines.

``fit`` builds the base function and the coefficient table; ``predict``
maps rows of perturbation values ``a`` to root values.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .branch import BranchPoint, get_context
from .series import BaseFunction, Perturbation, series_coefficients, series_eval
from .validation import check_gammas, check_perturbations
from . import verify

__all__ = ["TaylorRootSeries", "NewtonRootTracker"]


class _RootModel(BaseEstimator):
    def _build(self, X=None):
        gammas = check_gammas(self.gammas)
        if self.coeffs is None or len(self.coeffs) == 0:
            raise ValueError("coeffs must hold at least c1")
        ctx = get_context(self.precision)
        alpha = BranchPoint.from_complex(self.alpha, self.branch, ctx)
        self.base_ = BaseFunction.numeric(alpha, self.coeffs, self.precision)
        self.perturbation_ = Perturbation(gammas)
        self.n_features_in_ = len(gammas)
        if X is not None:
            check_perturbations(X, self.n_features_in_)

    def _rows(self, X):
        check_is_fitted(self, "base_")
        return check_perturbations(X, self.n_features_in_)


class TaylorRootSeries(_RootModel):
    """Truncated Taylor series of the root continued from ``alpha``.

    Parameters
    ----------
    gammas : sequence of complex
        Exponents of the perturbation terms ``a_i z**gamma_i``.
    coeffs : sequence of complex
        ``c_1, c_2, ...``, the expansion of the base function about ``alpha``.
    alpha : complex
        The simple zero of the base function.
    branch : int
        Sheet of the logarithm that ``alpha`` sits on.
    order : int
        Highest total degree kept.
    precision : int
        Working precision in bits.
    engine : {"closed", "oracle"}
        Closed-form coefficients or the implicit-differentiation recursion.
    """

    def __init__(self, gammas=None, coeffs=None, alpha=1.0, branch=0, order=4, precision=53, engine="closed"):
        self.gammas = gammas
        self.coeffs = coeffs
        self.alpha = alpha
        self.branch = branch
        self.order = order
        self.precision = precision
        self.engine = engine

    def fit(self, X=None, y=None):
        if self.engine not in ("closed", "oracle"):
            raise ValueError(f"engine must be 'closed' or 'oracle', got {self.engine!r}")
        if int(self.order) != self.order or self.order < 1:
            raise ValueError("order must be a positive integer")
        self._build(X)
        self.coefficients_ = series_coefficients(self.perturbation_, self.base_, int(self.order), self.engine)
        return self

    def predict(self, X) -> np.ndarray:
        rows = self._rows(X)
        out = [series_eval(list(r), int(self.order), self.perturbation_, self.base_, self.coefficients_) for r in rows]
        return np.array([complex(v) for v in out])

    def coefficient_table(self) -> dict:
        """``{exponent tuple: complex coefficient}``."""
        check_is_fitted(self, "coefficients_")
        return {n.n: complex(v) for n, v in self.coefficients_.items()}


class NewtonRootTracker(_RootModel):
    """Newton-tracked root, the numerical reference for :class:`TaylorRootSeries`.

    Rows that fail to converge (or leave ``radius``) give NaN.
    """

    def __init__(self, gammas=None, coeffs=None, alpha=1.0, branch=0, precision=53, radius=None, max_iter=60):
        self.gammas = gammas
        self.coeffs = coeffs
        self.alpha = alpha
        self.branch = branch
        self.precision = precision
        self.radius = radius
        self.max_iter = max_iter

    def fit(self, X=None, y=None):
        self._build(X)
        return self

    def predict(self, X) -> np.ndarray:
        rows = self._rows(X)
        out = np.empty(len(rows), dtype=complex)
        for i, r in enumerate(rows):
            try:
                z = verify.newton_track(self.perturbation_, self.base_, list(r), max_iter=self.max_iter,
                                        radius=self.radius)
                out[i] = complex(z)
            except verify.TrackingError:
                out[i] = complex(np.nan, np.nan)
        return out

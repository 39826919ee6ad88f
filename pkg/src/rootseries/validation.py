"""Input checks for the estimator facade.

scikit-learn's ``check_array`` rejects complex data, so perturbation
matrices are validated here.
"""
from __future__ import annotations

import numpy as np

__all__ = ["check_perturbations", "check_gammas"]


def check_perturbations(X, d: int | None = None) -> np.ndarray:
    """Return ``X`` as a 2-D complex array of finite values.

    A 1-D input is read as one sample when ``d`` is given and matches its
    length, otherwise as a column.
    """
    arr = np.asarray(X)
    if arr.dtype == object or arr.dtype.kind not in "biufc":
        try:
            arr = arr.astype(complex)
        except (TypeError, ValueError):
            raise ValueError("perturbations must be numeric") from None
    arr = arr.astype(complex, copy=False)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if d is not None and arr.shape[0] == d and d > 1 else arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got {arr.ndim} dimensions")
    if arr.shape[0] == 0:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError("perturbations contain NaN or infinity")
    if d is not None and arr.shape[1] != d:
        raise ValueError(f"X has {arr.shape[1]} features, expected {d}")
    return arr


def check_gammas(gammas) -> tuple:
    if gammas is None:
        raise ValueError("gammas must be set")
    g = tuple(gammas) if np.ndim(gammas) else (gammas,)
    if not g:
        raise ValueError("gammas must be non-empty")
    for x in g:
        if not np.isfinite(complex(x)):
            raise ValueError("gammas must be finite")
    return g

"""Taylor series of a simple zero perturbed by a complex-exponent polynomial."""
from .branch import BranchPoint, branch_pow
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

__version__ = "0.1.0"

"""Spectral theory of the twisted Laplacian on C^n."""
from .errors import (DimensionMismatch, DomainTooSmall, EnvelopeMismatch,
                     IndexOutOfRange, InvalidParameter, NonConvergence,
                     NonIntegrable, NotUnitary, PoleAtC, TwistlapError, ZeroFunction)
from .function_space import Envelope, ExpPoly, Polynomial
from .integrate import gaussian_moment, inner_product, norm2, project_level
from .kernels import BACKEND
from .operators import (DiffOp, annihilation, creation, eigencheck, laplacian,
                        laplacian_tilde, magnetic_schrodinger)
from .spectra import (HermiteIndex, eigenvalue, hermite, hermite_ladder,
                      hermite_rodrigues, hyp1f1, hyp1f1_asymptotic, kernel_eval,
                      radial_eigenfunction)
from .symmetry import Motion, autfactor, t_apply

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DiffOp", "DimensionMismatch", "DomainTooSmall", "Envelope",
    "EnvelopeMismatch", "ExpPoly", "HermiteIndex", "IndexOutOfRange",
    "InvalidParameter", "Motion", "NonConvergence", "NonIntegrable", "NotUnitary",
    "PoleAtC", "Polynomial", "TwistlapError", "ZeroFunction", "annihilation",
    "autfactor", "creation", "eigencheck", "eigenvalue", "gaussian_moment",
    "hermite", "hermite_ladder", "hermite_rodrigues", "hyp1f1", "hyp1f1_asymptotic",
    "inner_product", "kernel_eval", "laplacian", "laplacian_tilde",
    "magnetic_schrodinger", "norm2", "project_level", "radial_eigenfunction", "t_apply",
]

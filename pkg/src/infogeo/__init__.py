"""Dual coordinates, entropy transforms, and divergences for statistical models.

The package treats a statistical model as a family of states indexed by
canonical parameters theta, with moment coordinates U tied to theta by a
Legendre transform of the entropy.  :mod:`infogeo.core` holds the
model-agnostic engine; concrete families live in :mod:`infogeo.qubit`,
:mod:`infogeo.coherent`, :mod:`infogeo.discrete`,
:mod:`infogeo.regression`, and :mod:`infogeo.sphere`.  ``infogeo verify``
runs the property suites from :mod:`infogeo.verify`.
"""

__version__ = "0.1.0"

from .core import (
    DivergenceReport,
    DualPair,
    ModelDescriptor,
    bregman_divergence,
    canonical_check,
    convexity_probe,
    divergence_def5,
    divergence_from_data,
    massieu,
    metric_tensor,
    pythagoras_data,
    pythagoras_models,
    theta_to_u,
    u_to_theta,
)
from .errors import (
    CanonicalityError,
    ConstraintError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    EvaluationError,
    InfeasibleError,
    InfoGeoError,
    SupportError,
    TruncationError,
    UnsupportedOperationError,
)
from .numerics import (
    Domain,
    Matrix2H,
    OptimizationResult,
    eig_h2,
    func_h2,
    grad_fd,
    grid_sup,
    hess_fd,
    maximize_concave,
)
from .registry import (
    BUILTIN_NAMES,
    ModelHandle,
    canonical_instances,
    coherent_instance,
    discrete_instance,
    get_model,
    load_config,
    qubit_instance,
    regression_instance,
    sphere_instance,
)
from .verify import (
    PropertyResult,
    failures,
    verify_all,
    verify_handle,
    verify_numerics,
)

__all__ = [
    "BUILTIN_NAMES",
    "CanonicalityError",
    "ConstraintError",
    "ConvergenceError",
    "DegeneracyError",
    "DivergenceReport",
    "Domain",
    "DomainError",
    "DualPair",
    "EvaluationError",
    "InfeasibleError",
    "InfoGeoError",
    "Matrix2H",
    "ModelDescriptor",
    "ModelHandle",
    "OptimizationResult",
    "PropertyResult",
    "SupportError",
    "TruncationError",
    "UnsupportedOperationError",
    "bregman_divergence",
    "canonical_check",
    "canonical_instances",
    "coherent_instance",
    "convexity_probe",
    "discrete_instance",
    "divergence_def5",
    "divergence_from_data",
    "eig_h2",
    "failures",
    "func_h2",
    "get_model",
    "grad_fd",
    "grid_sup",
    "hess_fd",
    "load_config",
    "massieu",
    "maximize_concave",
    "metric_tensor",
    "pythagoras_data",
    "pythagoras_models",
    "qubit_instance",
    "regression_instance",
    "sphere_instance",
    "theta_to_u",
    "u_to_theta",
    "verify_all",
    "verify_handle",
    "verify_numerics",
]

"""Model-independent engine for entropy/Massieu duality.

A model is handed to the engine as a :class:`ModelDescriptor`: an open
domain of energy coordinates ``U``, the model entropy ``S(U)`` on that
domain, and optional closed forms (Massieu function, dual coordinate
maps) plus an optional data-set layer (per-sample answers and a fiber
sampler).  Every operation below works from the descriptor alone, so the
same code serves all concrete models.

Conventions.  The Massieu function is the Legendre--Fenchel transform

    Phi(theta) = sup_U { S(U) - sum_j theta_j U_j },

so at a dual pair the canonical identity ``Phi - S(U) + theta . U = 0``
holds, together with ``dPhi/dtheta_j = -U_j`` and ``dS/dU_j = theta_j``.
The metric tensor is the Hessian of Phi.  For exponential-family models
the per-sample log weight is affine, ``L(m_theta) = alpha(theta) -
sum_j theta_j q_j``; under the sign conventions above the affine
constant is ``alpha(theta) = -Phi(theta)`` (see
:func:`affine_log_constant`), while the normalizer of the probability
weights themselves is ``+Phi(theta)`` (see :func:`log_normalizer`).
Both accessors are provided because both sign conventions are common.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import (
    CanonicalityError,
    ConstraintError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    UnsupportedOperationError,
)
from .numerics import Domain, grad_fd, hess_fd, maximize_concave

#: Relative closeness to the bounding box at which an argmax on an
#: unbounded domain is treated as escaping to infinity.
_BOX_EDGE_RTOL = 1e-6


@dataclass(frozen=True)
class ModelDescriptor:
    """Everything the engine needs to know about one model.

    Parameters
    ----------
    name : str
        Human-readable instance name (used in reports).
    n : int
        Number of energy coordinates / natural parameters.
    energy_domain : Domain
        Open domain of valid energy coordinates ``U``.
    entropy_u : callable
        Model entropy ``S(U)`` on the energy domain.
    closed_massieu, closed_theta_to_u, closed_u_to_theta : callable or None
        Closed forms, when the model has them.  Operations fall back to
        numeric Legendre transforms / finite differences otherwise.
    dataset_answers : callable or None
        Data-set layer: maps a sample handle ``x`` to ``(answers, S(x))``
        where ``answers[j]`` is x's answer to the j-th question.
    fiber_sampler : callable or None
        ``(u, count, rng) -> list`` of sample handles whose answers equal
        ``u`` exactly (the fiber of the model point).
    """

    name: str
    n: int
    energy_domain: Domain
    entropy_u: Callable[[np.ndarray], float]
    closed_massieu: Callable[[np.ndarray], float] | None = None
    closed_theta_to_u: Callable[[np.ndarray], np.ndarray] | None = None
    closed_u_to_theta: Callable[[np.ndarray], np.ndarray] | None = None
    dataset_answers: Callable[[object], tuple[np.ndarray, float]] | None = None
    fiber_sampler: Callable[[np.ndarray, int, object], list] | None = None

    def __post_init__(self):
        if self.energy_domain.dimension != self.n:
            raise ValueError("energy domain dimension must equal n")


@dataclass(frozen=True)
class DualPair:
    """A parameter point with its dual energy point and both potentials."""

    theta: np.ndarray
    u: np.ndarray
    massieu: float
    entropy: float
    residual: float
    roundtrip_error: float


@dataclass(frozen=True)
class DivergenceReport:
    """Data-to-model divergence with its three-term decomposition."""

    value: float
    massieu_at: float
    entropy_of_x: float
    linear_term: float


def _as_theta(model: ModelDescriptor, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (model.n,):
        raise ValueError(f"expected a parameter vector of length {model.n}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameter vector must be finite")
    return theta


def _as_energy(model: ModelDescriptor, u) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (model.n,):
        raise ValueError(f"expected an energy vector of length {model.n}")
    if not np.all(np.isfinite(u)):
        raise ValueError("energy vector must be finite")
    return u


def _near_box_edge(domain: Domain, x: np.ndarray) -> bool:
    box = domain.bounding_box
    width = box[:, 1] - box[:, 0]
    return bool(np.any((x - box[:, 0] <= _BOX_EDGE_RTOL * width)
                       | (box[:, 1] - x <= _BOX_EDGE_RTOL * width)))


def _legendre(model: ModelDescriptor, theta: np.ndarray, tol: float):
    objective = lambda u: model.entropy_u(u) - float(theta @ u)
    result = maximize_concave(objective, model.energy_domain, tol=tol)
    if model.energy_domain.unbounded and _near_box_edge(model.energy_domain,
                                                        result.argmax):
        return None, result  # supremum escapes the artificial box
    if not result.converged:
        raise ConvergenceError(
            f"Legendre transform did not converge (best value {result.value!r},"
            f" gradient norm {result.gradient_norm:.3e})", result=result)
    return result.value, result


def massieu(model: ModelDescriptor, theta, tol: float = 1e-9) -> float:
    """Massieu function ``Phi(theta) = sup_U { S(U) - theta . U }``.

    Uses the model's closed form when present, otherwise a damped-Newton
    Legendre transform.  Returns ``math.inf`` when the supremum escapes
    the bounding box of a domain flagged unbounded.
    """
    theta = _as_theta(model, theta)
    if model.closed_massieu is not None:
        return float(model.closed_massieu(theta))
    value, _ = _legendre(model, theta, tol)
    return math.inf if value is None else value


def theta_to_u(model: ModelDescriptor, theta, tol: float = 1e-9) -> np.ndarray:
    """Energy coordinates dual to ``theta`` (the Legendre argmax)."""
    theta = _as_theta(model, theta)
    if model.closed_theta_to_u is not None:
        return np.asarray(model.closed_theta_to_u(theta), dtype=float)
    value, result = _legendre(model, theta, tol)
    if value is None:
        raise DomainError("Massieu supremum is unbounded; no dual energy point")
    return result.argmax


def u_to_theta(model: ModelDescriptor, u) -> np.ndarray:
    """Natural parameters dual to ``u`` via ``theta_j = dS/dU_j``."""
    u = _as_energy(model, u)
    if not model.energy_domain.membership(u):
        raise DomainError(f"energy point {u!r} is outside the model domain")
    if model.closed_u_to_theta is not None:
        return np.asarray(model.closed_u_to_theta(u), dtype=float)
    return grad_fd(model.entropy_u, u)


def metric_tensor(model: ModelDescriptor, theta, h=None,
                  degeneracy_tol: float = 1e-8) -> np.ndarray:
    """Metric tensor ``g = Hessian(Phi)`` at ``theta``.

    Raises :class:`DegeneracyError` when the smallest eigenvalue is
    nonpositive beyond ``degeneracy_tol``, which signals a non-canonical
    parametrization (redundant questions).
    """
    theta = _as_theta(model, theta)
    g = hess_fd(lambda t: massieu(model, t), theta, h=h)
    g = 0.5 * (g + g.T)
    min_eig = float(np.linalg.eigvalsh(g)[0])
    if min_eig <= -degeneracy_tol:
        raise DegeneracyError(
            f"metric tensor is not positive definite (min eigenvalue {min_eig:.3e})")
    return g


def canonical_check(model: ModelDescriptor, theta,
                    tol: float | None = None) -> DualPair:
    """Evaluate the canonical identity ``Phi - S(U) + theta . U = 0``.

    Also round-trips ``u_to_theta(theta_to_u(theta))`` against ``theta``
    and reports the max-abs error.  The default tolerance is 1e-9 when
    the descriptor carries closed forms and 1e-6 on numeric fallbacks.
    Raises :class:`CanonicalityError` (with the pair attached) when the
    residual exceeds the tolerance.
    """
    theta = _as_theta(model, theta)
    closed = (model.closed_massieu is not None
              and model.closed_theta_to_u is not None
              and model.closed_u_to_theta is not None)
    if tol is None:
        tol = 1e-9 if closed else 1e-6
    phi = massieu(model, theta)
    u = theta_to_u(model, theta)
    s = float(model.entropy_u(u))
    residual = abs(phi - s + float(theta @ u))
    roundtrip = float(np.max(np.abs(u_to_theta(model, u) - theta))) if model.n else 0.0
    pair = DualPair(theta=theta, u=u, massieu=phi, entropy=s,
                    residual=residual, roundtrip_error=roundtrip)
    if residual > tol:
        raise CanonicalityError(
            f"canonical identity residual {residual:.3e} exceeds {tol:.1e}", pair=pair)
    return pair


def bregman_divergence(model: ModelDescriptor, theta, zeta) -> float:
    """Divergence between model points,
    ``D(m_theta || m_zeta) = Phi(zeta) - Phi(theta) + (zeta - theta) . U(theta)``.

    This is the Bregman divergence of the (convex) Massieu function; it
    is nonnegative and vanishes exactly at ``theta = zeta``.
    """
    theta = _as_theta(model, theta)
    zeta = _as_theta(model, zeta)
    u = theta_to_u(model, theta)
    return float(massieu(model, zeta) - massieu(model, theta) + (zeta - theta) @ u)


def divergence_from_data(model: ModelDescriptor, x, theta) -> DivergenceReport:
    """Divergence of a data set from a model point,
    ``D(x || m_theta) = Phi(theta) - S(x) + sum_j theta_j <x|q_j>``.

    Nonnegative whenever the projection of ``x`` lies in the model chart.
    Requires the descriptor's data-set layer.
    """
    theta = _as_theta(model, theta)
    if model.dataset_answers is None:
        raise UnsupportedOperationError(
            f"model {model.name!r} has no data-set layer")
    answers, s_x = model.dataset_answers(x)
    answers = np.asarray(answers, dtype=float)
    phi = massieu(model, theta)
    linear = float(theta @ answers)
    return DivergenceReport(value=phi - s_x + linear, massieu_at=phi,
                            entropy_of_x=float(s_x), linear_term=linear)


def divergence_def5(model: ModelDescriptor, x, u_of_m, fiber_samples: int = 200,
                    rng=None) -> float:
    """Fiber-supremum divergence evaluated through the affine log form.

    Computes ``sup_y { S(y) + <y|L_m> } - ( S(x) + <x|L_m> )`` where the
    supremum runs over sampled data sets on the fiber of the model point
    with energy coordinates ``u_of_m``, and the log weight is evaluated
    through its affine form ``<y|L_m> = -Phi(theta) - sum_j theta_j
    <y|q_j>``.  Requires both the data-set layer and a fiber sampler.
    """
    u = _as_energy(model, u_of_m)
    if model.dataset_answers is None or model.fiber_sampler is None:
        raise UnsupportedOperationError(
            f"model {model.name!r} lacks the data-set layer or a fiber sampler")
    theta = u_to_theta(model, u)
    phi = massieu(model, theta)

    def log_weight(answers):
        return -phi - float(theta @ answers)

    best = -math.inf
    for y in model.fiber_sampler(u, fiber_samples, rng):
        ans_y, s_y = model.dataset_answers(y)
        best = max(best, s_y + log_weight(np.asarray(ans_y, dtype=float)))
    ans_x, s_x = model.dataset_answers(x)
    return best - (s_x + log_weight(np.asarray(ans_x, dtype=float)))


def pythagoras_data(model: ModelDescriptor, x, theta, zeta,
                    compliance_tol: float = 1e-9) -> float:
    """Residual of the data-model-model Pythagorean identity.

    Preconditions: ``x`` projects onto ``m_theta``, i.e. its answers
    equal ``theta_to_u(theta)`` within ``compliance_tol`` (otherwise a
    :class:`ConstraintError` reports the mismatch).  Returns
    ``|D(x||m_theta) + D(m_theta||m_zeta) - D(x||m_zeta)|``.
    """
    theta = _as_theta(model, theta)
    zeta = _as_theta(model, zeta)
    if model.dataset_answers is None:
        raise UnsupportedOperationError(
            f"model {model.name!r} has no data-set layer")
    answers, _ = model.dataset_answers(x)
    u = theta_to_u(model, theta)
    mismatch = float(np.max(np.abs(np.asarray(answers, dtype=float) - u)))
    if mismatch > compliance_tol:
        raise ConstraintError(
            f"data set does not project onto m_theta: max answer mismatch"
            f" {mismatch:.3e} exceeds {compliance_tol:.1e}")
    d_x_theta = divergence_from_data(model, x, theta).value
    d_theta_zeta = bregman_divergence(model, theta, zeta)
    d_x_zeta = divergence_from_data(model, x, zeta).value
    return abs(d_x_theta + d_theta_zeta - d_x_zeta)


def pythagoras_models(model: ModelDescriptor, theta, zeta, xi) -> tuple[float, float]:
    """Orthogonality and residual for a triple of model points.

    Returns ``(orthogonality, residual)`` where ``orthogonality =
    sum_j (zeta_j - xi_j)(U_j - V_j)`` with ``U = theta_to_u(theta)``,
    ``V = theta_to_u(zeta)``, and ``residual = |D(theta||zeta) +
    D(zeta||xi) - D(theta||xi)|``.  The residual vanishes exactly when
    the triple is orthogonal.
    """
    theta = _as_theta(model, theta)
    zeta = _as_theta(model, zeta)
    xi = _as_theta(model, xi)
    u = theta_to_u(model, theta)
    v = theta_to_u(model, zeta)
    orthogonality = float((zeta - xi) @ (u - v))
    residual = abs(bregman_divergence(model, theta, zeta)
                   + bregman_divergence(model, zeta, xi)
                   - bregman_divergence(model, theta, xi))
    return orthogonality, residual


def convexity_probe(model: ModelDescriptor, theta1, theta2, lambdas=None) -> float:
    """Worst violation of Massieu convexity along a parameter segment.

    Returns ``max_l Phi(l theta1 + (1-l) theta2) - l Phi(theta1) -
    (1-l) Phi(theta2)``; convexity means the result is <= 0 up to
    rounding.
    """
    theta1 = _as_theta(model, theta1)
    theta2 = _as_theta(model, theta2)
    if lambdas is None:
        lambdas = np.linspace(0.0, 1.0, 21)
    phi1 = massieu(model, theta1)
    phi2 = massieu(model, theta2)
    worst = -math.inf
    for lam in np.asarray(lambdas, dtype=float):
        mix = massieu(model, lam * theta1 + (1.0 - lam) * theta2)
        worst = max(worst, mix - lam * phi1 - (1.0 - lam) * phi2)
    return float(worst)


def affine_log_constant(model: ModelDescriptor, theta) -> float:
    """Constant term of the affine per-sample log weight.

    With ``L(m_theta) = alpha(theta) - sum_j theta_j q_j`` the constant
    is ``alpha(theta) = -Phi(theta)``.
    """
    return -massieu(model, theta)


def log_normalizer(model: ModelDescriptor, theta) -> float:
    """Log normalizer of the exponential weights, equal to ``+Phi(theta)``.

    This is the opposite sign convention from
    :func:`affine_log_constant`; both appear in the literature.
    """
    return massieu(model, theta)

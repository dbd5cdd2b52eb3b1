"""Two-level quantum systems (qubits).

States are 2x2 density matrices, coordinatized by the Bloch vector
``U = (tr(rho X), tr(rho Y), tr(rho Z))``.  The spin observables are the
three Pauli matrices; the canonical family consists of the Gibbs states
``rho_theta = exp(-theta . sigma) / (2 cosh |theta|)``, whose entropy is
the von Neumann entropy.  Every quantity here has a closed form, which
makes the model the primary oracle for the generic engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelDescriptor
from .errors import DomainError, EvaluationError
from .numerics import Domain, Matrix2H, eig_h2, func_h2

#: Pauli matrices as Hermitian 2x2 structures.
PAULI_X = Matrix2H(a=0.0, d=0.0, x=1.0, y=0.0)
PAULI_Y = Matrix2H(a=0.0, d=0.0, x=0.0, y=1.0)
PAULI_Z = Matrix2H(a=1.0, d=-1.0, x=0.0, y=0.0)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class DensityMatrix2:
    """A validated qubit state (Hermitian, unit trace, PSD)."""

    matrix: Matrix2H

    def __post_init__(self):
        m = self.matrix
        if abs(m.trace() - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        vals, _ = eig_h2(m)
        if vals[0] < -1e-12:
            raise ValueError("density matrix must be positive semidefinite")

    def bloch(self) -> np.ndarray:
        return rho_to_bloch(self.matrix)


def bloch_to_rho(u) -> Matrix2H:
    """State ``(I + U . sigma) / 2`` for a Bloch vector with |U| <= 1."""
    u = np.asarray(u, dtype=float)
    if u.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    if float(np.linalg.norm(u)) > 1.0 + 1e-12:
        raise DomainError("Bloch vector lies outside the unit ball")
    return Matrix2H(a=0.5 * (1.0 + u[2]), d=0.5 * (1.0 - u[2]),
                    x=0.5 * u[0], y=0.5 * u[1])


def rho_to_bloch(m: Matrix2H) -> np.ndarray:
    """Bloch vector (tr(m X), tr(m Y), tr(m Z)) of a unit-trace matrix."""
    return np.array([2.0 * m.x, 2.0 * m.y, m.a - m.d])


def von_neumann_entropy(m: Matrix2H) -> float:
    """``-tr(m ln m)`` with the 0 ln 0 = 0 convention.

    Eigenvalues are clamped at zero; anything below -1e-12 is rejected.
    """
    vals, _ = eig_h2(m)
    if vals[0] < -1e-12:
        raise DomainError("matrix is not positive semidefinite")
    s = 0.0
    for lam in vals:
        lam = max(float(lam), 0.0)
        if lam > 0.0:
            s -= lam * math.log(lam)
    return s


def entropy_bloch(u) -> float:
    """Entropy of the state with Bloch vector ``u``, via |u| only."""
    u = np.asarray(u, dtype=float)
    r = float(np.linalg.norm(u))
    if r > 1.0 + 1e-12:
        raise DomainError("Bloch vector lies outside the unit ball")
    r = min(r, 1.0)
    lam_plus = 0.5 * (1.0 + r)
    lam_minus = 0.5 * (1.0 - r)
    s = 0.0
    for lam in (lam_plus, lam_minus):
        if lam > 0.0:
            s -= lam * math.log(lam)
    return s


def theta_to_bloch(theta) -> np.ndarray:
    """Bloch vector of the Gibbs state: ``-(theta/|theta|) tanh |theta|``."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (3,):
        raise ValueError("spin parameters must have three components")
    t = float(np.linalg.norm(theta))
    if t == 0.0:
        return np.zeros(3)
    return -(theta / t) * math.tanh(t)


def bloch_to_theta(u, chart_margin: float = 1e-9) -> np.ndarray:
    """Inverse of :func:`theta_to_bloch` on the open unit ball.

    Pure states (|u| = 1) have no finite parameters; vectors closer than
    ``chart_margin`` to the boundary are rejected.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    r = float(np.linalg.norm(u))
    if r >= 1.0 - chart_margin:
        raise DomainError("Bloch vector too close to the pure-state boundary")
    if r == 0.0:
        return np.zeros(3)
    return -(u / r) * math.atanh(r)


def massieu_qubit(theta) -> float:
    """``ln(2 cosh |theta|)``, computed overflow-safe."""
    theta = np.asarray(theta, dtype=float)
    t = float(np.linalg.norm(theta))
    return float(np.logaddexp(t, -t))


def gibbs_state(theta) -> Matrix2H:
    """Normalized Gibbs state ``exp(-theta . sigma) / (2 cosh |theta|)``."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (3,):
        raise ValueError("spin parameters must have three components")
    h = Matrix2H(a=-theta[2], d=theta[2], x=-theta[0], y=-theta[1])
    expm = func_h2(h, math.exp)
    z = 2.0 * math.cosh(float(np.linalg.norm(theta)))
    return expm.scaled(1.0 / z)


def quantum_relative_entropy(rho: Matrix2H, sigma: Matrix2H) -> float:
    """``tr rho (ln rho - ln sigma)`` via the spectral decompositions.

    Requires ``sigma`` strictly positive where ``rho`` has weight: the
    value diverges otherwise and :class:`EvaluationError` is raised.
    """
    rvals, rvecs = eig_h2(rho)
    svals, svecs = eig_h2(sigma)
    if rvals[0] < -1e-12 or svals[0] < -1e-12:
        raise DomainError("relative entropy needs positive semidefinite inputs")
    total = 0.0
    for i in range(2):
        lam = max(float(rvals[i]), 0.0)
        if lam == 0.0:
            continue
        total += lam * math.log(lam)
        vi = rvecs[:, i]
        for j in range(2):
            mu = float(svals[j])
            overlap = abs(np.vdot(svecs[:, j], vi)) ** 2
            if overlap < 1e-15:
                continue
            if mu <= 0.0:
                raise EvaluationError(
                    "second argument is singular on the support of the first")
            total -= lam * overlap * math.log(mu)
    return total


def as_descriptor(membership_margin: float = 1e-12,
                  chart_margin: float = 1e-9) -> ModelDescriptor:
    """Engine descriptor for the qubit.

    Mean coordinates range over the open unit ball (membership uses
    ``membership_margin`` at the boundary); the closed parameter map is
    restricted by ``chart_margin`` as in :func:`bloch_to_theta`.  Data
    sets are Bloch vectors of arbitrary states; the model fiber over an
    interior point is a singleton.
    """
    box = np.array([[-1.0, 1.0]] * 3)

    def membership(u):
        return float(np.linalg.norm(np.asarray(u, dtype=float))) < 1.0 - membership_margin

    domain = Domain(dimension=3, bounding_box=box, membership=membership,
                    interior_point=np.zeros(3))

    def engine_entropy(u):
        # Finite-difference stencils centered on an iterate that hugs the
        # pure-state shell can poke a stencil width past it; extend the
        # entropy radially (constant 0 outside the ball) so those
        # evaluations stay finite.  Only non-member points are affected.
        u = np.asarray(u, dtype=float)
        r = float(np.linalg.norm(u))
        return entropy_bloch(u / r) if r > 1.0 else entropy_bloch(u)

    def answers(u):
        u = np.asarray(u, dtype=float)
        return u.copy(), entropy_bloch(u)

    def fiber_sampler(u, count, rng=None):
        return [np.asarray(u, dtype=float)]

    return ModelDescriptor(
        name="qubit",
        n=3,
        energy_domain=domain,
        entropy_u=engine_entropy,
        closed_massieu=massieu_qubit,
        closed_theta_to_u=theta_to_bloch,
        closed_u_to_theta=lambda u: bloch_to_theta(u, chart_margin),
        dataset_answers=answers,
        fiber_sampler=fiber_sampler,
    )

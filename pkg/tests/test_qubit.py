"""Qubit states: Bloch parametrization, entropies, Gibbs states, and
quantum relative entropy."""

import math

import numpy as np
import pytest

from infogeo import DomainError, EvaluationError, Matrix2H, get_model
from infogeo.qubit import (
    DensityMatrix2,
    bloch_to_rho,
    bloch_to_theta,
    entropy_bloch,
    gibbs_state,
    massieu_qubit,
    quantum_relative_entropy,
    rho_to_bloch,
    theta_to_bloch,
    von_neumann_entropy,
)

TANH1 = math.tanh(1.0)


def random_bloch(rng, rmax=1.0):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * rng.uniform(0.0, rmax)


# -------------------------------------------------------------- states


def test_bloch_rho_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(100):
        u = random_bloch(rng)
        assert np.allclose(rho_to_bloch(bloch_to_rho(u)), u, atol=1e-14)


def test_bloch_to_rho_basis_states():
    up = bloch_to_rho(np.array([0.0, 0.0, 1.0]))
    assert (up.a, up.d, up.x, up.y) == (1.0, 0.0, 0.0, 0.0)
    maximally_mixed = bloch_to_rho(np.zeros(3))
    assert (maximally_mixed.a, maximally_mixed.d) == (0.5, 0.5)


def test_bloch_to_rho_rejects_outside_ball():
    with pytest.raises(DomainError):
        bloch_to_rho(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        bloch_to_rho(np.array([0.5, 0.5]))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix2(Matrix2H(a=0.8, d=0.8, x=0.0))   # trace 1.6
    with pytest.raises(ValueError):
        DensityMatrix2(Matrix2H(a=1.5, d=-0.5, x=0.0))  # negative eigenvalue
    state = DensityMatrix2(bloch_to_rho(np.array([0.3, -0.4, 0.1])))
    assert np.allclose(state.bloch(), [0.3, -0.4, 0.1], atol=1e-14)


# ------------------------------------------------------------ entropies


def test_von_neumann_entropy_pure_and_mixed():
    assert von_neumann_entropy(bloch_to_rho(np.array([0.0, 0.0, 1.0]))) == 0.0
    assert von_neumann_entropy(bloch_to_rho(np.zeros(3))) == pytest.approx(
        math.log(2.0), abs=1e-15)
    mixed = bloch_to_rho(np.array([0.5, 0.0, 0.0]))
    assert von_neumann_entropy(mixed) == pytest.approx(
        0.5623351446188083, abs=1e-15)


def test_von_neumann_entropy_rejects_non_psd():
    with pytest.raises(DomainError):
        von_neumann_entropy(Matrix2H(a=1.5, d=-0.5, x=0.0))


def test_entropy_bloch_frozen_values():
    assert entropy_bloch(np.array([0.5, 0.0, 0.0])) == pytest.approx(
        0.5623351446188083, abs=1e-15)
    assert entropy_bloch(np.array([TANH1, 0.0, 0.0])) == pytest.approx(
        0.3653338550872076, abs=1e-15)
    assert entropy_bloch(np.array([0.0, 0.0, 1.0])) == 0.0
    with pytest.raises(DomainError):
        entropy_bloch(np.array([1.1, 0.0, 0.0]))


def test_entropy_bloch_agrees_with_spectral_form():
    rng = np.random.default_rng(6)
    for _ in range(100):
        u = random_bloch(rng)
        spectral = von_neumann_entropy(bloch_to_rho(u))
        assert entropy_bloch(u) == pytest.approx(spectral, abs=1e-12)


# ---------------------------------------------------------- dual charts


def test_theta_to_bloch_tanh_law():
    assert np.allclose(theta_to_bloch(np.array([1.0, 0.0, 0.0])),
                       [-TANH1, 0.0, 0.0], atol=1e-15)
    assert np.allclose(theta_to_bloch(np.zeros(3)), np.zeros(3))
    with pytest.raises(ValueError):
        theta_to_bloch(np.array([1.0, 0.0]))


def test_bloch_to_theta_inverts_theta_to_bloch():
    assert np.allclose(bloch_to_theta(np.array([0.5, 0.0, 0.0])),
                       [-0.5493061443340548, 0.0, 0.0], atol=1e-15)
    assert np.allclose(bloch_to_theta(np.zeros(3)), np.zeros(3))
    rng = np.random.default_rng(9)
    for _ in range(50):
        theta = rng.normal(size=3) * rng.uniform(0.1, 3.0)
        back = bloch_to_theta(theta_to_bloch(theta))
        assert np.allclose(back, theta, atol=1e-10)


def test_bloch_to_theta_rejects_near_pure_states():
    with pytest.raises(DomainError):
        bloch_to_theta(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(DomainError):
        bloch_to_theta(np.array([1.0 - 1e-12, 0.0, 0.0]))


# ---------------------------------------------------------- Gibbs layer


def test_massieu_qubit_values():
    assert massieu_qubit(np.zeros(3)) == pytest.approx(math.log(2.0), abs=1e-15)
    assert massieu_qubit(np.array([1.0, 0.0, 0.0])) == pytest.approx(
        1.1269280110429725, abs=1e-15)
    # Overflow-safe at large parameters.
    assert massieu_qubit(np.array([1000.0, 0.0, 0.0])) == pytest.approx(
        1000.0, abs=1e-12)


def test_gibbs_state_is_maximally_mixed_at_origin():
    g = gibbs_state(np.zeros(3))
    assert g.a == pytest.approx(0.5, abs=1e-15)
    assert g.d == pytest.approx(0.5, abs=1e-15)
    assert abs(g.x) <= 1e-15 and abs(g.y) <= 1e-15


def test_gibbs_state_bloch_vector_matches_tanh_law():
    rng = np.random.default_rng(12)
    for _ in range(50):
        theta = rng.normal(size=3) * rng.uniform(0.1, 2.5)
        assert np.allclose(rho_to_bloch(gibbs_state(theta)),
                           theta_to_bloch(theta), atol=1e-12)


# ----------------------------------------------------- relative entropy


def test_relative_entropy_frozen_values():
    pure = bloch_to_rho(np.array([0.0, 0.0, 1.0]))
    assert quantum_relative_entropy(pure, gibbs_state(np.zeros(3))) == (
        pytest.approx(math.log(2.0), abs=1e-12))
    rho = bloch_to_rho(np.array([-0.5, 0.0, 0.0]))
    sigma = gibbs_state(np.array([1.0, 0.0, 0.0]))
    assert quantum_relative_entropy(rho, sigma) == pytest.approx(
        0.06459286642416417, abs=1e-12)


def test_relative_entropy_vanishes_on_diagonal_and_is_nonnegative():
    rng = np.random.default_rng(15)
    for _ in range(200):
        rho = bloch_to_rho(random_bloch(rng, rmax=0.98))
        sigma = bloch_to_rho(random_bloch(rng, rmax=0.98))
        assert quantum_relative_entropy(rho, sigma) >= -1e-12
    rho = bloch_to_rho(np.array([0.2, 0.3, -0.1]))
    assert abs(quantum_relative_entropy(rho, rho)) <= 1e-12


def test_relative_entropy_support_violation():
    up = bloch_to_rho(np.array([0.0, 0.0, 1.0]))
    down = bloch_to_rho(np.array([0.0, 0.0, -1.0]))
    with pytest.raises(EvaluationError):
        quantum_relative_entropy(up, down)


def test_relative_entropy_rejects_non_psd():
    with pytest.raises(DomainError):
        quantum_relative_entropy(Matrix2H(a=1.5, d=-0.5, x=0.0),
                                 gibbs_state(np.zeros(3)))


# -------------------------------------------------------- model wiring


def test_qubit_descriptor_answers_and_fiber():
    model = get_model("qubit").descriptor
    x = np.array([0.3, -0.2, 0.1])
    answers, entropy = model.dataset_answers(x)
    assert np.allclose(answers, x, atol=1e-14)
    assert entropy == pytest.approx(entropy_bloch(x), abs=1e-15)
    fiber = model.fiber_sampler(x, 25, np.random.default_rng(0))
    assert len(fiber) == 1
    assert np.allclose(fiber[0], x, atol=1e-14)


def test_qubit_descriptor_membership_boundary():
    domain = get_model("qubit").descriptor.energy_domain
    assert domain.membership(np.array([0.99, 0.0, 0.0]))
    assert not domain.membership(np.array([1.0, 0.0, 0.0]))

"""Numerical kernels shared by every model.

Central finite differences, a damped-Newton maximizer for concave
objectives on open domains, a deterministic brute-force grid supremum,
and closed-form spectral calculus for 2x2 Hermitian matrices.

All routines are pure: they never mutate their inputs and contain no
hidden state, so concurrent use is safe.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EvaluationError

EPS = float(np.finfo(float).eps)
#: Default step for central first differences: balances O(h^2) truncation
#: against O(eps/h) rounding.
GRAD_STEP = EPS ** (1.0 / 3.0)
#: Default step for central second differences, where the rounding term
#: scales like eps/h^2 and the balance point moves to eps**0.25.
HESS_STEP = EPS ** 0.25

ARMIJO_C = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 60
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class Domain:
    """Open subset of R^n described by a membership predicate.

    Parameters
    ----------
    dimension : int
        Ambient dimension n.
    bounding_box : (n, 2) array
        Finite per-coordinate bounds containing every member point.
    membership : callable
        Predicate deciding strict interiority of a point.
    interior_point : (n,) array
        A point satisfying ``membership``; used as the default start of
        iterative searches.
    unbounded : bool
        True when the box is an artificial cutoff rather than a true
        boundary (the supremum may escape to infinity).
    """

    dimension: int
    bounding_box: np.ndarray
    membership: Callable[[np.ndarray], bool]
    interior_point: np.ndarray
    unbounded: bool = False

    def __post_init__(self):
        box = np.asarray(self.bounding_box, dtype=float).reshape(self.dimension, 2)
        object.__setattr__(self, "bounding_box", box)
        x0 = np.asarray(self.interior_point, dtype=float).reshape(self.dimension)
        object.__setattr__(self, "interior_point", x0)
        if not np.all(np.isfinite(box)):
            raise ValueError("bounding box must be finite")
        if np.any(box[:, 1] <= box[:, 0]):
            raise ValueError("bounding box must have positive extent")
        if not self.membership(x0):
            raise ValueError("interior_point must satisfy membership")


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of an iterative maximization."""

    argmax: np.ndarray
    value: float
    iterations: int
    gradient_norm: float
    converged: bool


@dataclass(frozen=True)
class Matrix2H:
    """2x2 Hermitian matrix stored as four real degrees of freedom.

    The represented matrix is ``[[a, x - i y], [x + i y, d]]``: ``a`` and
    ``d`` are the real diagonal, ``x + i y`` is the lower off-diagonal
    entry.
    """

    a: float
    d: float
    x: float
    y: float = 0.0

    def to_array(self) -> np.ndarray:
        off = complex(self.x, self.y)
        return np.array([[self.a, off.conjugate()], [off, self.d]], dtype=complex)

    @staticmethod
    def from_array(m, tol: float = 1e-10) -> "Matrix2H":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if (abs(m[0, 0].imag) > tol or abs(m[1, 1].imag) > tol
                or abs(m[0, 1] - m[1, 0].conjugate()) > tol):
            raise ValueError("matrix is not Hermitian within tolerance")
        return Matrix2H(float(m[0, 0].real), float(m[1, 1].real),
                        float(m[1, 0].real), float(m[1, 0].imag))

    @staticmethod
    def identity() -> "Matrix2H":
        return Matrix2H(1.0, 1.0, 0.0, 0.0)

    @staticmethod
    def zero() -> "Matrix2H":
        return Matrix2H(0.0, 0.0, 0.0, 0.0)

    def trace(self) -> float:
        return self.a + self.d

    def scaled(self, s: float) -> "Matrix2H":
        return Matrix2H(s * self.a, s * self.d, s * self.x, s * self.y)

    def plus(self, other: "Matrix2H") -> "Matrix2H":
        return Matrix2H(self.a + other.a, self.d + other.d,
                        self.x + other.x, self.y + other.y)


def _steps(x: np.ndarray, h, default: float) -> np.ndarray:
    if h is None:
        return default * np.maximum(1.0, np.abs(x))
    h = np.asarray(h, dtype=float)
    if h.ndim == 0:
        return np.full(x.shape, float(h))
    return h.reshape(x.shape).copy()


def _eval(f, x) -> float:
    v = float(f(x))
    if not math.isfinite(v):
        raise EvaluationError(f"objective returned non-finite value at {x!r}")
    return v


def grad_fd(f: Callable[[np.ndarray], float], x, h=None) -> np.ndarray:
    """Central-difference gradient of ``f`` at ``x``.

    ``h`` may be a scalar or per-coordinate array; the default is
    ``eps**(1/3) * max(1, |x_j|)`` per coordinate.  Raises
    :class:`EvaluationError` if ``f`` is non-finite at a stencil point.
    """
    x = np.asarray(x, dtype=float)
    hs = _steps(x, h, GRAD_STEP)
    g = np.empty(x.shape)
    for j in range(x.size):
        e = np.zeros(x.size)
        e[j] = hs[j]
        g[j] = (_eval(f, x + e) - _eval(f, x - e)) / (2.0 * hs[j])
    return g


def hess_fd(f: Callable[[np.ndarray], float], x, h=None) -> np.ndarray:
    """Symmetrized central-difference Hessian of ``f`` at ``x``.

    The default step is ``eps**0.25 * max(1, |x_j|)`` per coordinate.
    """
    x = np.asarray(x, dtype=float)
    hs = _steps(x, h, HESS_STEP)
    n = x.size
    hess = np.empty((n, n))
    f0 = _eval(f, x)
    for j in range(n):
        ej = np.zeros(n)
        ej[j] = hs[j]
        hess[j, j] = (_eval(f, x + ej) - 2.0 * f0 + _eval(f, x - ej)) / hs[j] ** 2
        for k in range(j + 1, n):
            ek = np.zeros(n)
            ek[k] = hs[k]
            v = (_eval(f, x + ej + ek) - _eval(f, x + ej - ek)
                 - _eval(f, x - ej + ek) + _eval(f, x - ej - ek))
            hess[j, k] = hess[k, j] = v / (4.0 * hs[j] * hs[k])
    return 0.5 * (hess + hess.T)


def _ascent_direction(grad: np.ndarray, hess: np.ndarray) -> np.ndarray:
    # Newton direction requires the Hessian to be negative definite; test
    # via Cholesky of -H and fall back to plain gradient ascent otherwise.
    try:
        low = np.linalg.cholesky(-hess)
        p = np.linalg.solve(low.T, np.linalg.solve(low, grad))
    except np.linalg.LinAlgError:
        return grad.copy()
    if not np.all(np.isfinite(p)) or float(p @ grad) <= 0.0:
        return grad.copy()
    return p


def maximize_concave(f: Callable[[np.ndarray], float], domain: Domain,
                     x0=None, tol: float = 1e-8) -> OptimizationResult:
    """Maximize a concave ``f`` over an open domain by damped Newton steps.

    Every iterate satisfies ``domain.membership``; candidate steps are
    halved (at most ``MAX_BACKTRACKS`` times) until they are both inside
    the domain and pass an Armijo sufficient-increase test.  When the
    finite-difference Hessian is not negative definite the step falls
    back to gradient ascent.  Success means the gradient norm dropped to
    ``tol`` or below; hitting the iteration cap returns the best iterate
    with ``converged=False``.
    """
    x = domain.interior_point if x0 is None else np.asarray(x0, dtype=float).copy()
    if not domain.membership(x):
        raise DomainError("starting point is outside the domain")
    fx = _eval(f, x)
    gnorm = math.inf
    for it in range(MAX_ITERATIONS):
        grad = grad_fd(f, x)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol:
            return OptimizationResult(x, fx, it, gnorm, True)
        hess = hess_fd(f, x)
        p = _ascent_direction(grad, hess)
        slope = float(grad @ p)
        t = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            cand = x + t * p
            if domain.membership(cand):
                fc = _eval(f, cand)
                if fc >= fx + ARMIJO_C * t * slope:
                    x, fx = cand, fc
                    accepted = True
                    break
            t *= BACKTRACK_FACTOR
        if not accepted:
            # No admissible improving step along either direction: stalled.
            return OptimizationResult(x, fx, it + 1, gnorm, False)
    grad = grad_fd(f, x)
    gnorm = float(np.linalg.norm(grad))
    return OptimizationResult(x, fx, MAX_ITERATIONS, gnorm, gnorm <= tol)


def grid_sup(f: Callable[[np.ndarray], float], domain: Domain,
             points_per_axis: int) -> tuple[np.ndarray, float]:
    """Brute-force supremum of ``f`` over a regular grid on the domain box.

    Intended as a slow, assumption-free oracle for dimensions n <= 3.
    Grid points failing ``domain.membership`` are skipped.  Ties are
    broken deterministically in favor of the lowest linear grid index
    (row-major over the axes in coordinate order).
    """
    n = domain.dimension
    if n > 3:
        raise ValueError("grid_sup is restricted to dimension <= 3")
    if points_per_axis < 2:
        raise ValueError("points_per_axis must be at least 2")
    axes = [np.linspace(domain.bounding_box[j, 0], domain.bounding_box[j, 1],
                        points_per_axis) for j in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    best_x = None
    best_v = -math.inf
    for row in points:
        if not domain.membership(row):
            continue
        v = float(f(row))
        if not math.isfinite(v):
            raise EvaluationError(f"objective returned non-finite value at {row!r}")
        if v > best_v:
            best_v = v
            best_x = row
    if best_x is None:
        raise DomainError("no grid point satisfies the domain membership")
    return best_x.copy(), best_v


def eig_h2(m: Matrix2H) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues ascending and
    orthonormal eigenvectors as the columns of ``vectors``.
    """
    t = 0.5 * (m.a + m.d)
    z = 0.5 * (m.a - m.d)
    off2 = m.x * m.x + m.y * m.y
    r = math.sqrt(z * z + off2)
    vals = np.array([t - r, t + r])
    if off2 == 0.0:
        # Diagonal matrix: eigenvectors are the standard basis, ordered
        # by eigenvalue.
        if z <= 0.0:
            vecs = np.eye(2, dtype=complex)
        else:
            vecs = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        return vals, vecs
    off = complex(m.x, m.y)
    if z >= 0.0:
        # (r+z) stays well away from cancellation for z >= 0.
        v_plus = np.array([r + z, off], dtype=complex)
        v_minus = np.array([off.conjugate(), -(r + z)], dtype=complex)
    else:
        v_plus = np.array([off.conjugate(), r - z], dtype=complex)
        v_minus = np.array([z - r, off], dtype=complex)
    v_plus = v_plus / np.linalg.norm(v_plus)
    v_minus = v_minus / np.linalg.norm(v_minus)
    return vals, np.stack([v_minus, v_plus], axis=-1)


def func_h2(m: Matrix2H, g: Callable[[float], float]) -> Matrix2H:
    """Apply a scalar function to a 2x2 Hermitian matrix spectrally.

    Raises :class:`EvaluationError` when ``g`` is undefined or non-finite
    on an eigenvalue.
    """
    vals, vecs = eig_h2(m)
    try:
        gv = [float(g(v)) for v in vals]
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvaluationError(f"scalar function undefined on spectrum {vals}") from exc
    if not all(math.isfinite(v) for v in gv):
        raise EvaluationError(f"scalar function non-finite on spectrum {vals}")
    out = (gv[0] * np.outer(vecs[:, 0], vecs[:, 0].conjugate())
           + gv[1] * np.outer(vecs[:, 1], vecs[:, 1].conjugate()))
    return Matrix2H(float(out[0, 0].real), float(out[1, 1].real),
                    float(out[1, 0].real), float(out[1, 0].imag))

"""Dense complex linear algebra and quadrature primitives every other module builds on."""
from typing import Callable, List, NamedTuple, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, PositiveFloat

from qsg.harness.config import Config
from qsg.harness.errors import DimensionError, DomainError, NumericError, QuadratureError

# Type aliases for better readability
CMatrix = np.ndarray
MatrixFunction = Callable[[float], np.ndarray]
ScalarMap = Callable[[float], float]
EigenPair = Tuple[complex, np.ndarray]

# Simpson panels are only accepted after this many refinements of [a, b].
_MIN_REFINEMENTS = 2
# Absolute tolerances below this multiple of the rounding level cannot be met.
_ROUNDOFF_FACTOR = 64.0


class ToleranceContext(BaseModel):
    """Numerical tolerances shared by every rank, quadrature, eigenvalue and ODE decision."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    rank_tol: PositiveFloat = Config.RANK_TOL
    quad_tol: PositiveFloat = Config.QUAD_TOL
    eig_tol: PositiveFloat = Config.EIG_TOL
    ode_tol: PositiveFloat = Config.ODE_TOL


class SingularValueDecomposition(NamedTuple):
    values: np.ndarray
    left: np.ndarray
    right: np.ndarray


def as_cmatrix(x) -> CMatrix:
    """
    Coerces x into a finite complex128 matrix. Scalars become 1x1, vectors become columns.

    :param x: Anything numpy can turn into an array of numbers.
    :return: A fresh complex128 array of dimension 2.
    """
    matrix = np.array(x, dtype=np.complex128)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    elif matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    elif matrix.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array of dimension {matrix.ndim}")
    if not np.all(np.isfinite(matrix)):
        raise NumericError("matrix has non-finite entries")
    return matrix


def require_square(matrix: CMatrix, what: str = "matrix"):
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {matrix.shape}")


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value; 0 for an empty matrix."""
    if matrix.size == 0:
        return 0.0
    return float(scipy.linalg.norm(np.atleast_2d(matrix), 2))


def expm(matrix) -> CMatrix:
    """
    Matrix exponential by scaling and squaring with a Pade core.

    :param matrix: A square matrix.
    :return: e^matrix.
    """
    matrix = as_cmatrix(matrix)
    require_square(matrix, "expm argument")
    if matrix.size == 0:
        return matrix
    result = scipy.linalg.expm(matrix)
    if not np.all(np.isfinite(result)):
        raise NumericError("matrix exponential overflowed", residual=float("inf"))
    return result


def eig(matrix) -> List[EigenPair]:
    """
    Eigenvalues with algebraic multiplicity and unit right eigenvectors.
    LAPACK reduces to Hessenberg form and runs shifted QR with deflation.

    :param matrix: A square matrix.
    :return: n pairs (eigenvalue, unit eigenvector) in solver order.
    """
    matrix = as_cmatrix(matrix)
    require_square(matrix, "eig argument")
    n = matrix.shape[0]
    if n == 0:
        return []
    try:
        values, vectors = scipy.linalg.eig(matrix)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"eigenvalue iteration did not converge: {exc}") from exc
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    residuals = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
    worst = float(residuals.max())
    if worst > Config.EIG_RESIDUAL_FACTOR * operator_norm(matrix):
        raise NumericError(f"eigenpair residual {worst:.3e} exceeds target", residual=worst)
    return [(complex(values[k]), vectors[:, k]) for k in range(n)]


def svd(matrix) -> SingularValueDecomposition:
    """
    Full singular value decomposition M = U diag(values) V*.

    :param matrix: Any finite matrix.
    :return: values (descending), left singular vectors U and right singular vectors V as columns.
    """
    matrix = as_cmatrix(matrix)
    rows, cols = matrix.shape
    if matrix.size == 0:
        return SingularValueDecomposition(
            np.zeros(0), np.eye(rows, dtype=np.complex128), np.eye(cols, dtype=np.complex128))
    try:
        left, values, right_h = scipy.linalg.svd(matrix, lapack_driver="gesdd")
    except scipy.linalg.LinAlgError:
        try:
            left, values, right_h = scipy.linalg.svd(matrix, lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:
            raise NumericError(f"singular value decomposition failed: {exc}") from exc
    return SingularValueDecomposition(values, left, right_h.conj().T)


def _simpson(a: float, b: float, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth, level):
    m = 0.5 * (a + b)
    flm = np.asarray(f(0.5 * (a + m)), dtype=np.complex128)
    frm = np.asarray(f(0.5 * (m + b)), dtype=np.complex128)
    left = _simpson(a, m, fa, flm, fm)
    right = _simpson(m, b, fm, frm, fb)
    delta = left + right - whole
    estimate = float(np.max(np.abs(delta))) / 15.0
    if estimate <= tol and level >= _MIN_REFINEMENTS:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson depth exhausted on [{a:.6g}, {b:.6g}]", estimate=estimate)
    return (_adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, level + 1)
            + _adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, level + 1))


def quad_operator(f: MatrixFunction, a: float, b: float, tol: float = Config.QUAD_TOL) -> np.ndarray:
    """
    Entrywise adaptive composite Simpson quadrature of a matrix-valued integrand.

    Panels are halved until the halving estimate |S2 - S1|/15 meets the panel's share
    of tol, with at most Config.QUAD_MAX_DEPTH halvings.

    :param f: Continuous map from [a, b] to arrays of a fixed shape.
    :param a: Lower limit.
    :param b: Upper limit, b >= a.
    :param tol: Absolute tolerance per entry.
    :return: The integral, complex valued, same shape as f's values.
    """
    if b < a:
        raise DomainError(f"integration limits out of order: [{a}, {b}]")
    if tol <= 0:
        raise DomainError(f"quadrature tolerance must be positive, got {tol}")
    fa = np.asarray(f(a), dtype=np.complex128)
    if b == a:
        return np.zeros_like(fa)
    m = 0.5 * (a + b)
    fm = np.asarray(f(m), dtype=np.complex128)
    fb = np.asarray(f(b), dtype=np.complex128)
    magnitude = max(float(np.max(np.abs(fa))), float(np.max(np.abs(fm))), float(np.max(np.abs(fb))))
    floor = _ROUNDOFF_FACTOR * np.finfo(float).eps * (b - a) * magnitude
    whole = _simpson(a, b, fa, fm, fb)
    return _adaptive_simpson(f, a, b, fa, fm, fb, whole, max(tol, floor), Config.QUAD_MAX_DEPTH, 0)


def quad_scalar(a_fun: ScalarMap, lo: float, hi: float, tol: float = Config.QUAD_TOL) -> float:
    """Integral of a real scalar function over [lo, hi] by the same adaptive rule."""
    value = quad_operator(lambda u: np.asarray(a_fun(u), dtype=float), lo, hi, tol)
    return float(np.real(value))

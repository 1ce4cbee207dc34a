"""
Finite-dimensional operators with the subspaces the spectral theory talks about:
kernels, ranges, their power chains, the hyper-range and quotients by invariant subspaces.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from qsg.harness.errors import DimensionError, InvarianceError, NumericError
from qsg.numerics.numkernel import (
    SingularValueDecomposition,
    ToleranceContext,
    as_cmatrix,
    operator_norm,
    require_square,
    svd,
)

# Orthonormal bases are accepted up to this deviation of B*B from the identity.
_ORTHONORMALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FiniteOperator:
    """
    A square complex matrix together with the tolerances used for rank decisions on it.

    scale is an optional reference magnitude. Operators formed as a difference of two
    large terms set it to the size of those terms, so singular values that are pure
    cancellation noise are classified as zero.
    """
    matrix: np.ndarray
    tol: ToleranceContext = field(default_factory=ToleranceContext)
    scale: Optional[float] = None

    def __post_init__(self):
        matrix = as_cmatrix(self.matrix)
        require_square(matrix, "operator matrix")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def singular(self) -> SingularValueDecomposition:
        return svd(self.matrix)

    @property
    def norm(self) -> float:
        values = self.singular.values
        return float(values[0]) if values.size else 0.0

    def rank_cutoff(self) -> float:
        """Singular values at or below this are treated as zero."""
        reference = max(self.norm, self.scale or 0.0)
        if reference == 0.0:
            return self.tol.rank_tol
        return self.tol.rank_tol * reference

    def rank(self) -> int:
        return int(np.count_nonzero(self.singular.values > self.rank_cutoff()))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^ambient_dim held as a matrix with orthonormal columns."""
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.complex128)
        if basis.ndim == 1:
            basis = basis.reshape(-1, 1)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionError(f"basis of shape {basis.shape} does not live in C^{self.ambient_dim}")
        gram = basis.conj().T @ basis
        if gram.size and operator_norm(gram - np.eye(gram.shape[0])) > _ORTHONORMALITY_TOL:
            raise NumericError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))

    def complement(self) -> "Subspace":
        """Orthogonal complement in C^ambient_dim."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        if self.dim == self.ambient_dim:
            return Subspace.zero(self.ambient_dim)
        return Subspace(self.ambient_dim, scipy.linalg.null_space(self.basis.conj().T))


@dataclass(frozen=True)
class FredholmData:
    alpha: int
    beta: int
    is_fredholm: bool = True

    @property
    def index(self) -> int:
        return self.alpha - self.beta


def shifted(T: FiniteOperator, mu: complex) -> FiniteOperator:
    """
    mu*I - T, remembering the size of the two terms as the rank reference scale.
    """
    matrix = mu * np.eye(T.dim, dtype=np.complex128) - T.matrix
    return FiniteOperator(matrix, T.tol, scale=max(abs(mu), T.norm, T.scale or 0.0))


def _column_space(matrix: np.ndarray, cutoff: float, ambient_dim: int) -> Subspace:
    if matrix.size == 0:
        return Subspace.zero(ambient_dim)
    decomposition = svd(matrix)
    rank = int(np.count_nonzero(decomposition.values > cutoff))
    return Subspace(ambient_dim, decomposition.left[:, :rank])


def _null_space(matrix: np.ndarray, cutoff: float, ambient_dim: int) -> Subspace:
    if matrix.shape[0] == 0:
        return Subspace.full(ambient_dim)
    decomposition = svd(matrix)
    rank = int(np.count_nonzero(decomposition.values > cutoff))
    return Subspace(ambient_dim, decomposition.right[:, rank:])


def kernel(T: FiniteOperator) -> Subspace:
    """N(T): right singular vectors whose singular value is at most rank_cutoff."""
    return Subspace(T.dim, T.singular.right[:, T.rank():])


def range_space(T: FiniteOperator) -> Subspace:
    """Rg(T): left singular vectors whose singular value exceeds rank_cutoff."""
    return Subspace(T.dim, T.singular.left[:, :T.rank()])


def power_kernel(T: FiniteOperator, n: int) -> Subspace:
    """
    N(T^n), grown one power at a time: N(T^(k+1)) is the kernel of T followed by
    projection onto the complement of N(T^k). Rank decisions stay relative to T itself,
    so a power that is numerically zero is recognised as such.
    """
    if n < 1:
        raise DimensionError(f"power must be at least 1, got {n}")
    current = kernel(T)
    for _ in range(1, n):
        if current.dim == T.dim:
            break
        complement = current.complement()
        step = _null_space(complement.basis.conj().T @ T.matrix, T.rank_cutoff(), T.dim)
        if step.dim == current.dim:
            break
        current = step
    return current


def power_range(T: FiniteOperator, n: int) -> Subspace:
    """Rg(T^n), grown one power at a time as the range of T on Rg(T^k)."""
    if n < 1:
        raise DimensionError(f"power must be at least 1, got {n}")
    current = range_space(T)
    for _ in range(1, n):
        if current.dim == 0:
            break
        step = _column_space(T.matrix @ current.basis, T.rank_cutoff(), T.dim)
        if step.dim == current.dim:
            break
        current = step
    return current


def range_chain_dims(T: FiniteOperator, max_power: int) -> List[int]:
    """Dimensions of Rg(T^k) for k = 1 .. max_power."""
    dims = []
    current = range_space(T)
    for _ in range(max_power):
        dims.append(current.dim)
        current = _column_space(T.matrix @ current.basis, T.rank_cutoff(), T.dim)
    return dims


def hyper_range(T: FiniteOperator) -> Subspace:
    """Rg^inf(T), the intersection of all Rg(T^n); the chain is stable by n = dim."""
    if T.dim == 0:
        return Subspace.zero(0)
    return power_range(T, T.dim)


def subspace_contained(U: Subspace, V: Subspace, tol: float) -> Tuple[bool, float]:
    """
    Whether U lies in V, measured by ||(I - P_V) B_U||.

    :return: (defect <= tol, defect)
    """
    if U.ambient_dim != V.ambient_dim:
        raise DimensionError(f"subspaces live in C^{U.ambient_dim} and C^{V.ambient_dim}")
    if U.dim == 0:
        return True, 0.0
    residual = U.basis - V.basis @ (V.basis.conj().T @ U.basis)
    defect = operator_norm(residual)
    return defect <= tol, defect


def invariance_defect(T: FiniteOperator, M: Subspace) -> float:
    """||(I - P_M) T B_M||, zero exactly when M is T-invariant."""
    if M.ambient_dim != T.dim:
        raise DimensionError(f"subspace of C^{M.ambient_dim} used with an operator on C^{T.dim}")
    if M.dim == 0:
        return 0.0
    image = T.matrix @ M.basis
    return operator_norm(image - M.basis @ (M.basis.conj().T @ image))


def is_semi_regular(T: FiniteOperator) -> Tuple[bool, float]:
    """
    T is semi-regular when its range is closed (always, here) and N(T) lies in Rg^inf(T).

    :return: (flag, containment defect)
    """
    return subspace_contained(kernel(T), hyper_range(T), T.tol.rank_tol)


def fredholm_data(T: FiniteOperator) -> FredholmData:
    """Nullity and co-rank; equal for every square matrix."""
    rank = T.rank()
    alpha = T.dim - rank
    beta = T.dim - range_space(T).dim
    if alpha != beta:
        raise NumericError(f"nullity {alpha} and co-rank {beta} disagree for a square operator")
    return FredholmData(alpha=alpha, beta=beta)


def quotient_operator(T: FiniteOperator, M: Subspace) -> FiniteOperator:
    """
    The operator T induces on C^n / M, realised on the orthogonal complement of M.

    :raise InvarianceError: if M is not T-invariant to rank_tol * ||T||.
    """
    defect = invariance_defect(T, M)
    if defect > T.tol.rank_tol * T.norm:
        raise InvarianceError(f"subspace is not invariant, defect {defect:.3e}", defect=defect)
    complement = M.complement().basis
    return FiniteOperator(complement.conj().T @ T.matrix @ complement, T.tol)


def is_bounded_below(T: FiniteOperator) -> Tuple[bool, float]:
    """
    ||Tx|| >= c||x|| with c > 0 read off the smallest singular value.
    The zero-dimensional operator is bounded below with sigma_min = inf.

    :return: (sigma_min > rank_cutoff, sigma_min)
    """
    if T.dim == 0:
        return True, float("inf")
    sigma_min = float(T.singular.values[-1])
    return sigma_min > T.rank_cutoff(), sigma_min

"""Spectral sets of finite-dimensional operators and the comparisons made between them."""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from qsg.harness.config import Config
from qsg.harness.errors import DimensionError, DomainError, NumericError
from qsg.numerics.numkernel import eig
from qsg.numerics.operators import (
    FiniteOperator,
    is_bounded_below,
    is_semi_regular,
    kernel,
    power_kernel,
    range_space,
    shifted,
)

SpectralPoint = Tuple[complex, int]

_EPS = float(np.finfo(float).eps)
# Splitting radii of defective eigenvalues are widened by this factor before grouping.
_SPLITTING_FACTOR = 10.0


class SpectrumKind(str, Enum):
    ORDINARY = "Ordinary"
    POINT = "Point"
    APPROXIMATE = "Approximate"
    RESIDUAL = "Residual"
    ESSENTIAL = "Essential"
    REGULAR = "Regular"


@dataclass(frozen=True)
class SpectralSet:
    kind: SpectrumKind
    points: Tuple[SpectralPoint, ...]
    match_tol: float
    eig_tol: float = Config.EIG_TOL

    @property
    def values(self) -> np.ndarray:
        return np.array([value for value, _ in self.points], dtype=np.complex128)

    @property
    def total_multiplicity(self) -> int:
        return sum(multiplicity for _, multiplicity in self.points)

    def is_empty(self) -> bool:
        return not self.points


@dataclass(frozen=True, eq=False)
class ApproxEigenpair:
    lam: complex
    vector: np.ndarray
    eta: float


@dataclass(frozen=True, eq=False)
class PseudospectrumGrid:
    real_axis: np.ndarray
    imag_axis: np.ndarray
    sigma_min: np.ndarray  # rows follow imag_axis, columns follow real_axis


def _sort_key(value: complex):
    return round(value.real, 12), round(value.imag, 12)


def merge_points(values: Iterable[complex], tol: float) -> Tuple[SpectralPoint, ...]:
    """
    Greedy clustering of eigenvalues: a value joins the first cluster whose
    representative lies within tol * (1 + |value|), otherwise it opens a new one.

    :return: (representative, multiplicity) pairs in deterministic order.
    """
    clusters: List[List] = []
    for value in sorted((complex(v) for v in values), key=_sort_key):
        for cluster in clusters:
            if abs(cluster[0] - value) <= tol * (1.0 + abs(value)):
                cluster[1] += 1
                break
        else:
            clusters.append([value, 1])
    return tuple((complex(value), int(multiplicity)) for value, multiplicity in clusters)


def _defective_groups(T: FiniteOperator, values: List[complex]) -> Tuple[List[SpectralPoint], List[complex]]:
    """
    Pull out eigenvalues that LAPACK split off a defective one. A block of size m perturbed
    at rounding level scatters its eigenvalue over a radius of about (n eps)^(1/m) ||T||, so a
    group of m values within that radius of their mean is merged when lambda - T at the mean
    really has an m-dimensional generalised eigenspace. The mean of the group is accurate to
    rounding level.

    :return: (merged points, values left over)
    """
    remaining = sorted(values, key=_sort_key)
    groups: List[SpectralPoint] = []
    scale = max(1.0, T.norm)
    for size in range(len(remaining), 1, -1):
        radius = _SPLITTING_FACTOR * scale * (T.dim * _EPS) ** (1.0 / size)
        index = 0
        while index < len(remaining) and len(remaining) >= size:
            anchor = remaining[index]
            nearest = sorted(remaining, key=lambda value: (abs(value - anchor), _sort_key(value)))[:size]
            centre = complex(np.mean(nearest))
            if (max(abs(value - centre) for value in nearest) <= radius
                    and power_kernel(shifted(T, centre), size).dim >= size):
                groups.append((centre, size))
                for value in nearest:
                    remaining.remove(value)
            else:
                index += 1
    return groups, remaining


def eigenvalue_clusters(T: FiniteOperator) -> Tuple[SpectralPoint, ...]:
    """Distinct eigenvalues of T with algebraic multiplicities, defective ones merged back together."""
    values = [complex(value) for value, _ in eig(T.matrix)]
    groups, remaining = _defective_groups(T, values)
    return tuple(sorted(groups + list(merge_points(remaining, T.tol.eig_tol)), key=lambda point: _sort_key(point[0])))


def make_spectral_set(kind: SpectrumKind, points: Sequence[SpectralPoint],
                      eig_tol: float = Config.EIG_TOL) -> SpectralSet:
    largest = max((abs(value) for value, _ in points), default=0.0)
    match_tol = max(eig_tol, 1e-6 * (1.0 + largest))
    ordered = tuple(sorted(points, key=lambda point: _sort_key(point[0])))
    return SpectralSet(kind=kind, points=ordered, match_tol=match_tol, eig_tol=eig_tol)


def _belongs(T: FiniteOperator, lam: complex, kind: SpectrumKind) -> bool:
    target = shifted(T, lam)
    if kind is SpectrumKind.ORDINARY:
        return True
    if kind is SpectrumKind.POINT:
        return kernel(target).dim > 0
    if kind is SpectrumKind.APPROXIMATE:
        return not is_bounded_below(target)[0]
    if kind is SpectrumKind.RESIDUAL:
        return range_space(target).dim < T.dim
    if kind is SpectrumKind.REGULAR:
        return not is_semi_regular(target)[0]
    raise DomainError(f"no membership test for spectrum kind {kind}")


def spectrum(T: FiniteOperator, kind: SpectrumKind) -> SpectralSet:
    """
    Spectral set of the given kind. Candidates are the eigenvalues of T; each kind
    keeps those passing its own test (kernel, bounded below, dense range or
    semi-regularity of lambda - T). The essential spectrum is empty in finite dimension.
    """
    kind = SpectrumKind(kind)
    eig_tol = T.tol.eig_tol
    if kind is SpectrumKind.ESSENTIAL:
        return make_spectral_set(kind, (), eig_tol)
    candidates = eigenvalue_clusters(T)
    kept = [(value, multiplicity) for value, multiplicity in candidates if _belongs(T, value, kind)]
    return make_spectral_set(kind, kept, eig_tol)


def exp_image(S: SpectralSet, s: float) -> SpectralSet:
    """{e^(lambda s)} with multiplicities; colliding images are merged and their multiplicities added."""
    if s < 0:
        raise DomainError(f"exponent time must be non-negative, got {s}")
    images = []
    for value, multiplicity in S.points:
        images.extend([complex(np.exp(value * s))] * multiplicity)
    return make_spectral_set(S.kind, merge_points(images, S.eig_tol), S.eig_tol)


def inclusion_defect(S1: SpectralSet, S2: SpectralSet) -> float:
    """max over S1 of the distance to the nearest point of S2."""
    if S1.is_empty():
        return 0.0
    if S2.is_empty():
        return float("inf")
    distances = np.abs(S1.values[:, None] - S2.values[None, :])
    return float(distances.min(axis=1).max())


def is_included(S1: SpectralSet, S2: SpectralSet) -> Tuple[bool, float]:
    defect = inclusion_defect(S1, S2)
    return defect <= max(S1.match_tol, S2.match_tol), defect


def collapse_defect(T: FiniteOperator) -> float:
    """
    Largest two-sided distance between the ordinary spectrum and the point, approximate
    and residual spectra. Each is computed along its own membership test, and in finite
    dimension all four coincide, so the result should be 0.
    """
    ordinary = spectrum(T, SpectrumKind.ORDINARY)
    worst = 0.0
    for kind in (SpectrumKind.POINT, SpectrumKind.APPROXIMATE, SpectrumKind.RESIDUAL):
        other = spectrum(T, kind)
        if other.total_multiplicity != ordinary.total_multiplicity:
            return float("inf")
        worst = max(worst, inclusion_defect(ordinary, other), inclusion_defect(other, ordinary))
    return worst


def approx_eigenpair(T: FiniteOperator, lam: complex) -> ApproxEigenpair:
    """
    Unit x minimising ||(lambda - T)x||: the right singular vector of the smallest singular value.
    """
    if T.dim == 0:
        raise DimensionError("no eigenvectors in a zero-dimensional space")
    target = shifted(T, lam)
    decomposition = target.singular
    vector = decomposition.right[:, -1]
    eta = float(decomposition.values[-1])
    recomputed = float(np.linalg.norm(target.matrix @ vector))
    if abs(recomputed - eta) > 1e-10 * max(1.0, target.norm):
        raise NumericError(f"smallest singular pair is inconsistent: {recomputed} vs {eta}",
                           residual=abs(recomputed - eta))
    return ApproxEigenpair(lam=complex(lam), vector=vector, eta=eta)


def _axis(bounds: Tuple[float, float], count: int) -> np.ndarray:
    lo, hi = bounds
    if not hi >= lo:
        raise DomainError(f"axis bounds out of order: {bounds}")
    return np.linspace(lo, hi, count)


def pseudospectrum_grid(T: FiniteOperator, re_bounds: Tuple[float, float],
                        im_bounds: Tuple[float, float],
                        resolution: Union[int, Tuple[int, int]]) -> PseudospectrumGrid:
    """
    sigma_min(lambda I - T) over a rectangular grid of lambda.

    :param resolution: Nodes per axis, or (real nodes, imaginary nodes); at least 2 each.
    """
    real_count, imag_count = (resolution, resolution) if isinstance(resolution, int) else resolution
    if real_count < 2 or imag_count < 2:
        raise DomainError(f"pseudospectrum resolution must be at least 2 per axis, got {resolution}")
    real_axis = _axis(re_bounds, real_count)
    imag_axis = _axis(im_bounds, imag_count)
    identity = np.eye(T.dim, dtype=np.complex128)
    sigma_min = np.empty((imag_count, real_count))
    for row, y in enumerate(imag_axis):
        for col, x in enumerate(real_axis):
            values = scipy.linalg.svdvals(complex(x, y) * identity - T.matrix)
            sigma_min[row, col] = values[-1] if values.size else np.inf
    return PseudospectrumGrid(real_axis=real_axis, imag_axis=imag_axis, sigma_min=sigma_min)

"""Built-in backends, seeded random generators and the default scenario for each catalog entry."""
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from qsg.harness.config import Config
from qsg.harness.errors import CatalogError
from qsg.harness.models import BackendSpec, GridSpec, ScenarioConfig
from qsg.numerics.numkernel import ToleranceContext
from qsg.semigroups.quasi_semigroup import (
    ConstantQuasiSemigroup,
    EvolutionQuasiSemigroup,
    QuasiSemigroup,
    ScaledQuasiSemigroup,
)
from qsg.semigroups.scalar_functions import get_matrix_family, get_scalar_function

BackendBuilder = Callable[[int, ToleranceContext], QuasiSemigroup]


def random_normal_matrix(seed: int, dim: int = Config.RANDOM_DIM) -> np.ndarray:
    """U diag(d) U* with U Haar-like unitary and eigenvalues d in the square [-1, 1] x [-1, 1]i."""
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    unitary, _ = np.linalg.qr(gaussian)
    eigenvalues = rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
    return unitary @ np.diag(eigenvalues) @ unitary.conj().T


def random_general_matrix(seed: int, dim: int = Config.RANDOM_DIM) -> np.ndarray:
    """Complex Gaussian matrix scaled so its spectral radius is about 1."""
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return gaussian / math.sqrt(2.0 * dim)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    build: BackendBuilder
    scenario_defaults: Dict[str, Any] = field(default_factory=dict)


def _constant(matrix, name):
    return lambda seed, tol: ConstantQuasiSemigroup(matrix, tol, name)


def _scaled(matrix, rate, name):
    return lambda seed, tol: ScaledQuasiSemigroup(matrix, get_scalar_function(rate), tol, name)


CATALOG: Dict[str, CatalogEntry] = {entry.name: entry for entry in [
    CatalogEntry("constant-diagonal", "semigroup e^(sA) with A = diag(1, 2)",
                 _constant([[1.0, 0.0], [0.0, 2.0]], "constant-diagonal")),
    CatalogEntry("constant-jordan", "semigroup e^(sA) with the nilpotent Jordan block A = J2(0); "
                                    "exercises the regular spectrum",
                 _constant([[0.0, 1.0], [0.0, 0.0]], "constant-jordan")),
    CatalogEntry("constant-rotation", "semigroup e^(sA) with A = diag(i pi, -i pi); "
                                      "e^(i pi) and e^(-i pi) collide at -1",
                 _constant([[1j * math.pi, 0.0], [0.0, -1j * math.pi]], "constant-rotation")),
    CatalogEntry("scaled-constant-a", "scaled family e^((g(t+s) - g(t))A), A = diag(1, 2), a(u) = 1; "
                                      "reduces to the constant semigroup",
                 _scaled([[1.0, 0.0], [0.0, 2.0]], "one", "scaled-constant-a")),
    CatalogEntry("scaled-linear-a", "scaled family with A = [1] and a(u) = 1 + u; the time-varying "
                                    "witness where the spectral mapping identities fail",
                 _scaled([[1.0]], "linear", "scaled-linear-a")),
    CatalogEntry("scaled-exponential-a", "scaled family with A = [[-1, 1], [0, -2]] and a(u) = e^u",
                 _scaled([[-1.0, 1.0], [0.0, -2.0]], "exponential", "scaled-exponential-a")),
    CatalogEntry("evolution-noncommuting", "evolution family of dU/ds = A(t + s)U with A(t) = [[0, 1], [t, 0]]",
                 lambda seed, tol: EvolutionQuasiSemigroup(get_matrix_family("airy"), tol, "evolution-noncommuting"),
                 scenario_defaults={
                     "grid": GridSpec(t=[0.0, 1.0], s=[0.5, 1.0], r=[0.5]),
                     "lambdas": [0.0, 1.0],
                     "powers": [1, 2],
                 }),
    CatalogEntry("random-normal", f"semigroup of a seeded random normal {Config.RANDOM_DIM}x{Config.RANDOM_DIM} "
                                  f"matrix; the scenario seed picks the matrix",
                 lambda seed, tol: ConstantQuasiSemigroup(random_normal_matrix(seed), tol, f"random-normal-{seed}")),
    CatalogEntry("random-general", f"semigroup of a seeded random general {Config.RANDOM_DIM}x{Config.RANDOM_DIM} "
                                   f"matrix; the scenario seed picks the matrix",
                 lambda seed, tol: ConstantQuasiSemigroup(random_general_matrix(seed), tol, f"random-general-{seed}")),
]}


def list_catalog() -> List[Tuple[str, str]]:
    """(name, description) of every built-in backend, alphabetical."""
    return [(name, CATALOG[name].description) for name in sorted(CATALOG)]


def get_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry '{name}', known: {sorted(CATALOG)}") from None


def build_backend(spec: BackendSpec, seed: int, tol: ToleranceContext) -> QuasiSemigroup:
    """
    Instantiate the backend a scenario describes.

    :param spec: Catalog reference or explicit description.
    :param seed: Seed for random matrices.
    :param tol: Tolerances for every numerical decision of the backend.
    :return: The quasi-semigroup.
    """
    if spec.catalog is not None:
        return get_entry(spec.catalog).build(seed, tol)
    if spec.kind == "evolution":
        return EvolutionQuasiSemigroup(get_matrix_family(spec.family), tol, step=spec.step)
    if spec.matrix is not None:
        matrix = np.array(spec.complex_matrix(), dtype=np.complex128)
        name = "matrix"
    elif spec.random.structure == "normal":
        matrix, name = random_normal_matrix(seed, spec.random.dim), f"random-normal-{seed}"
    else:
        matrix, name = random_general_matrix(seed, spec.random.dim), f"random-general-{seed}"
    if spec.kind == "constant":
        return ConstantQuasiSemigroup(matrix, tol, name)
    return ScaledQuasiSemigroup(matrix, get_scalar_function(spec.rate), tol, f"{name}-{spec.rate}")


def default_scenario(name: str) -> ScenarioConfig:
    """The scenario `qsg run --scenario name` executes: all claims on the entry's default grid."""
    entry = get_entry(name)
    return ScenarioConfig(scenario_id=name, backend=BackendSpec(catalog=name), **entry.scenario_defaults)

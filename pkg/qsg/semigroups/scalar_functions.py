"""Named scalar rates a(u) and generator families A(t) that scenario files may refer to."""
import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from qsg.harness.errors import CatalogError


@dataclass(frozen=True)
class ScalarFunction:
    """A continuous positive rate a(u) used by the scaled backend."""
    name: str
    description: str
    function: Callable[[float], float]
    is_constant: bool = False

    def __call__(self, u: float) -> float:
        return float(self.function(u))


@dataclass(frozen=True)
class MatrixFamily:
    """A continuous family t -> A(t) of generators used by the evolution backend."""
    name: str
    description: str
    function: Callable[[float], np.ndarray]
    dim: int
    is_constant: bool = False
    commuting: bool = False

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.function(t), dtype=np.complex128)


SCALAR_FUNCTIONS: Dict[str, ScalarFunction] = {
    "one": ScalarFunction("one", "a(u) = 1", lambda u: 1.0, is_constant=True),
    "two": ScalarFunction("two", "a(u) = 2", lambda u: 2.0, is_constant=True),
    "linear": ScalarFunction("linear", "a(u) = 1 + u", lambda u: 1.0 + u),
    "exponential": ScalarFunction("exponential", "a(u) = e^u", math.exp),
    "oscillating": ScalarFunction("oscillating", "a(u) = 1 + sin(u) / 2", lambda u: 1.0 + 0.5 * math.sin(u)),
}

MATRIX_FAMILIES: Dict[str, MatrixFamily] = {
    "airy": MatrixFamily(
        "airy", "A(t) = [[0, 1], [t, 0]]",
        lambda t: [[0.0, 1.0], [t, 0.0]], dim=2),
    "nilpotent-ramp": MatrixFamily(
        "nilpotent-ramp", "A(t) = [[0, t], [0, 0]]",
        lambda t: [[0.0, t], [0.0, 0.0]], dim=2, commuting=True),
    "diagonal-ramp": MatrixFamily(
        "diagonal-ramp", "A(t) = diag(t, -t)",
        lambda t: [[t, 0.0], [0.0, -t]], dim=2, commuting=True),
    "frozen-rotation": MatrixFamily(
        "frozen-rotation", "A(t) = [[0, 1], [-1, 0]]",
        lambda t: [[0.0, 1.0], [-1.0, 0.0]], dim=2, is_constant=True, commuting=True),
}


def get_scalar_function(name: str) -> ScalarFunction:
    try:
        return SCALAR_FUNCTIONS[name]
    except KeyError:
        raise CatalogError(f"unknown scalar function '{name}', known: {sorted(SCALAR_FUNCTIONS)}") from None


def get_matrix_family(name: str) -> MatrixFamily:
    try:
        return MATRIX_FAMILIES[name]
    except KeyError:
        raise CatalogError(f"unknown generator family '{name}', known: {sorted(MATRIX_FAMILIES)}") from None

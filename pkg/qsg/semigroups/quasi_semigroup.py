"""Backends realising a quasi-semigroup R(t, s) on C^n: constant, scaled and evolution generators."""
import logging
import math
import threading
from abc import ABC, abstractmethod
from typing import Callable, Dict, Hashable, Optional, Tuple, TypeVar

import numpy as np

from qsg.harness.config import Config
from qsg.harness.errors import DomainError
from qsg.numerics.numkernel import ToleranceContext, as_cmatrix, expm, operator_norm, quad_scalar, require_square
from qsg.numerics.operators import FiniteOperator
from qsg.semigroups.scalar_functions import MatrixFamily, ScalarFunction

logger = logging.getLogger(__name__)

Value = TypeVar("Value")


def check_time(value: float, name: str):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be a finite non-negative time, got {value}")


class QuasiSemigroup(ABC):
    """Base class for quasi-semigroup backends."""
    kind = "abstract"

    def __init__(self, dim: int, tol: Optional[ToleranceContext] = None, name: str = ""):
        self.dim = dim
        self.tol = tol or ToleranceContext()
        self.name = name or self.kind
        self._propagators: Dict[Tuple[float, float], np.ndarray] = {}
        self._identity = np.eye(dim, dtype=np.complex128)
        self._cache_lock = threading.Lock()

    @abstractmethod
    def propagator(self, t: float, s: float) -> np.ndarray:
        """Compute R(t, s) for s > 0."""
        raise NotImplementedError()

    @abstractmethod
    def generator_matrix(self, t: float) -> np.ndarray:
        """Compute A(t)."""
        raise NotImplementedError()

    @abstractmethod
    def bound(self, tau: float) -> float:
        """A non-decreasing M with ||R(t, s)|| <= M(t + s)."""
        raise NotImplementedError()

    @abstractmethod
    def generator_norm_bound(self, tau: float) -> float:
        """An upper bound for ||A(u)|| over u in [0, tau]."""
        raise NotImplementedError()

    @property
    @abstractmethod
    def is_time_constant(self) -> bool:
        """Whether A(t) does not depend on t."""
        raise NotImplementedError()

    @property
    @abstractmethod
    def has_commuting_generators(self) -> bool:
        """Whether every A(t) commutes with every R(t', s')."""
        raise NotImplementedError()

    def cache_key(self, t: float, s: float) -> Tuple[float, float]:
        return float(t), float(s)

    def _memoised(self, cache: Dict[Hashable, Value], key: Hashable, compute: Callable[[], Value]) -> Value:
        """
        Look key up in one of the backend's caches, computing it outside the lock on a miss.
        Workers racing on the same key compute equal values; the first one stored wins.
        """
        with self._cache_lock:
            if key in cache:
                return cache[key]
        value = compute()
        with self._cache_lock:
            if len(cache) >= Config.PROPAGATOR_CACHE_SIZE:
                cache.clear()
            return cache.setdefault(key, value)

    def eval(self, t: float, s: float) -> FiniteOperator:
        check_time(t, "t")
        check_time(s, "s")
        if s == 0:
            return FiniteOperator(self._identity, self.tol)
        matrix = self._memoised(self._propagators, self.cache_key(t, s), lambda: self.propagator(t, s))
        return FiniteOperator(matrix, self.tol)

    def generator(self, t: float) -> FiniteOperator:
        check_time(t, "t")
        return FiniteOperator(self.generator_matrix(t), self.tol)

    def descriptor(self) -> str:
        return f"{self.kind}:{self.name}"


class ConstantQuasiSemigroup(QuasiSemigroup):
    """R(t, s) = e^(sA), independent of t."""
    kind = "constant"

    def __init__(self, matrix, tol: Optional[ToleranceContext] = None, name: str = ""):
        matrix = as_cmatrix(matrix)
        require_square(matrix, "generator")
        super().__init__(matrix.shape[0], tol, name)
        self.matrix = matrix
        self.matrix_norm = operator_norm(matrix)

    def cache_key(self, t, s):
        return 0.0, float(s)

    def propagator(self, t, s):
        return expm(s * self.matrix)

    def generator_matrix(self, t):
        return self.matrix

    def bound(self, tau):
        return math.exp(self.matrix_norm * tau)

    def generator_norm_bound(self, tau):
        return self.matrix_norm

    @property
    def is_time_constant(self):
        return True

    @property
    def has_commuting_generators(self):
        return True


class ScaledQuasiSemigroup(QuasiSemigroup):
    """R(t, s) = e^((g(t+s) - g(t))A) with g the primitive of a positive rate a."""
    kind = "scaled"

    def __init__(self, matrix, rate: ScalarFunction, tol: Optional[ToleranceContext] = None,
                 name: str = "", horizon: float = Config.EVOLUTION_HORIZON):
        matrix = as_cmatrix(matrix)
        require_square(matrix, "generator")
        super().__init__(matrix.shape[0], tol, name or f"{rate.name}")
        self.matrix = matrix
        self.matrix_norm = operator_norm(matrix)
        self.rate = rate
        samples = [rate(u) for u in np.linspace(0.0, horizon, Config.EVOLUTION_BOUND_SAMPLES)]
        if min(samples) <= 0:
            raise DomainError(f"rate '{rate.name}' is not positive on [0, {horizon}]")
        self._rate_bounds: Dict[float, float] = {}
        self._primitives: Dict[float, float] = {}

    def increment(self, t: float, s: float) -> float:
        """g(t + s) - g(t)."""
        return quad_scalar(self.rate, t, t + s, self.tol.quad_tol)

    def propagator(self, t, s):
        return expm(self.increment(t, s) * self.matrix)

    def generator_matrix(self, t):
        return self.rate(t) * self.matrix

    def bound(self, tau):
        primitive = self._memoised(self._primitives, tau, lambda: self.increment(0.0, tau) if tau > 0 else 0.0)
        return math.exp(self.matrix_norm * max(tau, primitive))

    def generator_norm_bound(self, tau):
        def largest_rate():
            return max(abs(self.rate(u)) for u in np.linspace(0.0, tau, Config.EVOLUTION_BOUND_SAMPLES))
        return self.matrix_norm * self._memoised(self._rate_bounds, tau, largest_rate)

    @property
    def is_time_constant(self):
        return self.rate.is_constant

    @property
    def has_commuting_generators(self):
        return True


class EvolutionQuasiSemigroup(QuasiSemigroup):
    """
    R(t, s) = U(t + s, t), the propagator of dU/ds = A(t + s) U with U(t, t) = I,
    integrated by classical fourth order Runge-Kutta with a fixed step.
    """
    kind = "evolution"

    def __init__(self, family: MatrixFamily, tol: Optional[ToleranceContext] = None, name: str = "",
                 step: Optional[float] = None, horizon: float = Config.EVOLUTION_HORIZON):
        super().__init__(family.dim, tol, name or family.name)
        self.family = family
        self.horizon = horizon
        self._norm_bounds: Dict[float, float] = {}
        self.step = step if step is not None else self._calibrate_step(Config.EVOLUTION_STEP)

    def _rk4_step(self, tau: float, h: float, U: np.ndarray) -> np.ndarray:
        A_start = self.family(tau)
        A_mid = self.family(tau + 0.5 * h)
        A_end = self.family(tau + h)
        k1 = A_start @ U
        k2 = A_mid @ (U + 0.5 * h * k1)
        k3 = A_mid @ (U + 0.5 * h * k2)
        k4 = A_end @ (U + h * k3)
        return U + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _integrate(self, t: float, s: float, step: float) -> np.ndarray:
        steps = max(1, math.ceil(s / step))
        h = s / steps
        U = self._identity.copy()
        for k in range(steps):
            U = self._rk4_step(t + k * h, h, U)
        return U

    def _calibrate_step(self, step: float) -> float:
        """Halve the step until halving again moves R(0, horizon) by at most ode_tol / 100."""
        target = self.tol.ode_tol / 100.0
        current = self._integrate(0.0, self.horizon, step)
        for _ in range(Config.EVOLUTION_MAX_HALVINGS):
            refined = self._integrate(0.0, self.horizon, step / 2.0)
            change = operator_norm(refined - current)
            if change <= target:
                logger.info(f"Evolution step for '{self.family.name}' calibrated to {step:.3e}")
                return step
            step, current = step / 2.0, refined
        logger.warning(f"Evolution step for '{self.family.name}' stopped at {step:.3e} before meeting ode_tol")
        return step

    def propagator(self, t, s):
        return self._integrate(t, s, self.step)

    def generator_matrix(self, t):
        return self.family(t)

    def generator_norm_bound(self, tau):
        def largest_norm():
            return max(operator_norm(self.family(u)) for u in np.linspace(0.0, tau, Config.EVOLUTION_BOUND_SAMPLES))
        return self._memoised(self._norm_bounds, tau, largest_norm)

    def bound(self, tau):
        return math.exp(tau * self.generator_norm_bound(tau))

    @property
    def is_time_constant(self):
        return self.family.is_constant

    @property
    def has_commuting_generators(self):
        return self.family.commuting

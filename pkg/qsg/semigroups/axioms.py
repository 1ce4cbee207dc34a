"""Numerical checks of the quasi-semigroup axioms and of the generator's basic properties."""
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qsg.harness.config import Config
from qsg.harness.errors import DomainError
from qsg.numerics.numkernel import operator_norm, quad_operator
from qsg.semigroups.quasi_semigroup import QuasiSemigroup, check_time

GridPoint = Tuple[float, float, float]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class AxiomResidual:
    t: float
    s: float
    r: float
    cocycle: float
    continuity: float
    bound_slack: float


@dataclass(frozen=True, eq=False)
class GeneratorEstimate:
    """
    Forward difference (R(t, h) - I)/h, and when t >= h the same quotient started
    from t - h. For quasi-semigroups both converge to A(t).
    """
    t: float
    h: float
    forward: np.ndarray
    shifted: Optional[np.ndarray] = None
    discrepancy: Optional[float] = None


def check_axioms(Q: QuasiSemigroup, grid: Iterable[GridPoint],
                 epsilon: float = Config.CONTINUITY_EPSILON) -> List[AxiomResidual]:
    """
    Cocycle, continuity at s = 0 and growth bound residuals on every grid point.

    :param grid: (t, s, r) triples, all non-negative.
    :return: one AxiomResidual per triple.
    """
    points = list(grid)
    if not points:
        raise DomainError("axiom grid is empty")
    identity = np.eye(Q.dim)
    residuals = []
    for t, s, r in points:
        for value, name in ((t, "t"), (s, "s"), (r, "r")):
            check_time(value, name)
        combined = Q.eval(t, s + r).matrix
        split = Q.eval(t + r, s).matrix @ Q.eval(t, r).matrix
        residuals.append(AxiomResidual(
            t=t, s=s, r=r,
            cocycle=operator_norm(combined - split),
            continuity=operator_norm(Q.eval(t, epsilon).matrix - identity),
            bound_slack=Q.bound(t + s) - Q.eval(t, s).norm,
        ))
    return residuals


def estimate_generator(Q: QuasiSemigroup, t: float, h: float = Config.GENERATOR_STEP) -> GeneratorEstimate:
    check_time(t, "t")
    if not h > 0:
        raise DomainError(f"difference step must be positive, got {h}")
    identity = np.eye(Q.dim)
    forward = (Q.eval(t, h).matrix - identity) / h
    if t < h:
        return GeneratorEstimate(t=t, h=h, forward=forward)
    shifted = (Q.eval(t - h, h).matrix - identity) / h
    return GeneratorEstimate(t=t, h=h, forward=forward, shifted=shifted,
                             discrepancy=operator_norm(forward - shifted))


def generator_convergence_order(Q: QuasiSemigroup, t: float, h: float = Config.ORDER_STEP) -> float:
    """
    Observed order of the forward difference, log2 of the error ratio between h and h/2.
    Errors down at the rounding floor of the quotient carry no order and count as exact (inf).
    """
    exact = Q.generator(t).matrix
    coarse = operator_norm(estimate_generator(Q, t, h).forward - exact)
    fine = operator_norm(estimate_generator(Q, t, h / 2.0).forward - exact)
    floor = 1e3 * _EPS * Q.bound(t + h) / h
    if fine <= floor or coarse <= floor:
        return math.inf
    return math.log2(coarse / fine)


def check_commutation(Q: QuasiSemigroup, t: float, t0: float, s0: float) -> float:
    """||R(t0, s0) A(t) - A(t) R(t0, s0)||."""
    A = Q.generator(t).matrix
    R = Q.eval(t0, s0).matrix
    return operator_norm(R @ A - A @ R)


def check_integral_equation(Q: QuasiSemigroup, t: float, s: float) -> float:
    """||R(t, s) - I - integral over [0, s] of A(t + h) R(t, h) dh||."""
    check_time(t, "t")
    check_time(s, "s")
    integral = quad_operator(lambda h: Q.generator_matrix(t + h) @ Q.eval(t, h).matrix, 0.0, s, Q.tol.quad_tol)
    return operator_norm(Q.eval(t, s).matrix - np.eye(Q.dim) - integral)


def check_averaging(Q: QuasiSemigroup, t: float, s_values: Sequence[float]) -> List[float]:
    """
    ||(1/s) integral over [0, s] of R(t, h) dh - I|| for each s.

    :param s_values: Strictly decreasing positive steps.
    """
    steps = list(s_values)
    if not steps or any(s <= 0 for s in steps):
        raise DomainError(f"averaging steps must be positive, got {steps}")
    if any(later >= earlier for earlier, later in zip(steps, steps[1:])):
        raise DomainError(f"averaging steps must strictly decrease, got {steps}")
    identity = np.eye(Q.dim)
    residuals = []
    for s in steps:
        mean = quad_operator(lambda h: Q.eval(t, h).matrix, 0.0, s, Q.tol.quad_tol) / s
        residuals.append(operator_norm(mean - identity))
    return residuals


def check_derivative(Q: QuasiSemigroup, t: float, s: float,
                     h: float = Config.DERIVATIVE_STEP) -> Tuple[float, float]:
    """
    Difference quotient of s -> R(t, s) compared with A(t + s) R(t, s) and R(t, s) A(t + s).
    Central when s >= h, forward from s otherwise.

    :return: (left form residual, right form residual)
    """
    check_time(t, "t")
    check_time(s, "s")
    if not h > 0:
        raise DomainError(f"difference step must be positive, got {h}")
    if s >= h:
        derivative = (Q.eval(t, s + h).matrix - Q.eval(t, s - h).matrix) / (2.0 * h)
    else:
        derivative = (Q.eval(t, s + h).matrix - Q.eval(t, s).matrix) / h
    A = Q.generator_matrix(t + s)
    R = Q.eval(t, s).matrix
    return operator_norm(derivative - A @ R), operator_norm(derivative - R @ A)


def check_continuity(Q: QuasiSemigroup, t: float, s: float, deltas: Sequence[float]) -> List[float]:
    """||R(t, s + delta) - R(t, s)|| for each delta."""
    base = Q.eval(t, s).matrix
    return [operator_norm(Q.eval(t, s + delta).matrix - base) for delta in deltas]

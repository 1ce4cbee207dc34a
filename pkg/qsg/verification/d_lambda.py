"""The operator D_lambda(t, s) = integral over [0, s] of e^(lambda (s - h)) R(t, h) dh."""
from dataclasses import dataclass

import numpy as np

from qsg.numerics.numkernel import quad_operator
from qsg.semigroups.quasi_semigroup import QuasiSemigroup, check_time


@dataclass(frozen=True, eq=False)
class DLambda:
    lam: complex
    t: float
    s: float
    matrix: np.ndarray


def d_lambda(Q: QuasiSemigroup, lam: complex, t: float, s: float) -> DLambda:
    """
    :param Q: The quasi-semigroup.
    :param lam: Spectral parameter.
    :param t: Start time.
    :param s: Length of the window, the zero window gives the zero operator.
    :return: D_lambda(t, s) computed to the backend's quad_tol.
    """
    check_time(t, "t")
    check_time(s, "s")
    lam = complex(lam)
    if s == 0:
        return DLambda(lam=lam, t=t, s=s, matrix=np.zeros((Q.dim, Q.dim), dtype=np.complex128))
    matrix = quad_operator(lambda h: np.exp(lam * (s - h)) * Q.eval(t, h).matrix, 0.0, s, Q.tol.quad_tol)
    return DLambda(lam=lam, t=t, s=s, matrix=matrix)

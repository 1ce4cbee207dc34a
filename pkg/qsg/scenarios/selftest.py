"""Invariant suites behind `qsg selftest`, one per layer from the numerical kernel up to the verifier."""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from qsg.harness.config import Config
from qsg.harness.errors import QsgError
from qsg.harness.models import Verdict
from qsg.numerics.numkernel import eig, expm, operator_norm, quad_operator
from qsg.numerics.operators import (
    FiniteOperator,
    hyper_range,
    invariance_defect,
    kernel,
    range_chain_dims,
    range_space,
)
from qsg.numerics.spectra import SpectrumKind, collapse_defect, spectrum
from qsg.scenarios.catalog import CATALOG, random_general_matrix, random_normal_matrix
from qsg.semigroups import axioms
from qsg.verification import verifier

logger = logging.getLogger(__name__)

SEEDS = range(10)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""


def _kernel_suite() -> float:
    worst = 0.0
    for seed in SEEDS:
        hermitian = random_normal_matrix(seed, 6)
        hermitian = (hermitian + hermitian.conj().T) / 2.0
        values, vectors = np.linalg.eigh(hermitian)
        oracle = vectors @ np.diag(np.exp(values)) @ vectors.conj().T
        worst = max(worst, operator_norm(expm(hermitian) - oracle) / operator_norm(oracle) / 1e-10)
        general = random_general_matrix(seed, 32)
        scale = 1e-8 * operator_norm(general)
        for value, vector in eig(general):
            worst = max(worst, float(np.linalg.norm(general @ vector - value * vector)) / scale)
    for seed in SEEDS:
        normal = random_normal_matrix(seed, 6)
        values = np.array([value for value, _ in eig(normal)])
        images = np.array([value for value, _ in eig(expm(normal))])
        gaps = np.abs(np.exp(values)[:, None] - images[None, :])
        spread = max(1.0, float(np.abs(images).max()))
        worst = max(worst, max(gaps.min(axis=0).max(), gaps.min(axis=1).max()) / (1e-8 * spread))
    cubic = quad_operator(lambda u: np.array([[u ** 3 - 2 * u + 1]]), 0.0, 2.0)
    worst = max(worst, abs(cubic[0, 0] - 2.0) / 1e-12)
    return worst


def _operator_suite() -> float:
    worst = 0.0
    for seed in SEEDS:
        matrix = random_general_matrix(seed, 5)
        matrix[:, 0] = 0.0
        T = FiniteOperator(matrix)
        worst = max(worst, abs(kernel(T).dim + range_space(T).dim - T.dim))
        worst = max(worst, invariance_defect(T, hyper_range(T)) / (10 * T.tol.rank_tol * max(1.0, T.norm)))
        dims = range_chain_dims(T, 2 * T.dim)
        settled = next((index for index, (first, second) in enumerate(zip(dims, dims[1:])) if first == second), None)
        if settled is None or any(dim != dims[settled] for dim in dims[settled:]):
            worst = float("inf")
    return worst


def _spectra_suite() -> float:
    worst = 0.0
    for seed in SEEDS:
        T = FiniteOperator(random_general_matrix(seed, 5))
        worst = max(worst, collapse_defect(T) / T.tol.eig_tol)
        regular = spectrum(T, SpectrumKind.REGULAR)
        worst = max(worst, 0.0 if regular.total_multiplicity <= T.dim else float("inf"))
    return worst


def _semigroup_suite() -> float:
    worst = 0.0
    grid = [(t, s, r) for t in (0.0, 0.5, 1.0) for s in (0.0, 0.5, 1.0) for r in (0.0, 0.5, 1.0)]
    for name in ("constant-diagonal", "scaled-linear-a", "scaled-exponential-a"):
        Q = CATALOG[name].build(0, None)
        for residual in axioms.check_axioms(Q, grid):
            worst = max(worst, residual.cocycle / 1e-8, -residual.bound_slack / 1e-8)
    return worst


def _generator_order_suite() -> float:
    worst = 0.0
    for name in ("constant-diagonal", "scaled-linear-a", "scaled-exponential-a"):
        Q = CATALOG[name].build(0, None)
        for t in (0.0, 1.0):
            worst = max(worst, Config.MIN_GENERATOR_ORDER / axioms.generator_convergence_order(Q, t))
    return worst


def _evolution_suite() -> float:
    worst = 0.0
    grid = [(t, s, r) for t in (0.0, 0.5, 1.0) for s in (0.0, 0.5, 1.0) for r in (0.0, 0.5, 1.0)]
    Q = CATALOG["evolution-noncommuting"].build(0, None)
    for residual in axioms.check_axioms(Q, grid):
        scale = max(1.0, Q.eval(residual.t, residual.s + residual.r).norm)
        worst = max(worst, residual.cocycle / (10 * Q.tol.ode_tol * scale))
    return worst


def _verifier_suite() -> float:
    failures = 0
    for seed in SEEDS[:4]:
        Q = CATALOG["random-normal"].build(seed, None)
        for lam in verifier.default_lambdas(Q.generator(0.0))[:3]:
            for record in (verifier.check_identity_right(Q, lam, 0.0, 0.5),
                           verifier.check_kernel_inclusion(Q, lam, 0.0, 0.5, 1),
                           verifier.check_range_inclusion(Q, lam, 0.0, 0.5, "inf")):
                failures += record.verdict == Verdict.FAIL
    Q = CATALOG["constant-jordan"].build(0, None)
    record = verifier.check_regular_inclusion(Q, 0.0, 1.0)
    failures += record.verdict == Verdict.FAIL or not record.diagnostics["proof_path_ok"]
    return float(failures)


SUITES: Dict[str, Callable[[], float]] = {
    "kernel": _kernel_suite,
    "operators": _operator_suite,
    "spectra": _spectra_suite,
    "semigroups": _semigroup_suite,
    "generator_order": _generator_order_suite,
    "evolution": _evolution_suite,
    "verifier": _verifier_suite,
}


def run_selftest() -> List[SuiteResult]:
    """
    Each suite returns its worst normalised residual; a suite passes when that stays at or below 1.
    """
    results = []
    for name, suite in SUITES.items():
        logger.info(f"Running self-test suite '{name}'")
        try:
            worst = suite()
        except QsgError as exc:
            logger.error(f"Self-test suite '{name}' raised {exc}")
            results.append(SuiteResult(name, False, float("inf"), str(exc)))
            continue
        results.append(SuiteResult(name, worst <= 1.0, worst))
    return results

"""Turns a ScenarioConfig into verification jobs, runs them on a thread pool and assembles the Report."""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, List, Optional

from qsg.harness.config import Config
from qsg.harness.errors import ConfigError
from qsg.harness.models import PseudospectrumDump, Report, ScenarioConfig, Summary, VerificationRecord
from qsg.numerics.spectra import SpectrumKind, approx_eigenpair, pseudospectrum_grid
from qsg.scenarios.catalog import build_backend
from qsg.semigroups.quasi_semigroup import QuasiSemigroup
from qsg.verification import semigroup_claims, verifier
from qsg.verification.d_lambda import d_lambda
from qsg.verification.registry import expand_claims

logger = logging.getLogger(__name__)

Job = Callable[[], List[VerificationRecord]]

IDENTITY_IDS = {"thm2.1.1", "thm2.1.2", "cor2.2", "cor2.3.1", "cor2.3.2"}


def thread_count() -> int:
    """Worker threads: QSG_THREADS when set, the machine's cores otherwise."""
    value = os.environ.get(Config.THREADS_ENV_VAR)
    if value is None or value.strip() == "":
        return os.cpu_count() or Config.DEFAULT_THREADS
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError(f"{Config.THREADS_ENV_VAR} must be a positive integer, got '{value}'",
                          field=Config.THREADS_ENV_VAR) from None
    if threads < 1:
        raise ConfigError(f"{Config.THREADS_ENV_VAR} must be a positive integer, got '{value}'",
                          field=Config.THREADS_ENV_VAR)
    return threads


class ScenarioRunner:
    """Runs every requested claim of a scenario on every grid point."""
    def __init__(self, config: ScenarioConfig, threads: Optional[int] = None):
        self.config = config
        self.tol = config.tolerances.to_context()
        self.claims = set(expand_claims(config.claims))
        self.threads = threads or thread_count()
        self.backend = self.create_backend()

    def create_backend(self) -> QuasiSemigroup:
        """Create the quasi-semigroup the scenario describes."""
        return build_backend(self.config.backend, self.config.seed, self.tol)

    def wants(self, *claim_ids: str) -> bool:
        return any(claim_id in self.claims for claim_id in claim_ids)

    def create_jobs(self) -> List[Job]:
        """Create one job per grid point and claim group, in a fixed order."""
        grid = self.config.grid
        jobs: List[Job] = []
        for t in grid.t:
            if self.wants("def1.1.3"):
                jobs.append(partial(self._single, semigroup_claims.continuity_record, t))
            if self.wants("def1.2"):
                jobs.append(partial(self._single, semigroup_claims.generator_record, t))
            if self.wants("thm1.6.2"):
                jobs.append(partial(self._single, semigroup_claims.averaging_record, t,
                                    self.config.averaging_steps))
            for s in grid.s:
                if self.wants("def1.1.4"):
                    jobs.append(partial(self._single, semigroup_claims.growth_record, t, s))
                if self.wants("thm1.6.4", "thm1.6.4.commuted"):
                    jobs.append(partial(self._derivative_job, t, s))
                if self.wants("thm1.6.5"):
                    jobs.append(partial(self._single, semigroup_claims.integral_equation_record, t, s))
                for r in grid.r:
                    if self.wants("def1.1.2"):
                        jobs.append(partial(self._single, semigroup_claims.cocycle_record, t, s, r))
                    if self.wants("thm1.6.3"):
                        jobs.append(partial(self._single, semigroup_claims.commutation_record, r, t, s))
                jobs.append(partial(self._lambda_job, t, s))
                jobs.append(partial(self._spectral_job, t, s))
        return jobs

    def _single(self, check, *args) -> List[VerificationRecord]:
        return [check(self.backend, *args)]

    def _derivative_job(self, t, s) -> List[VerificationRecord]:
        records = semigroup_claims.derivative_records(self.backend, t, s)
        return [record for record in records if record.claim_id in self.claims]

    def _lambdas(self, t) -> List[complex]:
        configured = self.config.lambda_values()
        if configured is not None:
            return configured
        return verifier.default_lambdas(self.backend.generator(t))

    def _lambda_job(self, t: float, s: float) -> List[VerificationRecord]:
        """Identity, subspace and Fredholm claims for every spectral parameter at (t, s)."""
        Q = self.backend
        records = []
        for lam in self._lambdas(t):
            if self.wants(*IDENTITY_IDS):
                d = d_lambda(Q, lam, t, s)
                if self.wants("thm2.1.1"):
                    records.append(verifier.check_identity_right(Q, lam, t, s, d))
                if self.wants("thm2.1.2"):
                    records.append(verifier.check_identity_left(Q, lam, t, s, d))
                if self.wants("cor2.2"):
                    records.append(verifier.check_semigroup_case(Q, lam, t, s, d))
                for n in self.config.powers:
                    if self.wants("cor2.3.1"):
                        records.append(verifier.check_power_identity(Q, lam, t, s, n, d))
                    if self.wants("cor2.3.2"):
                        records.append(verifier.check_power_identity_left(Q, lam, t, s, n, d))
            for n in self.config.powers:
                if self.wants("cor2.3.3" if n == 1 else "cor2.3.5"):
                    records.append(verifier.check_kernel_inclusion(Q, lam, t, s, n))
                if self.wants("cor2.3.4" if n == 1 else "cor2.3.6"):
                    records.append(verifier.check_range_inclusion(Q, lam, t, s, n))
            if self.config.include_hyper_range and self.wants("cor2.3.7"):
                records.append(verifier.check_range_inclusion(Q, lam, t, s, "inf"))
            if self.wants("thm2.4.4.alpha"):
                records.append(verifier.check_fredholm_transfer(Q, lam, t, s))
            if self.wants("thm2.4.3.approx"):
                pair = approx_eigenpair(Q.generator(t), lam)
                records.append(verifier.check_approx_propagation(Q, t, s, pair))
        return records

    def _spectral_job(self, t: float, s: float) -> List[VerificationRecord]:
        records = []
        for kind, claim_id in verifier.SPECTRAL_CLAIM_IDS.items():
            if claim_id not in self.claims:
                continue
            if kind is SpectrumKind.REGULAR:
                records.append(verifier.check_regular_inclusion(self.backend, t, s, self._lambdas(t)))
            else:
                records.append(verifier.check_spectral_inclusion(self.backend, t, s, kind))
        return records

    def create_pseudospectrum(self) -> Optional[PseudospectrumDump]:
        spec = self.config.pseudospectrum
        if spec is None:
            return None
        if spec.target == "generator":
            operator = self.backend.generator(spec.t)
        else:
            operator = self.backend.eval(spec.t, spec.s)
        grid = pseudospectrum_grid(operator, spec.real, spec.imag, spec.resolution)
        return PseudospectrumDump(target=spec.target, t=spec.t, s=spec.s,
                                  real_axis=grid.real_axis.tolist(), imag_axis=grid.imag_axis.tolist(),
                                  sigma_min=grid.sigma_min.tolist())

    def run(self) -> Report:
        jobs = self.create_jobs()
        logger.info(f"Running {len(jobs)} jobs for scenario '{self.config.scenario_id}' "
                    f"on {self.threads} threads")
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            batches = list(executor.map(lambda job: job(), jobs))
        records = sorted((record for batch in batches for record in batch), key=VerificationRecord.sort_key)
        summary = Summary.tally(records)
        logger.info(f"Scenario '{self.config.scenario_id}' finished: {summary.passed} passed, "
                    f"{summary.failed} failed, {summary.report_only} report-only")
        return Report(scenario_id=self.config.scenario_id, config=self.config, records=records,
                      summary=summary, pseudospectrum=self.create_pseudospectrum())

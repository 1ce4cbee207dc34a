# qsg/harness/models.py
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from qsg.harness.config import Config
from qsg.numerics.numkernel import ToleranceContext
from qsg.verification.registry import ALL_CLAIMS

# A complex number in a scenario file: a real number or a [real, imaginary] pair.
ComplexEntry = Union[float, Tuple[float, float]]


def to_complex(entry: ComplexEntry) -> complex:
    if isinstance(entry, (tuple, list)):
        return complex(entry[0], entry[1])
    return complex(entry)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    REPORT_ONLY = "REPORT-ONLY"


class RecordParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    s: float
    r: Optional[float] = None
    lam_real: Optional[float] = None
    lam_imag: Optional[float] = None
    n: Optional[Union[int, Literal["inf"]]] = None
    # Time at which the generator is taken when it is not t itself, as in R(t, s) A(generator_t).
    generator_t: Optional[float] = None
    backend: str

    def sort_key(self) -> tuple:
        def optional(value):
            return (0, 0.0) if value is None else (1, value)
        power = None if self.n is None else (float("inf") if self.n == "inf" else float(self.n))
        return (self.t, self.s, optional(self.r), optional(self.lam_real),
                optional(self.lam_imag), optional(power), optional(self.generator_t), self.backend)


class VerificationRecord(BaseModel):
    model_config = ConfigDict(use_enum_values=True)

    claim_id: str
    params: RecordParams
    residual: float
    bound: Optional[float] = None
    verdict: Verdict
    note: str = ""
    # Named side conditions that must all hold, on top of residual <= bound, for a PASS.
    conditions: Dict[str, bool] = Field(default_factory=dict)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def verdict_follows_bound(self) -> "VerificationRecord":
        if self.verdict == Verdict.REPORT_ONLY:
            if self.bound is not None:
                raise ValueError("a REPORT-ONLY record carries no bound")
            return self
        if self.bound is None:
            raise ValueError(f"a {self.verdict} record needs a bound")
        expected = Verdict.PASS if self.residual <= self.bound and all(self.conditions.values()) else Verdict.FAIL
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict} contradicts residual {self.residual}, bound {self.bound} "
                             f"and conditions {self.conditions}")
        return self

    @classmethod
    def judged(cls, claim_id: str, params: RecordParams, residual: float, bound: float,
               asserted: bool = True, note: str = "",
               diagnostics: Optional[Dict[str, Any]] = None,
               conditions: Optional[Dict[str, bool]] = None) -> "VerificationRecord":
        """
        PASS or FAIL from residual <= bound and the side conditions when the claim is asserted
        for this backend, otherwise REPORT-ONLY with the would-be bound kept among the diagnostics.
        """
        diagnostics = dict(diagnostics or {})
        conditions = {name: bool(value) for name, value in (conditions or {}).items()}
        residual = float(residual)
        if not asserted:
            diagnostics["nominal_bound"] = float(bound)
            return cls(claim_id=claim_id, params=params, residual=residual, bound=None,
                       verdict=Verdict.REPORT_ONLY, note=note, conditions=conditions, diagnostics=diagnostics)
        verdict = Verdict.PASS if residual <= bound and all(conditions.values()) else Verdict.FAIL
        return cls(claim_id=claim_id, params=params, residual=residual, bound=float(bound),
                   verdict=verdict, note=note, conditions=conditions, diagnostics=diagnostics)

    def sort_key(self) -> tuple:
        return (self.claim_id,) + self.params.sort_key()


class RandomMatrixSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    structure: Literal["normal", "general"]
    dim: PositiveInt = Config.RANDOM_DIM


class BackendSpec(BaseModel):
    """Either a catalog entry or an explicit backend description."""
    model_config = ConfigDict(extra="forbid")

    catalog: Optional[str] = None
    kind: Optional[Literal["constant", "scaled", "evolution"]] = None
    matrix: Optional[List[List[ComplexEntry]]] = None
    random: Optional[RandomMatrixSpec] = None
    rate: Optional[str] = None
    family: Optional[str] = None
    step: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def check_description(self) -> "BackendSpec":
        if (self.catalog is None) == (self.kind is None):
            raise ValueError("give exactly one of 'catalog' or 'kind'")
        if self.kind in ("constant", "scaled") and (self.matrix is None) == (self.random is None):
            raise ValueError(f"a {self.kind} backend needs exactly one of 'matrix' or 'random'")
        if self.kind == "scaled" and self.rate is None:
            raise ValueError("a scaled backend needs a 'rate'")
        if self.kind == "evolution" and self.family is None:
            raise ValueError("an evolution backend needs a 'family'")
        if self.matrix is not None:
            if not self.matrix or any(len(row) != len(self.matrix) for row in self.matrix):
                raise ValueError("'matrix' must be a non-empty square list of rows")
        return self

    def complex_matrix(self) -> List[List[complex]]:
        return [[to_complex(entry) for entry in row] for row in self.matrix]


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: List[NonNegativeFloat] = Field(default_factory=lambda: list(Config.DEFAULT_GRID_T), min_length=1)
    s: List[NonNegativeFloat] = Field(default_factory=lambda: list(Config.DEFAULT_GRID_S), min_length=1)
    r: List[NonNegativeFloat] = Field(default_factory=lambda: list(Config.DEFAULT_GRID_R), min_length=1)


class ToleranceOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank_tol: Optional[PositiveFloat] = None
    quad_tol: Optional[PositiveFloat] = None
    eig_tol: Optional[PositiveFloat] = None
    ode_tol: Optional[PositiveFloat] = None

    def to_context(self) -> ToleranceContext:
        return ToleranceContext(**self.model_dump(exclude_none=True))


class PseudospectrumSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    target: Literal["generator", "propagator"] = "propagator"
    t: NonNegativeFloat = 0.0
    s: NonNegativeFloat = 1.0
    real: Tuple[float, float]
    imag: Tuple[float, float]
    resolution: int = Field(default=21, ge=2)


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario_id: str = Field(min_length=1)
    backend: BackendSpec
    seed: int = 0
    grid: GridSpec = Field(default_factory=GridSpec)
    lambdas: Union[Literal["auto"], List[ComplexEntry]] = "auto"
    claims: Union[Literal["all"], List[str]] = "all"
    powers: List[PositiveInt] = Field(default_factory=lambda: list(Config.DEFAULT_POWERS), min_length=1)
    include_hyper_range: bool = True
    averaging_steps: List[PositiveFloat] = Field(default_factory=lambda: list(Config.AVERAGING_STEPS), min_length=1)
    tolerances: ToleranceOverrides = Field(default_factory=ToleranceOverrides)
    pseudospectrum: Optional[PseudospectrumSpec] = None

    @field_validator("claims")
    @classmethod
    def known_claims(cls, claims):
        if claims != "all":
            unknown = sorted(set(claims) - set(ALL_CLAIMS))
            if unknown:
                raise ValueError(f"unknown claim ids {unknown}")
        return claims

    @field_validator("averaging_steps")
    @classmethod
    def decreasing_steps(cls, steps):
        if any(later >= earlier for earlier, later in zip(steps, steps[1:])):
            raise ValueError("averaging steps must strictly decrease")
        return steps

    def lambda_values(self) -> Optional[List[complex]]:
        """Configured spectral parameters, None for automatic sampling."""
        if self.lambdas == "auto":
            return None
        return [to_complex(entry) for entry in self.lambdas]


class Summary(BaseModel):
    passed: int = 0
    failed: int = 0
    report_only: int = 0

    @classmethod
    def tally(cls, records: List[VerificationRecord]) -> "Summary":
        verdicts = [record.verdict for record in records]
        return cls(passed=verdicts.count(Verdict.PASS),
                   failed=verdicts.count(Verdict.FAIL),
                   report_only=verdicts.count(Verdict.REPORT_ONLY))


class PseudospectrumDump(BaseModel):
    target: str
    t: float
    s: float
    real_axis: List[float]
    imag_axis: List[float]
    sigma_min: List[List[float]]


class Report(BaseModel):
    scenario_id: str
    tool_version: str = Config.TOOL_VERSION
    config: ScenarioConfig
    records: List[VerificationRecord]
    summary: Summary
    pseudospectrum: Optional[PseudospectrumDump] = None
    wall_time_ms: Optional[float] = None

    @model_validator(mode="after")
    def summary_matches_records(self) -> "Report":
        if self.summary != Summary.tally(self.records):
            raise ValueError("summary does not match the records")
        return self

    @property
    def exit_code(self) -> int:
        return 1 if self.summary.failed else 0

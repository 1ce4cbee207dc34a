import unittest

from pydantic import ValidationError

from qsg.harness.errors import ConfigError
from qsg.harness.models import (
    BackendSpec,
    RecordParams,
    Report,
    ScenarioConfig,
    Summary,
    Verdict,
    VerificationRecord,
    to_complex,
)
from qsg.harness.tasks import parse_config

PARAMS = RecordParams(t=0.0, s=1.0, backend="constant:test")


class TestVerificationRecord(unittest.TestCase):
    def test_judged_pass_and_fail(self):
        self.assertEqual(VerificationRecord.judged("thm2.1.1", PARAMS, 1e-12, 1e-10).verdict, Verdict.PASS)
        self.assertEqual(VerificationRecord.judged("thm2.1.1", PARAMS, 1e-10, 1e-10).verdict, Verdict.PASS)
        self.assertEqual(VerificationRecord.judged("thm2.1.1", PARAMS, 1e-9, 1e-10).verdict, Verdict.FAIL)

    def test_judged_report_only(self):
        record = VerificationRecord.judged("thm2.1.1", PARAMS, 1.3, 1e-10, asserted=False, note="why")
        self.assertEqual(record.verdict, Verdict.REPORT_ONLY)
        self.assertIsNone(record.bound)
        self.assertEqual(record.diagnostics["nominal_bound"], 1e-10)
        self.assertEqual(record.note, "why")

    def test_verdict_must_follow_bound(self):
        with self.assertRaises(ValidationError):
            VerificationRecord(claim_id="x", params=PARAMS, residual=1.0, bound=0.5, verdict=Verdict.PASS)
        with self.assertRaises(ValidationError):
            VerificationRecord(claim_id="x", params=PARAMS, residual=1.0, bound=None, verdict=Verdict.FAIL)
        with self.assertRaises(ValidationError):
            VerificationRecord(claim_id="x", params=PARAMS, residual=1.0, bound=2.0, verdict=Verdict.REPORT_ONLY)

    def test_side_conditions_join_the_verdict(self):
        record = VerificationRecord.judged("def1.2", PARAMS, 1e-12, 1e-10, conditions={"first_order_convergence": False})
        self.assertEqual(record.verdict, Verdict.FAIL)
        self.assertEqual(VerificationRecord.judged("def1.2", PARAMS, 1e-12, 1e-10, conditions={"a": True}).verdict,
                         Verdict.PASS)
        with self.assertRaises(ValidationError):
            VerificationRecord(claim_id="x", params=PARAMS, residual=0.0, bound=1.0, verdict=Verdict.PASS,
                               conditions={"decreasing": False})

    def test_generator_time_orders_commutation_records(self):
        early = RecordParams(t=0.0, s=1.0, generator_t=0.5, backend="b")
        late = RecordParams(t=0.0, s=1.0, generator_t=1.0, backend="b")
        self.assertLess(early.sort_key(), late.sort_key())

    def test_sort_key_orders_by_claim_then_parameters(self):
        later = VerificationRecord.judged("a", RecordParams(t=1.0, s=0.0, backend="b"), 0.0, 1.0)
        earlier = VerificationRecord.judged("a", RecordParams(t=0.0, s=2.0, backend="b"), 0.0, 1.0)
        other = VerificationRecord.judged("b", RecordParams(t=0.0, s=0.0, backend="b"), 0.0, 1.0)
        self.assertEqual(sorted([other, later, earlier], key=VerificationRecord.sort_key), [earlier, later, other])

    def test_hyper_power_sorts_last(self):
        finite = RecordParams(t=0.0, s=1.0, n=3, backend="b")
        hyper = RecordParams(t=0.0, s=1.0, n="inf", backend="b")
        self.assertLess(finite.sort_key(), hyper.sort_key())

    def test_verdict_serialises_as_tag(self):
        record = VerificationRecord.judged("x", PARAMS, 1.0, 0.0, asserted=False)
        self.assertEqual(record.model_dump()["verdict"], "REPORT-ONLY")


class TestScenarioConfig(unittest.TestCase):
    def test_defaults(self):
        config = ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="constant-diagonal"))
        self.assertEqual(config.grid.t, [0.0, 0.5, 1.0])
        self.assertEqual(config.grid.r, [0.5])
        self.assertEqual(config.powers, [1, 2, 3])
        self.assertIsNone(config.lambda_values())
        self.assertEqual(config.tolerances.to_context().quad_tol, 1e-10)

    def test_lambda_entries(self):
        config = ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="constant-diagonal"),
                                lambdas=[1.0, [0.0, 3.0]])
        self.assertEqual(config.lambda_values(), [1.0 + 0j, 3j])
        self.assertEqual(to_complex((2.0, -1.0)), 2.0 - 1.0j)

    def test_backend_rules(self):
        with self.assertRaises(ValidationError):
            BackendSpec()
        with self.assertRaises(ValidationError):
            BackendSpec(catalog="constant-diagonal", kind="constant", matrix=[[1.0]])
        with self.assertRaises(ValidationError):
            BackendSpec(kind="constant")
        with self.assertRaises(ValidationError):
            BackendSpec(kind="scaled", matrix=[[1.0]])
        with self.assertRaises(ValidationError):
            BackendSpec(kind="evolution")
        with self.assertRaises(ValidationError):
            BackendSpec(kind="constant", matrix=[[1.0, 2.0]])
        self.assertEqual(BackendSpec(kind="constant", matrix=[[[0.0, 1.0]]]).complex_matrix(), [[1j]])

    def test_unknown_claims_rejected(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="x"), claims=["thm9.9"])

    def test_averaging_steps_must_decrease(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="x"), averaging_steps=[0.1, 0.1])

    def test_negative_grid_rejected(self):
        with self.assertRaises(ValidationError):
            ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="x"), grid={"t": [-1.0]})


class TestParseConfig(unittest.TestCase):
    def test_valid_mapping(self):
        config = parse_config({"scenario_id": "demo", "backend": {"kind": "constant", "matrix": [[1, 0], [0, 2]]},
                               "claims": ["thm2.1.1"], "tolerances": {"quad_tol": 1e-9}})
        self.assertEqual(config.claims, ["thm2.1.1"])
        self.assertEqual(config.tolerances.to_context().quad_tol, 1e-9)

    def test_names_the_offending_field(self):
        with self.assertRaises(ConfigError) as context:
            parse_config({"scenario_id": "demo", "backend": {"catalog": "constant-diagonal"},
                          "tolerances": {"quad_tol": -1.0}})
        self.assertEqual(context.exception.field, "tolerances.quad_tol")

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as context:
            parse_config({"scenario_id": "demo", "backend": {"catalog": "constant-diagonal"}, "colour": "red"})
        self.assertEqual(context.exception.field, "colour")

    def test_not_a_mapping(self):
        with self.assertRaises(ConfigError):
            parse_config(["scenario_id"])


class TestReport(unittest.TestCase):
    def test_summary_must_match(self):
        config = ScenarioConfig(scenario_id="s", backend=BackendSpec(catalog="constant-diagonal"))
        records = [VerificationRecord.judged("x", PARAMS, 1.0, 0.0)]
        with self.assertRaises(ValidationError):
            Report(scenario_id="s", config=config, records=records, summary=Summary())
        report = Report(scenario_id="s", config=config, records=records, summary=Summary.tally(records))
        self.assertEqual(report.summary.failed, 1)
        self.assertEqual(report.exit_code, 1)


if __name__ == '__main__':
    unittest.main()

import math
import unittest

import numpy as np

from qsg.harness.errors import DomainError
from qsg.harness.models import Verdict
from qsg.numerics.operators import FiniteOperator
from qsg.numerics.spectra import SpectrumKind, approx_eigenpair, eigenvalue_clusters
from qsg.scenarios.catalog import CATALOG
from qsg.semigroups.quasi_semigroup import ConstantQuasiSemigroup
from qsg.tests.test_spectra import rotated_jordan_block
from qsg.verification import verifier


def backend(name, seed=0):
    return CATALOG[name].build(seed, None)


class TestIdentities(unittest.TestCase):
    def test_right_identity_on_semigroup(self):
        Q = backend("constant-diagonal")
        for lam in (0.0, 1.0, 1.5, 3.0, 2.0 + 1.0j):
            record = verifier.check_identity_right(Q, lam, 0.0, 1.0)
            self.assertEqual(record.verdict, Verdict.PASS, lam)
            self.assertEqual(record.claim_id, "thm2.1.1")
            self.assertEqual(record.params.backend, "constant:constant-diagonal")

    def test_left_identity_on_jordan_block(self):
        record = verifier.check_identity_left(backend("constant-jordan"), 0.5, 0.5, 1.0)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.claim_id, "thm2.1.2")

    def test_time_varying_witness(self):
        record = verifier.check_identity_right(backend("scaled-linear-a"), 0.0, 0.0, 1.0)
        self.assertEqual(record.verdict, Verdict.REPORT_ONLY)
        self.assertIsNone(record.bound)
        self.assertIn("nominal_bound", record.diagnostics)
        self.assertGreater(record.residual, 1.2)
        self.assertLess(record.residual, 1.5)

    def test_power_identities(self):
        Q = backend("constant-diagonal")
        for n in (1, 2, 3):
            right = verifier.check_power_identity(Q, 1.5, 0.0, 1.0, n)
            left = verifier.check_power_identity_left(Q, 1.5, 0.0, 1.0, n)
            self.assertEqual((right.verdict, left.verdict), (Verdict.PASS, Verdict.PASS), n)
            self.assertEqual(right.params.n, n)
        self.assertEqual(right.claim_id, "cor2.3.1")
        self.assertEqual(left.claim_id, "cor2.3.2")

    def test_power_must_be_positive(self):
        with self.assertRaises(DomainError):
            verifier.check_power_identity(backend("constant-diagonal"), 1.0, 0.0, 1.0, 0)

    def test_semigroup_case(self):
        record = verifier.check_semigroup_case(backend("constant-diagonal"), 1.0, 1.0, 0.5)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertLessEqual(record.diagnostics["drift"], 1e-12)
        witness = verifier.check_semigroup_case(backend("scaled-linear-a"), 0.0, 1.0, 1.0)
        self.assertEqual(witness.verdict, Verdict.REPORT_ONLY)
        self.assertGreater(witness.diagnostics["drift"], 0.1)

    def test_identity_bound_grows_with_window(self):
        Q = backend("constant-diagonal")
        self.assertLess(verifier.identity_bound(Q, 1.0, 0.0, 1.0), verifier.identity_bound(Q, 1.0, 0.0, 3.0))


    def test_right_and_left_forms_agree_on_constant_backends(self):
        backends = [backend("random-normal", seed) for seed in range(3)] + [backend("constant-jordan")]
        for Q in backends:
            for lam in verifier.default_lambdas(Q.generator(0.0)):
                for s in (0.5, 1.0):
                    right = verifier.check_identity_right(Q, lam, 0.0, s)
                    left = verifier.check_identity_left(Q, lam, 0.0, s)
                    self.assertEqual((right.verdict, left.verdict), (Verdict.PASS, Verdict.PASS), (lam, s))
                    self.assertLessEqual(abs(right.residual - left.residual), right.bound, (lam, s))


class TestSubspaceInclusions(unittest.TestCase):
    def test_kernel_inclusion(self):
        record = verifier.check_kernel_inclusion(backend("constant-diagonal"), 1.0, 0.0, 1.0, 1)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.claim_id, "cor2.3.3")
        self.assertEqual(record.diagnostics["generator_kernel_dim"], 1)
        self.assertEqual(record.diagnostics["propagator_kernel_dim"], 1)

    def test_kernel_grows_under_collision(self):
        record = verifier.check_kernel_inclusion(backend("constant-rotation"), 1j * math.pi, 0.0, 1.0, 1)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.diagnostics["generator_kernel_dim"], 1)
        self.assertEqual(record.diagnostics["propagator_kernel_dim"], 2)

    def test_power_kernel_inclusion(self):
        record = verifier.check_kernel_inclusion(backend("constant-jordan"), 0.0, 0.0, 1.0, 2)
        self.assertEqual(record.claim_id, "cor2.3.5")
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.diagnostics["generator_kernel_dim"], 2)

    def test_range_inclusions(self):
        Q = backend("constant-jordan")
        self.assertEqual(verifier.check_range_inclusion(Q, 0.0, 0.0, 1.0, 1).claim_id, "cor2.3.4")
        self.assertEqual(verifier.check_range_inclusion(Q, 0.0, 0.0, 1.0, 2).claim_id, "cor2.3.6")
        hyper = verifier.check_range_inclusion(Q, 0.0, 0.0, 1.0, "inf")
        self.assertEqual(hyper.claim_id, "cor2.3.7")
        self.assertEqual(hyper.params.n, "inf")
        self.assertEqual(hyper.verdict, Verdict.PASS)
        self.assertEqual(verifier.check_range_inclusion(Q, 0.0, 0.0, 1.0, math.inf).params.n, "inf")

    def test_random_backends(self):
        for seed in range(3):
            Q = backend("random-general", seed)
            for lam in verifier.default_lambdas(Q.generator(0.0)):
                for n in (1, 2):
                    self.assertEqual(verifier.check_kernel_inclusion(Q, lam, 0.0, 0.5, n).verdict, Verdict.PASS)
                    self.assertEqual(verifier.check_range_inclusion(Q, lam, 0.0, 0.5, n).verdict, Verdict.PASS)

    def test_fredholm_transfer(self):
        record = verifier.check_fredholm_transfer(backend("constant-rotation"), 1j * math.pi, 0.0, 1.0)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.residual, 0.0)
        self.assertEqual(record.diagnostics["propagator_alpha"], 2)


class TestSpectralInclusions(unittest.TestCase):
    def test_ordinary_equality(self):
        record = verifier.check_spectral_inclusion(backend("constant-diagonal"), 0.0, 1.0, SpectrumKind.ORDINARY)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.claim_id, "thm2.4.1")
        self.assertIn("equality", record.note)
        self.assertIn(verifier.COLLAPSE_NOTE, record.note)

    def test_hidden_jordan_block_passes_every_kind(self):
        for seed in range(4):
            Q = ConstantQuasiSemigroup(rotated_jordan_block(4, seed))
            for kind in SpectrumKind:
                record = verifier.check_spectral_inclusion(Q, 0.0, 1.0, kind)
                self.assertEqual(record.verdict, Verdict.PASS, (seed, kind, record.residual))
                self.assertLessEqual(record.residual, 1e-10, (seed, kind))
            lambdas = verifier.default_lambdas(Q.generator(0.0))
            self.assertEqual(len(lambdas), 2)
            self.assertAlmostEqual(lambdas[1], 1.0, places=12)

    def test_collision_keeps_multiplicity(self):
        record = verifier.check_spectral_inclusion(backend("constant-rotation"), 0.0, 1.0, SpectrumKind.POINT)
        self.assertEqual(record.verdict, Verdict.PASS)
        [[real, imag, multiplicity]] = record.diagnostics["generator_image_points"]
        self.assertAlmostEqual(real, -1.0, places=12)
        self.assertEqual(multiplicity, 2)

    def test_time_varying_witness(self):
        record = verifier.check_spectral_inclusion(backend("scaled-linear-a"), 0.0, 1.0, SpectrumKind.ORDINARY)
        self.assertEqual(record.verdict, Verdict.REPORT_ONLY)
        self.assertAlmostEqual(record.residual, math.exp(1.5) - math.e, delta=1e-8)

    def test_essential_is_vacuous(self):
        record = verifier.check_spectral_inclusion(backend("constant-jordan"), 0.0, 1.0, SpectrumKind.ESSENTIAL)
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertEqual(record.note, "vacuous in finite dimension")

    def test_regular_inclusion_proof_path(self):
        record = verifier.check_regular_inclusion(backend("constant-jordan"), 0.0, 1.0)
        self.assertEqual(record.claim_id, "thm2.5")
        self.assertEqual(record.verdict, Verdict.PASS)
        self.assertTrue(record.diagnostics["proof_path_ok"])
        [entry] = record.diagnostics["proof_path"]
        self.assertEqual(entry["lam_real"], 1.0)
        self.assertEqual(entry["quotient_dim"], 0)
        self.assertIsNone(entry["quotient_sigma_min"])
        self.assertIn("e^(lambda s0)", record.note)
        self.assertIn(verifier.EXPONENT_NOTE, record.note)
        self.assertIn("states e^(lambda) not in the approximate spectrum", record.note)

    def test_every_regular_record_carries_the_exponent_reading(self):
        for name in ("constant-diagonal", "scaled-linear-a"):
            record = verifier.check_spectral_inclusion(backend(name), 0.5, 1.0, SpectrumKind.REGULAR)
            self.assertIn(verifier.EXPONENT_NOTE, record.note, name)
        point = verifier.check_spectral_inclusion(backend("constant-diagonal"), 0.5, 1.0, SpectrumKind.POINT)
        self.assertNotIn(verifier.EXPONENT_NOTE, point.note)

    def test_approximate_eigenvectors_propagate(self):
        rng = np.random.default_rng(17)
        for seed in range(5):
            Q = backend("random-normal", seed)
            A = Q.generator(0.0)
            for lam in verifier.default_lambdas(A)[:10]:
                perturbed = lam + 1e-3 * complex(rng.standard_normal(), rng.standard_normal())
                record = verifier.check_approx_propagation(Q, 0.0, 1.0, approx_eigenpair(A, perturbed))
                self.assertEqual(record.verdict, Verdict.PASS, (seed, perturbed))
                self.assertEqual(record.claim_id, "thm2.4.3.approx")


    def test_fifty_pairs_across_defect_sizes(self):
        rng = np.random.default_rng(23)
        records = []
        for seed in range(10):
            Q = backend("random-normal", seed)
            A = Q.generator(0.0)
            eigenvalues = [value for value, _ in eigenvalue_clusters(A)]
            for index, size in enumerate((0.0, 1e-3, 1e-1, 1e-3, 1e-1)):
                angle = rng.uniform(0.0, 2.0 * math.pi)
                lam = eigenvalues[index % len(eigenvalues)] + size * complex(math.cos(angle), math.sin(angle))
                pair = approx_eigenpair(A, lam)
                self.assertLessEqual(pair.eta, size + 1e-12)
                records.append(verifier.check_approx_propagation(Q, 0.0, 1.0, pair))
        self.assertEqual(len(records), 50)
        self.assertEqual({record.verdict for record in records}, {Verdict.PASS})


class TestDefaultLambdas(unittest.TestCase):
    def test_diagonal(self):
        self.assertEqual(verifier.default_lambdas(FiniteOperator(np.diag([1.0, 2.0]))),
                         [1.0 + 0j, 2.0 + 0j, 1.5 + 0j, 3.0 + 0j, 0j])

    def test_zero_is_not_repeated(self):
        self.assertEqual(verifier.default_lambdas(FiniteOperator([[0.0, 1.0], [0.0, 0.0]])), [0j, 1.0 + 0j])


if __name__ == '__main__':
    unittest.main()

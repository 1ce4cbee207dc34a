import math
import unittest

import numpy as np

from qsg.harness.errors import DimensionError, InvarianceError, NumericError
from qsg.numerics.numkernel import ToleranceContext
from qsg.numerics.operators import (
    FiniteOperator,
    Subspace,
    fredholm_data,
    hyper_range,
    invariance_defect,
    is_bounded_below,
    is_semi_regular,
    kernel,
    power_kernel,
    power_range,
    quotient_operator,
    range_chain_dims,
    range_space,
    shifted,
    subspace_contained,
)

JORDAN = [[0.0, 1.0], [0.0, 0.0]]


def jordan_block(n):
    return np.diag(np.ones(n - 1), 1)


class TestKernelAndRange(unittest.TestCase):
    def test_kernel_of_identity_is_trivial(self):
        self.assertEqual(kernel(FiniteOperator(np.eye(2))).dim, 0)

    def test_kernel_of_jordan_block(self):
        null = kernel(FiniteOperator(JORDAN))
        self.assertEqual(null.dim, 1)
        self.assertAlmostEqual(abs(null.basis[0, 0]), 1.0, places=12)

    def test_kernel_of_zero_is_everything(self):
        self.assertEqual(kernel(FiniteOperator(np.zeros((3, 3)))).dim, 3)

    def test_range_of_jordan_block(self):
        image = range_space(FiniteOperator(JORDAN))
        self.assertEqual(image.dim, 1)
        self.assertAlmostEqual(abs(image.basis[0, 0]), 1.0, places=12)

    def test_rank_nullity(self):
        rng = np.random.default_rng(11)
        matrix = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 5))
        T = FiniteOperator(matrix)
        self.assertEqual(kernel(T).dim, 2)
        self.assertEqual(range_space(T).dim, 3)

    def test_cancellation_noise_counts_as_zero(self):
        # e^(i pi) - R with R = -I up to rounding
        T = FiniteOperator(np.array([[-1.0, 1e-15], [0.0, -1.0]]))
        self.assertEqual(kernel(shifted(T, -1.0)).dim, 2)


class TestPowerChains(unittest.TestCase):
    def test_power_kernel_of_jordan_block(self):
        T = FiniteOperator(JORDAN)
        self.assertEqual(power_kernel(T, 1).dim, 1)
        self.assertEqual(power_kernel(T, 2).dim, 2)
        self.assertEqual(power_kernel(T, 5).dim, 2)

    def test_power_range_of_jordan_block(self):
        T = FiniteOperator(JORDAN)
        self.assertEqual(power_range(T, 1).dim, 1)
        self.assertEqual(power_range(T, 2).dim, 0)

    def test_range_chain_dims(self):
        self.assertEqual(range_chain_dims(FiniteOperator(jordan_block(3)), 4), [2, 1, 0, 0])

    def test_power_must_be_positive(self):
        with self.assertRaises(DimensionError):
            power_kernel(FiniteOperator(JORDAN), 0)

    def test_hyper_range(self):
        self.assertEqual(hyper_range(FiniteOperator(JORDAN)).dim, 0)
        self.assertEqual(hyper_range(FiniteOperator(np.eye(3))).dim, 3)
        mixed = hyper_range(FiniteOperator(np.diag([1.0, 0.0])))
        self.assertEqual(mixed.dim, 1)
        self.assertAlmostEqual(abs(mixed.basis[0, 0]), 1.0, places=12)

    def test_hyper_range_is_invariant(self):
        rng = np.random.default_rng(5)
        matrix = rng.standard_normal((4, 4))
        matrix[:, 0] = 0.0
        T = FiniteOperator(matrix)
        self.assertLessEqual(invariance_defect(T, hyper_range(T)), 10 * T.tol.rank_tol * T.norm)

    def test_shifted_jordan_block_powers(self):
        # (e I - e^J) squares to zero numerically
        T = FiniteOperator(np.array([[math.e, math.e], [0.0, math.e]]))
        target = shifted(T, math.e)
        self.assertEqual(power_kernel(target, 2).dim, 2)
        self.assertEqual(power_range(target, 2).dim, 0)


class TestSubspaces(unittest.TestCase):
    def test_complement(self):
        line = Subspace(2, np.array([[1.0], [0.0]]))
        complement = line.complement()
        self.assertEqual(complement.dim, 1)
        self.assertAlmostEqual(abs(complement.basis[1, 0]), 1.0, places=12)
        self.assertEqual(Subspace.zero(3).complement().dim, 3)
        self.assertEqual(Subspace.full(3).complement().dim, 0)

    def test_rejects_non_orthonormal_basis(self):
        with self.assertRaises(NumericError):
            Subspace(2, np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_wrong_ambient_dimension(self):
        with self.assertRaises(DimensionError):
            Subspace(3, np.eye(2))

    def test_containment(self):
        line = Subspace(2, np.array([[1.0], [0.0]]))
        self.assertEqual(subspace_contained(line, Subspace.full(2), 1e-12), (True, 0.0))
        contained, defect = subspace_contained(line, line.complement(), 1e-12)
        self.assertFalse(contained)
        self.assertAlmostEqual(defect, 1.0)
        self.assertEqual(subspace_contained(Subspace.zero(2), line, 0.0), (True, 0.0))

    def test_containment_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            subspace_contained(Subspace.full(2), Subspace.full(3), 1e-8)


class TestQuotientAndRegularity(unittest.TestCase):
    def test_quotient_of_diagonal(self):
        T = FiniteOperator(np.diag([1.0, 2.0]))
        quotient = quotient_operator(T, Subspace(2, np.array([[1.0], [0.0]])))
        self.assertEqual(quotient.dim, 1)
        self.assertAlmostEqual(complex(quotient.matrix[0, 0]), 2.0, places=12)

    def test_quotient_of_jordan_block(self):
        quotient = quotient_operator(FiniteOperator(JORDAN), Subspace(2, np.array([[1.0], [0.0]])))
        self.assertAlmostEqual(abs(quotient.matrix[0, 0]), 0.0, places=14)

    def test_quotient_by_whole_space(self):
        quotient = quotient_operator(FiniteOperator(np.eye(2)), Subspace.full(2))
        self.assertEqual(quotient.dim, 0)
        self.assertEqual(is_bounded_below(quotient), (True, float("inf")))

    def test_quotient_needs_invariance(self):
        diagonal = Subspace(2, np.array([[1.0], [1.0]]) / math.sqrt(2.0))
        with self.assertRaises(InvarianceError) as context:
            quotient_operator(FiniteOperator(np.diag([1.0, 2.0])), diagonal)
        self.assertAlmostEqual(context.exception.defect, 0.5, places=12)

    def test_is_semi_regular(self):
        self.assertTrue(is_semi_regular(FiniteOperator(np.eye(2)))[0])
        self.assertFalse(is_semi_regular(FiniteOperator(JORDAN))[0])
        self.assertFalse(is_semi_regular(FiniteOperator(np.diag([1.0, 0.0])))[0])

    def test_is_bounded_below(self):
        self.assertEqual(is_bounded_below(FiniteOperator(JORDAN)), (False, 0.0))
        flag, sigma_min = is_bounded_below(FiniteOperator(np.diag([2.0, 3.0])))
        self.assertTrue(flag)
        self.assertAlmostEqual(sigma_min, 2.0)
        self.assertFalse(is_bounded_below(FiniteOperator(np.zeros((2, 2))))[0])

    def test_quotient_bounded_below_exactly_when_kernel_is_trivial(self):
        T = FiniteOperator(np.diag([1.0, 2.0, 0.0]))
        first, third = np.eye(3)[:, [0]], np.eye(3)[:, [2]]
        cases = [(quotient_operator(T, Subspace(3, first)), False), (quotient_operator(T, Subspace(3, third)), True)]
        rng = np.random.default_rng(7)
        unitary, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        block = np.zeros((4, 4))
        block[:3, :3] = jordan_block(3)
        block[3, 3] = 2.0
        rotated = FiniteOperator(unitary @ block @ unitary.conj().T)
        ascent = hyper_range(rotated)
        self.assertEqual(ascent.dim, 1)
        cases.append((quotient_operator(rotated, ascent), False))
        for quotient, expected in cases:
            self.assertEqual(is_bounded_below(quotient)[0], expected)
            self.assertEqual(kernel(quotient).dim == 0, expected)
        self.assertEqual(kernel(cases[2][0]).dim, 1)

    def test_fredholm_data(self):
        data = fredholm_data(FiniteOperator(JORDAN))
        self.assertEqual((data.alpha, data.beta, data.index), (1, 1, 0))
        self.assertTrue(data.is_fredholm)

    def test_tolerance_controls_rank(self):
        matrix = np.diag([1.0, 1e-6])
        self.assertEqual(kernel(FiniteOperator(matrix)).dim, 0)
        self.assertEqual(kernel(FiniteOperator(matrix, ToleranceContext(rank_tol=1e-4))).dim, 1)


if __name__ == '__main__':
    unittest.main()

import numpy as np
import scipy.sparse as sp
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from linalg.direct import coarse_direct_solve
from linalg.exceptions import FactorizationError, IndefinitePreconditionerError
from linalg.krylov import estimate_condition_number, pcg
from linalg.sparse import assemble_from_triplets, is_symmetric


def laplacian_1d(n):
    return sp.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format='csr')


class SparseTestCase(SimpleTestCase):
    def test_duplicates_are_summed(self):
        matrix = assemble_from_triplets((2, 2), [0, 1, 0, 0], [0, 1, 0, 1], [1.0, 2.0, 3.0, -1.0])
        np.testing.assert_array_equal(matrix.toarray(), [[4.0, -1.0], [0.0, 2.0]])
        self.assertTrue(matrix.has_sorted_indices)

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        rows, cols = rng.integers(0, 20, 500), rng.integers(0, 20, 500)
        values = rng.standard_normal(500)
        first = assemble_from_triplets((20, 20), rows, cols, values)
        second = assemble_from_triplets((20, 20), rows, cols, values)
        np.testing.assert_array_equal(first.data, second.data)
        np.testing.assert_array_equal(first.indices, second.indices)

    def test_empty_rows(self):
        matrix = assemble_from_triplets((4, 3), [2], [1], [5.0])
        self.assertEqual(matrix.shape, (4, 3))
        self.assertEqual(matrix[2, 1], 5.0)
        self.assertEqual(matrix.nnz, 1)

    def test_out_of_range(self):
        with self.assertRaises(ValidationError):
            assemble_from_triplets((2, 2), [0, 2], [0, 0], [1.0, 1.0])

    def test_symmetry(self):
        self.assertTrue(is_symmetric(laplacian_1d(5)))
        self.assertFalse(is_symmetric(sp.csr_matrix([[1.0, 2.0], [0.0, 1.0]])))


class PcgTestCase(SimpleTestCase):
    def test_identity(self):
        result = pcg(sp.identity(4, format='csr'), np.ones(4))
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 1)
        np.testing.assert_allclose(result.x, np.ones(4))

    def test_zero_rhs(self):
        result = pcg(laplacian_1d(5), np.zeros(5))
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 0)

    def test_two_by_two_condition(self):
        matrix = sp.diags([1.0, 10.0], format='csr')
        result = pcg(matrix, np.array([1.0, 1.0]), rel_tol=1e-12)
        self.assertEqual(result.iterations, 2)
        self.assertAlmostEqual(result.condition_number(), 10.0, places=6)

    def test_laplacian_condition(self):
        n = 50
        matrix = laplacian_1d(n)
        rhs = np.random.default_rng(3).standard_normal(n)
        result = pcg(matrix, rhs, rel_tol=1e-10)
        self.assertTrue(result.converged)
        theta = np.pi / (n + 1)
        exact = (1 + np.cos(theta)) / (1 - np.cos(theta))
        self.assertLess(abs(result.condition_number() / exact - 1), 0.05)
        np.testing.assert_allclose(matrix @ result.x, rhs, atol=1e-8)

    def test_jacobi_preconditioner(self):
        matrix = sp.diags(np.arange(1.0, 11.0), format='csr')
        result = pcg(matrix, np.ones(10), preconditioner=lambda r: r / np.arange(1.0, 11.0))
        self.assertEqual(result.iterations, 1)

    def test_indefinite_preconditioner(self):
        with self.assertRaises(IndefinitePreconditionerError):
            pcg(laplacian_1d(5), np.ones(5), preconditioner=lambda r: -r)

    def test_max_iter(self):
        result = pcg(laplacian_1d(30), np.ones(30), max_iter=3)
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 3)
        self.assertEqual(len(result.alphas), 3)

    def test_tridiagonal_estimate(self):
        self.assertAlmostEqual(estimate_condition_number([2.0, 2.0], [0.0]), 1.0)
        with self.assertRaises(ValidationError):
            estimate_condition_number([2.0], [])


class DirectTestCase(SimpleTestCase):
    def test_cholesky(self):
        matrix = laplacian_1d(6)
        solver = coarse_direct_solve(matrix)
        rhs = np.arange(6.0)
        np.testing.assert_allclose(matrix @ solver.solve(rhs), rhs)

    def test_not_spd(self):
        with self.assertRaises(FactorizationError):
            coarse_direct_solve(-laplacian_1d(4))

import numpy as np
import scipy.sparse.linalg as spla
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from experiments.problems import ChessboardDiffusionProblem, LidDrivenCavityProblem, SmoothDiffusionProblem
from linalg.exceptions import IndefinitePreconditionerError
from mesh.builders import build_unit_box_mesh
from mesh.refinement import MeshHierarchy
from mixins.init_meshes import InitMeshesMixin
from multigrid.cycles import (as_preconditioner, cycle, mg_stokes, solve_preconditioned, solve_stationary,
                              vcycle_diffusion)
from multigrid.hierarchy import build_diffusion_hierarchy, build_stokes_hierarchy, smoothing_schedule


class DiffusionMultigridTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.rng = np.random.default_rng(23)
        cls.coefficients = SmoothDiffusionProblem(2).coefficients()
        cls.hierarchy = build_diffusion_hierarchy(cls.square_hierarchy, cls.coefficients, 'pgs', 2)

    def test_schedules(self):
        self.assertEqual(smoothing_schedule(4, 1, 'varv'), [8, 4, 2, 1])
        self.assertEqual(smoothing_schedule(3, 2, 'w'), [2, 2, 2])
        with self.assertRaises(ValidationError):
            smoothing_schedule(3, 0, 'v')

    def test_single_level_is_exact(self):
        hierarchy = build_diffusion_hierarchy(MeshHierarchy(self.square, 1), self.coefficients)
        result = solve_preconditioned(hierarchy)
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 1)

    def test_preconditioner_is_symmetric(self):
        for smoother in ('pjac', 'pgs', 'bgs'):
            hierarchy = build_diffusion_hierarchy(self.square_hierarchy, self.coefficients, smoother, 2)
            M = as_preconditioner(hierarchy)
            r, s = self.rng.standard_normal(M.shape[0]), self.rng.standard_normal(M.shape[0])
            self.assertAlmostEqual(np.dot(M @ r, s) / np.dot(r, M @ s), 1.0, places=9, msg=smoother)
            self.assertGreater(np.dot(M @ r, r), 0.0)

    def test_preconditioned_solve(self):
        result = solve_preconditioned(self.hierarchy)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.iterations, 15)
        self.assertLess(result.condition_number(), 3.0)
        system = self.hierarchy.system
        direct = spla.spsolve(system.matrix.tocsc(), system.rhs)
        np.testing.assert_allclose(result.x, direct, rtol=1e-6, atol=1e-10)

    def test_stationary_solver(self):
        result = solve_stationary(self.hierarchy)
        self.assertTrue(result.converged)
        self.assertFalse(result.diverged)
        self.assertLessEqual(result.iterations, 20)

    def test_more_smoothing_contracts_faster(self):
        contractions = []
        for m in (1, 2, 4):
            hierarchy = build_diffusion_hierarchy(self.square_hierarchy, self.coefficients, 'pgs', m)
            contractions.append(solve_stationary(hierarchy, max_iter=6, rel_tol=1e-14).contraction)
        self.assertLess(contractions[1], contractions[0])
        self.assertLess(contractions[2], contractions[1])

    def test_vcycle_from_the_solution_is_stationary(self):
        system = self.hierarchy.system
        exact = spla.spsolve(system.matrix.tocsc(), system.rhs)
        top = len(self.hierarchy) - 1
        again = vcycle_diffusion(self.hierarchy, top, system.rhs / self.hierarchy.finest.weights, exact, 2)
        np.testing.assert_allclose(again, exact, rtol=1e-9, atol=1e-12)

    def test_divergent_jacobi_is_reported(self):
        hierarchy = build_diffusion_hierarchy(self.square_hierarchy, self.coefficients, 'pjac', 1, damping=1.5)
        result = solve_stationary(hierarchy, max_iter=200)
        self.assertFalse(result.converged)
        self.assertTrue(result.diverged)

    def test_coarsest_level_solves_from_any_initial_guess(self):
        hierarchy = build_diffusion_hierarchy(MeshHierarchy(self.square, 1), self.coefficients)
        coarse = hierarchy.finest
        f = self.rng.standard_normal(coarse.size)
        exact = spla.spsolve(coarse.matrix.tocsc(), coarse.weights * f)
        for u0 in (np.zeros(coarse.size), self.rng.standard_normal(coarse.size), exact):
            np.testing.assert_allclose(cycle(hierarchy, 0, f, u0), exact, rtol=1e-9, atol=1e-12)

    def test_overdamped_jacobi_gives_indefinite_preconditioner(self):
        hierarchy = build_diffusion_hierarchy(self.square_hierarchy, self.coefficients, 'pjac', 1, damping=3.0)
        M = as_preconditioner(hierarchy)
        dense = np.column_stack([M @ column for column in np.eye(M.shape[0])])
        eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (dense + dense.T))
        self.assertLess(eigenvalues[0], 0.0)
        with self.assertRaises(IndefinitePreconditionerError):
            solve_preconditioned(hierarchy, rhs=eigenvectors[:, 0])


class DiffusionLevelIndependenceTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.coarse = build_unit_box_mesh(2, 0.25)

    def test_pgs_preconditioner_iterations_stay_bounded(self):
        coefficients = SmoothDiffusionProblem(2).coefficients()
        iterations = []
        for n_levels in (2, 3, 4):
            hierarchy = build_diffusion_hierarchy(MeshHierarchy(self.coarse, n_levels), coefficients, 'pgs', 2)
            result = solve_preconditioned(hierarchy)
            self.assertTrue(result.converged)
            self.assertLessEqual(result.iterations, 13)
            self.assertLessEqual(result.condition_number(), 2.5)
            iterations.append(result.iterations)
        self.assertLessEqual(max(iterations) - min(iterations), 3)

    def test_chessboard_high_contrast_iterations(self):
        problem = ChessboardDiffusionProblem(100.0)
        meshes = MeshHierarchy(self.coarse, 4)
        hierarchy = build_diffusion_hierarchy(meshes, problem.coefficients(), 'bgs', 2,
                                              alpha_inv_levels=problem.alpha_inv_levels(meshes))
        result = solve_preconditioned(hierarchy)
        self.assertTrue(result.converged)
        self.assertGreaterEqual(result.iterations, 25)
        self.assertLessEqual(result.iterations, 40)


class StokesMultigridTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.rng = np.random.default_rng(29)
        cls.problem = LidDrivenCavityProblem(2)
        cls.meshes = MeshHierarchy(build_unit_box_mesh(2, 0.6), 3)

    def build(self, smoother='bgs', steps=1, cycle='varv', epsilon=1e-8):
        return build_stokes_hierarchy(self.meshes, self.problem.coefficients(), epsilon, smoother, steps, cycle,
                                      boundary=self.problem.boundary_velocity)

    def test_preconditioned_augmented_solve(self):
        hierarchy = self.build()
        self.assertEqual(hierarchy.steps, [4, 2, 1])
        result = solve_preconditioned(hierarchy)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.iterations, 30)
        system = hierarchy.system
        direct = spla.spsolve(system.Aeps.tocsc(), system.rhs)
        self.assertLess(np.linalg.norm(result.x - direct) / np.linalg.norm(direct), 1e-5)

    def test_preconditioner_is_symmetric(self):
        for smoother in ('bjac', 'bgs'):
            hierarchy = self.build(smoother, epsilon=1e-4)
            M = as_preconditioner(hierarchy)
            r, s = self.rng.standard_normal(M.shape[0]), self.rng.standard_normal(M.shape[0])
            self.assertAlmostEqual(np.dot(M @ r, s) / np.dot(r, M @ s), 1.0, places=7, msg=smoother)

    def test_single_level_stationary_solve(self):
        hierarchy = build_stokes_hierarchy(MeshHierarchy(build_unit_box_mesh(2, 0.6), 1), self.problem.coefficients(),
                                           1e-4, boundary=self.problem.boundary_velocity)
        result = solve_stationary(hierarchy)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.iterations, 2)

    def test_w_cycle_solver(self):
        hierarchy = self.build('bgs', 4, 'w', epsilon=1e-4)
        self.assertEqual(hierarchy.q, 2)
        result = solve_stationary(hierarchy, max_iter=100)
        self.assertTrue(result.converged)
        top = len(hierarchy) - 1
        f = hierarchy.system.rhs / hierarchy.finest.weights
        once = mg_stokes(hierarchy, top, f, np.zeros(hierarchy.finest.size), 2)
        self.assertTrue(np.all(np.isfinite(once)))

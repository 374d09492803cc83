import numpy as np
import scipy.sparse.linalg as spla
from django.test import SimpleTestCase

from experiments.problems import ChessboardDiffusionProblem, SmoothDiffusionProblem
from hdg_diffusion.assembly import assemble_condensed_diffusion
from hdg_diffusion.coefficients import DiffusionCoefficients
from hdg_diffusion.full_system import assemble_full_hdg_diffusion, diffusion_energy_balance
from hdg_diffusion.recovery import diffusion_error_norms, numerical_flux, recover_local_diffusion
from linalg.sparse import is_symmetric
from mesh.builders import build_unit_box_mesh
from mesh.refinement import MeshHierarchy
from mixins.init_meshes import InitMeshesMixin
from spaces.facet_space import FacetSpace


def no_dirichlet(points):
    return np.zeros(len(points), dtype=bool)


class CondensedDiffusionTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.problem2 = SmoothDiffusionProblem(2)
        cls.problem3 = SmoothDiffusionProblem(3)

    def condensed_and_full(self, mesh, problem):
        space = FacetSpace(mesh)
        coefficients = problem.coefficients()
        return (assemble_condensed_diffusion(space, coefficients),
                assemble_full_hdg_diffusion(space, coefficients))

    def test_symmetric_positive_definite(self):
        system = assemble_condensed_diffusion(FacetSpace(self.square), self.problem2.coefficients())
        self.assertTrue(is_symmetric(system.matrix))
        self.assertGreater(np.linalg.eigvalsh(system.matrix.toarray()).min(), 0.0)
        self.assertTrue(np.all(system.data.gamma > 0))
        self.assertTrue(np.all(system.data.gamma <= 1))

    def test_gamma_is_one_without_reaction(self):
        system = assemble_condensed_diffusion(FacetSpace(self.square), DiffusionCoefficients(2.0, 0.0, 1.0))
        np.testing.assert_array_equal(system.data.gamma, 1.0)

    def test_constants_in_kernel(self):
        space = FacetSpace(self.square, dirichlet=no_dirichlet)
        system = assemble_condensed_diffusion(space, DiffusionCoefficients(self.problem2.alpha, 0.0, 0.0))
        self.assertEqual(space.n_free, self.square.n_facets)
        self.assertLess(np.abs(system.matrix @ np.ones(space.n_free)).max(), 1e-12)

    def test_schur_complement_matches_condensed(self):
        for mesh, problem in ((self.square, self.problem2), (self.cube, self.problem3)):
            condensed, full = self.condensed_and_full(mesh, problem)
            schur, rhs = full.schur_complement()
            difference = (schur - condensed.matrix).toarray()
            scale = np.linalg.norm(condensed.matrix.toarray())
            self.assertLess(np.linalg.norm(difference) / scale, 1e-12)
            self.assertLess(np.linalg.norm(rhs - condensed.rhs) / np.linalg.norm(condensed.rhs), 1e-12)

    def test_schur_complement_matches_condensed_on_finer_meshes(self):
        meshes = ((build_unit_box_mesh(2, np.sqrt(2) / 8), self.problem2),
                  (build_unit_box_mesh(3, np.sqrt(3) / 3), self.problem3))
        for (mesh, problem), n_elements in zip(meshes, (128, 162)):
            self.assertEqual(mesh.n_elements, n_elements)
            condensed, full = self.condensed_and_full(mesh, problem)
            schur, rhs = full.schur_complement()
            difference = (schur - condensed.matrix).toarray()
            self.assertLess(np.abs(difference).max() / np.abs(condensed.matrix.toarray()).max(), 1e-12)
            self.assertLess(np.abs(rhs - condensed.rhs).max() / np.abs(condensed.rhs).max(), 1e-12)

    def test_recovery_matches_full_solve(self):
        condensed, full = self.condensed_and_full(self.square, self.problem2)
        uhat = spla.spsolve(condensed.matrix.tocsc(), condensed.rhs)
        solution = recover_local_diffusion(condensed, uhat)
        sigma, u, uhat_full = full.solve()
        np.testing.assert_allclose(uhat_full, uhat, atol=1e-11)
        np.testing.assert_allclose(solution.sigma, sigma, atol=1e-11)
        np.testing.assert_allclose(solution.u, u, atol=1e-11)

    def test_numerical_flux_is_conservative(self):
        for mesh, problem in ((self.square, self.problem2), (self.cube, self.problem3)):
            system = assemble_condensed_diffusion(FacetSpace(mesh), problem.coefficients())
            solution = recover_local_diffusion(system, spla.spsolve(system.matrix.tocsc(), system.rhs))
            flux = numerical_flux(system, solution)
            interior = mesh.interior_facets
            elements, local = mesh.facet_elements[interior], mesh.facet_local_index[interior]
            jump = flux[elements[:, 0], local[:, 0]] + flux[elements[:, 1], local[:, 1]]
            self.assertLess(np.abs(jump).max(), 1e-10 * np.abs(flux).max())

    def test_energy_identity(self):
        _, full = self.condensed_and_full(self.cube, self.problem3)
        sigma, u, uhat = full.solve()
        uhat_local = full.space.localize(uhat)[:, :, 0]
        energy, work = diffusion_energy_balance(full.space, full.data, sigma, u, uhat_local)
        self.assertAlmostEqual(energy / work, 1.0, places=10)

    def test_zero_source(self):
        space = FacetSpace(self.square)
        full = assemble_full_hdg_diffusion(space, DiffusionCoefficients(1.0, 1.0, 0.0))
        sigma, u, uhat = full.solve()
        self.assertEqual(np.abs(sigma).max(), 0.0)
        self.assertEqual(np.abs(uhat).max(), 0.0)

    def test_recovery_without_source(self):
        space = FacetSpace(self.square)
        system = assemble_condensed_diffusion(space, DiffusionCoefficients(1.0, 0.0, 0.0))
        uhat = np.linspace(0.0, 1.0, space.n_free)
        solution = recover_local_diffusion(system, uhat)
        np.testing.assert_allclose(solution.u, solution.uhat)
        constant = recover_local_diffusion(system, np.full(space.n_free, 0.0))
        self.assertEqual(np.abs(constant.sigma).max(), 0.0)

    def test_linear_solution_is_reproduced(self):
        gradient = np.array([1.0, -2.0, 0.5])

        def u(points):
            return 0.3 + points @ gradient[:points.shape[1]]

        for mesh in (self.square, self.cube):
            d = mesh.dim
            space = FacetSpace(mesh)
            system = assemble_condensed_diffusion(space, DiffusionCoefficients(1.0, 0.0, 0.0), dirichlet=u)
            solution = recover_local_diffusion(system, spla.spsolve(system.matrix.tocsc(), system.rhs))
            err_u, err_sigma = diffusion_error_norms(
                solution, u, lambda points: np.tile(-gradient[:d], (len(points), 1)))
            self.assertLess(err_u, 1e-12)
            self.assertLess(err_sigma, 1e-12)

    def test_convergence_rates(self):
        errors = []
        for n in (8, 16):
            mesh = build_unit_box_mesh(2, np.sqrt(2.0) / n)
            system = assemble_condensed_diffusion(FacetSpace(mesh), self.problem2.coefficients())
            solution = recover_local_diffusion(system, spla.spsolve(system.matrix.tocsc(), system.rhs))
            errors.append(diffusion_error_norms(solution, self.problem2.u, self.problem2.sigma))
        eoc_u = np.log2(errors[0][0] / errors[1][0])
        eoc_sigma = np.log2(errors[0][1] / errors[1][1])
        self.assertTrue(1.8 <= eoc_u <= 2.2, eoc_u)
        self.assertTrue(0.85 <= eoc_sigma <= 1.15, eoc_sigma)


class ChessboardTestCase(SimpleTestCase):
    def test_coarse_levels_see_a_constant(self):
        rho = 100.0
        hierarchy = MeshHierarchy(build_unit_box_mesh(2, np.sqrt(2.0) / 4), 3)
        levels = ChessboardDiffusionProblem(rho).alpha_inv_levels(hierarchy)
        finest = levels[-1]
        self.assertEqual(set(np.unique(finest)), {1.0, 1.0 / rho})
        self.assertEqual(int((finest == 1.0).sum()), len(finest) // 2)
        for coarse in levels[:-1]:
            np.testing.assert_allclose(coarse, 2.0 / (rho + 1))

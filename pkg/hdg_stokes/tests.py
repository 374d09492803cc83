import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from experiments.problems import ManufacturedStokesProblem
from hdg_stokes.assembly import assemble_condensed_stokes
from hdg_stokes.coefficients import StokesCoefficients
from hdg_stokes.full_system import assemble_full_hdg_stokes, stokes_energy_balance
from hdg_stokes.recovery import pressure_error_norm, recover_local_stokes, stokes_error_norms
from hdg_stokes.uzawa import uzawa_solve
from linalg.sparse import is_symmetric
from mesh.builders import build_unit_box_mesh
from mixins.init_meshes import InitMeshesMixin
from spaces.facet_space import FacetSpace, PressureSpace


def zero_source(points):
    return np.zeros_like(points)


def no_dirichlet(points):
    return np.zeros(len(points), dtype=bool)


class StokesTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.problem2 = ManufacturedStokesProblem(2)
        cls.problem3 = ManufacturedStokesProblem(3)

    def spaces(self, mesh, dirichlet=None):
        vspace = FacetSpace(mesh, mesh.dim, dirichlet)
        return vspace, PressureSpace(mesh, mean_zero=not vspace.has_natural_boundary)

    def condensed(self, mesh, coefficients, **kwargs):
        vspace, pspace = self.spaces(mesh)
        return assemble_condensed_stokes(vspace, pspace, coefficients, **kwargs)

    def test_invalid_coefficients(self):
        with self.assertRaises(ValidationError):
            StokesCoefficients(0.0, 1.0, zero_source)
        with self.assertRaises(ValidationError):
            StokesCoefficients(1.0, -1.0, zero_source)

    def test_augmented_operator_is_spd(self):
        for epsilon in (1e-2, 1e-4, 1e-6, 1e-8):
            system = self.condensed(self.square, self.problem2.coefficients(), epsilon=epsilon)
            self.assertTrue(is_symmetric(system.A))
            self.assertTrue(is_symmetric(system.Aeps))
            np.linalg.cholesky(system.A.toarray())
            np.linalg.cholesky(system.Aeps.toarray())

    def test_translations(self):
        vspace = FacetSpace(self.square, 2, dirichlet=no_dirichlet)
        system = assemble_condensed_stokes(vspace, PressureSpace(self.square, False),
                                           StokesCoefficients(1.0, 0.0, zero_source))
        translation = np.tile([1.0, -2.0], vspace.n_free // 2)
        self.assertLess(np.abs(system.A @ translation).max(), 1e-12)
        self.assertLess(np.abs(system.B @ translation).max(), 1e-12)
        solution = recover_local_stokes(system, translation, np.zeros(self.square.n_elements))
        self.assertLess(np.abs(solution.L).max(), 1e-12)

    def test_divergence_rows(self):
        system = self.condensed(self.square, self.problem2.coefficients())
        np.testing.assert_array_equal(system.div_lift, 0.0)
        WB = (system.W @ system.B).toarray()
        mesh = self.square
        facet = mesh.interior_facets[0]
        k, i = mesh.facet_elements[facet, 0], mesh.facet_local_index[facet, 0]
        dof = system.vspace.local_dofs[k, i]
        np.testing.assert_allclose(WB[k, dof], mesh.local_facet_measure[k, i] * mesh.facet_normal[k, i])

    def test_schur_complement_matches_condensed(self):
        for mesh, problem in ((self.square, self.problem2), (self.cube, self.problem3)):
            vspace, pspace = self.spaces(mesh)
            system = assemble_condensed_stokes(vspace, pspace, problem.coefficients())
            schur, rhs = assemble_full_hdg_stokes(vspace, pspace, problem.coefficients()).schur_complement()
            n = vspace.n_free
            A = system.A.toarray()
            WB = (system.W @ system.B).toarray()
            self.assertLess(np.linalg.norm(schur[:n, :n] - A) / np.linalg.norm(A), 1e-12)
            self.assertLess(np.linalg.norm(schur[n:, :n] + WB) / np.linalg.norm(WB), 1e-12)
            self.assertLess(np.linalg.norm(schur[:n, n:] + WB.T) / np.linalg.norm(WB), 1e-12)
            self.assertLess(np.abs(schur[n:, n:]).max(), 1e-12 * np.abs(A).max())
            self.assertLess(np.linalg.norm(rhs[:n] - system.rhs) / np.linalg.norm(system.rhs), 1e-12)
            self.assertLess(np.abs(rhs[n:]).max(), 1e-12 * np.abs(system.rhs).max())

    def test_recovery_matches_full_solve(self):
        vspace, pspace = self.spaces(self.square)
        coefficients = self.problem2.coefficients()
        system = assemble_condensed_stokes(vspace, pspace, coefficients)
        uhat, p = system.solve_saddle_point()
        solution = recover_local_stokes(system, uhat, p)
        full = assemble_full_hdg_stokes(vspace, pspace, coefficients)
        L, u, uhat_full, p_full = full.solve()
        np.testing.assert_allclose(uhat_full, uhat, atol=1e-11)
        np.testing.assert_allclose(p_full, p, atol=1e-10)
        np.testing.assert_allclose(solution.L, L, atol=1e-11)
        np.testing.assert_allclose(solution.u, u, atol=1e-11)

    def test_energy_identity(self):
        vspace, pspace = self.spaces(self.cube)
        full = assemble_full_hdg_stokes(vspace, pspace, self.problem3.coefficients())
        L, u, uhat, _ = full.solve()
        energy, work = stokes_energy_balance(vspace, full.data, L, u, vspace.localize(uhat))
        self.assertAlmostEqual(energy / work, 1.0, places=10)

    def test_zero_source(self):
        system = self.condensed(self.square, StokesCoefficients(1.0, 1.0, zero_source))
        result = uzawa_solve(system, k_max=1)
        self.assertEqual(np.abs(result.uhat).max(), 0.0)
        self.assertEqual(np.abs(result.p).max(), 0.0)

    def test_one_uzawa_step_is_accurate(self):
        system = self.condensed(self.square, self.problem2.coefficients(), epsilon=1e-8)
        uhat, p = system.solve_saddle_point()
        result = uzawa_solve(system, k_max=1)
        self.assertLess(np.linalg.norm(result.uhat - uhat) / np.linalg.norm(uhat), 1e-5)
        self.assertLess(np.linalg.norm(result.p - p) / np.linalg.norm(p), 1e-4)
        self.assertAlmostEqual(system.pspace.mean(result.p), 0.0)

    def test_uzawa_pressure_error_decays(self):
        system = self.condensed(self.square, self.problem2.coefficients(), epsilon=1e-3)
        _, p = system.solve_saddle_point()
        errors = []
        for k in (1, 2, 3):
            result = uzawa_solve(system, k_max=k)
            errors.append(np.sqrt(system.pspace.inner(result.p - p, result.p - p)))
            self.assertEqual(len(result.steps), k)
        self.assertLess(errors[1], 0.5 * errors[0])
        self.assertLess(errors[2], 0.5 * errors[1])

    def test_divergence_free_linear_velocity(self):
        def velocity(points):
            return np.stack([points[:, 1], points[:, 0]], axis=1)

        system = self.condensed(self.square, StokesCoefficients(1.0, 0.0, zero_source), dirichlet=velocity)
        uhat, p = system.solve_saddle_point()
        solution = recover_local_stokes(system, uhat, p)
        errors = stokes_error_norms(
            solution, velocity, lambda points: np.tile(-np.array([[0.0, 1.0], [1.0, 0.0]]), (len(points), 1, 1)))
        self.assertLess(max(errors), 1e-12)
        self.assertLess(np.abs(p).max(), 1e-10)

    def test_convergence_rates(self):
        problem = self.problem2
        errors = []
        for n in (8, 16):
            mesh = build_unit_box_mesh(2, np.sqrt(2.0) / n)
            system = self.condensed(mesh, problem.coefficients())
            result = uzawa_solve(system, k_max=1)
            solution = recover_local_stokes(system, result.uhat, result.p)
            errors.append(stokes_error_norms(solution, problem.u, problem.flux)
                          + (pressure_error_norm(solution, problem.p),))
        eoc = np.log2(np.array(errors[0]) / np.array(errors[1]))
        self.assertTrue(1.8 <= eoc[0] <= 2.2, eoc)
        self.assertTrue(0.8 <= eoc[1] <= 1.3, eoc)
        self.assertTrue(0.85 <= eoc[2] <= 1.15, eoc)
        self.assertGreater(eoc[3], 0.8)

import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
import numpy as np
import pandas as pd

from mesh.builders import build_unit_box_mesh
from quadrature.rules import integrate_over_mesh
from .forms import COARSE_DIAMETER, ExperimentConfigForm
from .problems import BackwardStepProblem, LidDrivenCavityProblem, ManufacturedStokesProblem, stokes_problem
from .reports import NOT_AVAILABLE, LevelRow, SolverReport, compute_eoc
from .runners import run_mg_study


def read_csv(source):
    frame = pd.read_csv(source, header=None, dtype=str, keep_default_na=False)
    return frame.values.tolist()


class ExperimentConfigFormTestCase(SimpleTestCase):
    def test_diffusion_defaults(self):
        form = ExperimentConfigForm({'equation': 'diffusion', 'study': 'converge', 'dim': 2, 'levels': 3})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.config()
        self.assertEqual(config.problem, 'smooth')
        self.assertEqual(config.mode, 'direct')
        self.assertEqual(config.smoother, 'pgs')
        self.assertEqual(config.cycle, 'v')
        self.assertEqual(config.steps, 2)
        self.assertAlmostEqual(config.coarse_h, 0.25)
        self.assertFalse(config.is_stokes)

    def test_stokes_defaults(self):
        form = ExperimentConfigForm({'equation': 'stokes', 'study': 'mg', 'dim': 3, 'levels': 2})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.config()
        self.assertEqual(config.problem, 'manufactured')
        self.assertEqual(config.mode, 'precond')
        self.assertEqual(config.smoother, 'bgs')
        self.assertEqual(config.cycle, 'varv')
        self.assertEqual(config.steps, 1)
        self.assertAlmostEqual(config.coarse_h, 0.5)
        self.assertTrue(config.is_stokes)

    def test_default_coarse_meshes_meet_the_diameter_bound(self):
        for dim, bound in ((2, 0.25), (3, 0.5)):
            mesh = build_unit_box_mesh(dim, COARSE_DIAMETER[dim])
            self.assertLessEqual(mesh.diameter, bound)
        self.assertEqual(build_unit_box_mesh(2, COARSE_DIAMETER[2]).n_elements, 72)
        self.assertEqual(build_unit_box_mesh(3, COARSE_DIAMETER[3]).n_elements, 384)

    def test_cross_field_errors(self):
        invalid = [
            ({'equation': 'stokes', 'problem': 'chessboard'}, 'problem'),
            ({'equation': 'diffusion', 'problem': 'chessboard'}, 'problem'),
            ({'equation': 'stokes', 'smoother': 'pgs', 'study': 'mg'}, 'smoother'),
            ({'equation': 'diffusion', 'mode': 'direct', 'study': 'mg'}, 'mode'),
            ({'equation': 'diffusion', 'tol': 2.0}, 'tol'),
            ({'equation': 'stokes', 'eps': 0.0}, 'eps'),
            ({'equation': 'diffusion', 'rho': -1.0, 'study': 'mg'}, 'rho'),
        ]
        for overrides, field in invalid:
            data = {'equation': 'diffusion', 'study': 'converge', 'dim': 2, 'levels': 2}
            data.update(overrides)
            form = ExperimentConfigForm(data)
            self.assertFalse(form.is_valid(), overrides)
            self.assertIn(field, form.errors)

    def test_rejects_unknown_dimension(self):
        form = ExperimentConfigForm({'equation': 'diffusion', 'study': 'mg', 'dim': 4, 'levels': 2})
        self.assertFalse(form.is_valid())
        self.assertIn('dim', form.errors)


class SolverReportTestCase(SimpleTestCase):
    def test_eoc(self):
        self.assertAlmostEqual(compute_eoc(0.4, 0.1), 2.0)
        self.assertIsNone(compute_eoc(None, 0.1))
        self.assertIsNone(compute_eoc(0.4, 0.0))

    def test_csv_layout(self):
        report = SolverReport('test', with_divergence=True)
        report.add(LevelRow(1, 10, 5, 3.25, err_u=0.4, err_flux=0.8, err_div=0.2))
        report.add(LevelRow(2, 40, NOT_AVAILABLE, NOT_AVAILABLE))
        report.add(LevelRow(3, 160, 7, None, err_u=0.025, err_flux=0.2, err_div=0.05))
        stream = StringIO()
        report.to_csv(stream)
        rows = read_csv(StringIO(stream.getvalue()))
        self.assertEqual(rows[0], ['level', 'dofs', 'iters', 'kappa', 'err_u', 'eoc_u', 'err_flux', 'eoc_flux',
                                   'err_div', 'eoc_div'])
        self.assertEqual(rows[1], ['1', '10', '5', '3.25', '4.000000e-01', '', '8.000000e-01', '', '2.000000e-01', ''])
        self.assertEqual(rows[2][:4], ['2', '40', 'N/A', 'N/A'])
        self.assertEqual(rows[2][4:], [''] * 6)
        # no EOC across a failed level
        self.assertEqual(rows[3][5], '')
        self.assertTrue(report.rows[1].failed)

    def test_frame_keeps_missing_values_as_text(self):
        report = SolverReport('test')
        report.add(LevelRow(1, 10, 1, None, err_u=0.4, err_flux=0.8))
        report.add(LevelRow(2, 40, NOT_AVAILABLE, NOT_AVAILABLE))
        frame = report.to_frame()
        self.assertEqual(list(frame.columns), report.columns)
        self.assertEqual(frame.loc[0, 'kappa'], '')
        self.assertEqual(frame.loc[1, 'iters'], 'N/A')
        self.assertEqual(frame.loc[1, 'err_u'], '')

    def test_csv_without_divergence(self):
        report = SolverReport('test')
        report.add(LevelRow(1, 10, err_u=0.4, err_flux=0.8))
        report.add(LevelRow(2, 40, err_u=0.1, err_flux=0.4))
        stream = StringIO()
        report.to_csv(stream)
        rows = read_csv(StringIO(stream.getvalue()))
        self.assertEqual(len(rows[0]), 8)
        self.assertEqual(rows[2][5], '2.0000')
        self.assertEqual(rows[2][7], '1.0000')


class ExperimentCommandTestCase(SimpleTestCase):
    def run_command(self, name, **options):
        out = StringIO()
        call_command(name, stdout=out, **options)
        return read_csv(StringIO(out.getvalue()))

    def test_converge_diffusion_direct(self):
        rows = self.run_command('converge_diffusion', levels=3, coarse_h=0.75)
        self.assertEqual(len(rows), 4)
        errors = [float(row[4]) for row in rows[1:]]
        self.assertLess(errors[2], errors[1])
        self.assertLess(errors[1], errors[0])
        self.assertEqual(rows[1][2], '')
        self.assertGreater(float(rows[3][5]), 1.0)

    def test_mg_diffusion_preconditioner(self):
        rows = self.run_command('mg_diffusion', levels=3, coarse_h=0.75, smoother='pgs', steps=2)
        for row in rows[2:]:
            self.assertGreater(int(row[2]), 0)
            self.assertGreaterEqual(float(row[3]), 1.0)

    def test_mg_diffusion_stationary_chessboard(self):
        rows = self.run_command('mg_diffusion', levels=3, coarse_h=0.75, problem='chessboard', rho=10.0,
                                mode='solver', steps=3)
        self.assertEqual(len(rows), 4)
        self.assertEqual(rows[1][4], '')
        self.assertNotEqual(rows[3][2], NOT_AVAILABLE)

    def test_mg_stokes_cavity(self):
        rows = self.run_command('mg_stokes', problem='cavity', levels=2, coarse_h=0.75, eps=1e-4)
        self.assertEqual(rows[0][-2:], ['err_div', 'eoc_div'])
        self.assertGreater(int(rows[2][2]), 0)
        self.assertEqual(rows[2][4], '')

    def test_converge_stokes_direct(self):
        rows = self.run_command('converge_stokes', levels=2, coarse_h=0.75)
        self.assertEqual(len(rows), 3)
        self.assertLess(float(rows[2][4]), float(rows[1][4]))
        self.assertNotEqual(rows[2][8], '')

    def test_writes_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'report.csv')
            out = StringIO()
            call_command('converge_diffusion', levels=1, coarse_h=0.75, out=path, stdout=out)
            rows = read_csv(path)
            self.assertEqual(rows[0][0], 'level')
            self.assertEqual(len(rows), 2)
            self.assertIn(path, out.getvalue())

    def test_invalid_options(self):
        with self.assertRaises(CommandError):
            call_command('mg_diffusion', mode='direct', stdout=StringIO())
        with self.assertRaises(CommandError):
            call_command('converge_stokes', problem='cavity', stdout=StringIO())

    def test_indefinite_preconditioner_reported(self):
        # over-damped Jacobi makes the V-cycle an indefinite preconditioner
        form = ExperimentConfigForm({'equation': 'diffusion', 'study': 'mg', 'dim': 2, 'levels': 3,
                                     'coarse_h': 0.75, 'smoother': 'pjac', 'steps': 1, 'damping': 3.0})
        self.assertTrue(form.is_valid(), form.errors)
        report = run_mg_study(form.config())
        self.assertFalse(report.rows[0].failed)
        for row in report.rows[1:]:
            self.assertTrue(row.failed)
            self.assertEqual(row.kappa, NOT_AVAILABLE)
        self.assertIsNotNone(report.wall_time)


class StokesProblemsTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.points = {dim: np.random.default_rng(7).random((20, dim)) for dim in (2, 3)}

    def test_manufactured_velocity_is_divergence_free(self):
        for dim in (2, 3):
            problem = ManufacturedStokesProblem(dim)
            divergence = np.trace(problem.grad_u(self.points[dim]), axis1=1, axis2=2)
            self.assertLess(np.abs(divergence).max(), 1e-12)

    def test_manufactured_pressure_has_zero_mean(self):
        for dim in (2, 3):
            problem = ManufacturedStokesProblem(dim)
            mesh = build_unit_box_mesh(dim, 1.0 if dim == 2 else 1.8)
            self.assertAlmostEqual(float(integrate_over_mesh(mesh, problem.p)), 0.0, places=12)

    def test_cavity_lid(self):
        problem = LidDrivenCavityProblem(2)
        values = problem.boundary_velocity(np.array([[0.5, 1.0], [0.5, 0.0], [0.0, 0.5]]))
        np.testing.assert_allclose(values, [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])

    def test_step_outflow_is_natural(self):
        points = np.array([[5.0, 0.25], [0.0, 0.75], [2.0, 0.0]])
        np.testing.assert_array_equal(BackwardStepProblem.dirichlet(points), [False, True, True])
        inflow = BackwardStepProblem(2).boundary_velocity(points)
        self.assertAlmostEqual(inflow[1, 0], 1.0)
        self.assertEqual(inflow[0, 0], 0.0)

    def test_default_reaction(self):
        self.assertEqual(stokes_problem('manufactured', 2).beta, 10.0)
        self.assertEqual(stokes_problem('cavity', 2).beta, 0.0)
        self.assertEqual(stokes_problem('step', 3, beta=5.0).beta, 5.0)

"""
Experiment runners. Each one walks the levels J = 1, ..., levels of a refinement
hierarchy, solves on the finest mesh of the J coarsest levels and reports one row
per J.
"""
import logging

import numpy as np
from django.core.exceptions import ValidationError
from scipy.sparse.linalg import spsolve

from decorators.timed import timed
from hdg_diffusion.assembly import assemble_condensed_diffusion
from hdg_diffusion.recovery import diffusion_error_norms, recover_local_diffusion
from hdg_stokes.assembly import assemble_condensed_stokes
from hdg_stokes.recovery import pressure_error_norm, recover_local_stokes, stokes_error_norms
from hdg_stokes.uzawa import direct_inner_solver, uzawa_solve
from linalg.exceptions import SolverError
from linalg.krylov import pcg
from mesh.refinement import MeshHierarchy
from multigrid.cycles import as_preconditioner, solve_preconditioned, solve_stationary
from multigrid.hierarchy import build_diffusion_hierarchy, build_stokes_hierarchy
from spaces.facet_space import PressureSpace, build_facet_space
from .problems import diffusion_problem, stokes_problem
from .reports import NOT_AVAILABLE, LevelRow, SolverReport

logger = logging.getLogger(__name__)


def _kappa(result):
    if result.iterations < 2:
        return None
    try:
        return result.condition_number()
    except ValidationError:
        return None


def _iterative_outcome(result, precond):
    """(iterations, kappa) of a converged run, N/A otherwise"""
    if not result.converged:
        return NOT_AVAILABLE, NOT_AVAILABLE if precond else None
    return result.iterations, _kappa(result) if precond else None


def _diffusion_row(config, problem, meshes):
    coefficients = problem.coefficients()
    alpha_inv = problem.alpha_inv_levels(meshes)
    iterations = kappa = None
    if config.mode == 'direct':
        space = build_facet_space(meshes.finest, dirichlet=problem.dirichlet)
        system = assemble_condensed_diffusion(space, coefficients, alpha_inv[-1])
        uhat = spsolve(system.matrix.tocsc(), system.rhs)
    else:
        hierarchy = build_diffusion_hierarchy(meshes, coefficients, config.smoother, config.steps, config.cycle,
                                              config.damping, alpha_inv, problem.dirichlet)
        system = hierarchy.system
        try:
            if config.mode == 'precond':
                result = solve_preconditioned(hierarchy, rel_tol=config.tol, max_iter=config.max_iter)
            else:
                result = solve_stationary(hierarchy, rel_tol=config.tol, max_iter=config.max_iter)
        except SolverError as exc:
            logger.warning('level %d: %s', len(meshes), exc)
            return LevelRow(len(meshes), system.matrix.shape[0], NOT_AVAILABLE, NOT_AVAILABLE)
        iterations, kappa = _iterative_outcome(result, config.mode == 'precond')
        uhat = result.x
    row = LevelRow(len(meshes), system.matrix.shape[0], iterations, kappa)
    if problem.exact and iterations != NOT_AVAILABLE:
        solution = recover_local_diffusion(system, uhat)
        row.errors['u'], row.errors['flux'] = diffusion_error_norms(solution, problem.u, problem.sigma)
    return row


def _stokes_inner_solver(config, hierarchy):
    system = hierarchy.system
    if config.mode == 'precond':
        preconditioner = as_preconditioner(hierarchy)

        def solve(rhs):
            result = pcg(system.Aeps, rhs, preconditioner, config.tol, config.max_iter)
            return result.x, result
    else:
        def solve(rhs):
            result = solve_stationary(hierarchy, rhs, config.tol, config.max_iter)
            return result.x, result
    return solve


def _stokes_row(config, problem, meshes):
    coefficients = problem.coefficients()
    boundary = getattr(problem, 'boundary_velocity', None)
    mesh = meshes.finest
    if config.mode == 'direct':
        vspace = build_facet_space(mesh, mesh.dim, problem.dirichlet)
        pspace = PressureSpace(mesh, mean_zero=not vspace.has_natural_boundary)
        system = assemble_condensed_stokes(vspace, pspace, coefficients, config.eps, boundary)
        inner_solver = direct_inner_solver(system.Aeps)
    else:
        hierarchy = build_stokes_hierarchy(meshes, coefficients, config.eps, config.smoother, config.steps,
                                           config.cycle, config.damping, problem.dirichlet, boundary)
        system = hierarchy.system
        inner_solver = _stokes_inner_solver(config, hierarchy)
    dofs = system.A.shape[0]
    try:
        result = uzawa_solve(system, inner_solver, config.uzawa_steps)
    except SolverError as exc:
        logger.warning('level %d: %s', len(meshes), exc)
        return LevelRow(len(meshes), dofs, NOT_AVAILABLE, NOT_AVAILABLE if config.mode == 'precond' else None)

    iterations = kappa = None
    first = result.steps[0]
    if first.pcg_result is not None:
        iterations = first.iterations
        if config.mode == 'precond':
            kappa = _kappa(first.pcg_result)
    solution = recover_local_stokes(system, result.uhat, result.p)
    row = LevelRow(len(meshes), dofs, iterations, kappa)
    if problem.exact:
        row.errors['u'], row.errors['div'], row.errors['flux'] = stokes_error_norms(solution, problem.u,
                                                                                    problem.flux)
        logger.info('level %d: pressure error %.6e', len(meshes), pressure_error_norm(solution, problem.p))
    else:
        row.errors['div'] = float(np.sqrt((mesh.elem_measure * solution.divergence ** 2).sum()))
    return row


def _run(config, title, problem, level_row, with_divergence):
    report = SolverReport(title, with_divergence)
    hierarchy = MeshHierarchy(problem.build_mesh(config.coarse_h), config.levels)
    for n_levels in range(1, config.levels + 1):
        row = report.add(level_row(config, problem, hierarchy.truncated(n_levels)))
        logger.info('%s level %d: %d unknowns, iterations %s', title, row.level, row.dofs, row.iterations)
    return report


@timed
def run_converge_diffusion(config) -> SolverReport:
    problem = diffusion_problem(config.problem, config.dim, config.rho)
    return _run(config, 'converge_diffusion', problem, _diffusion_row, with_divergence=False)


@timed
def run_converge_stokes(config) -> SolverReport:
    problem = stokes_problem(config.problem, config.dim, config.mu, config.beta)
    return _run(config, 'converge_stokes', problem, _stokes_row, with_divergence=True)


@timed
def run_mg_study(config) -> SolverReport:
    """Iteration counts and condition estimates of the multigrid solver or preconditioner"""
    if config.is_stokes:
        problem = stokes_problem(config.problem, config.dim, config.mu, config.beta)
        return _run(config, 'mg_stokes', problem, _stokes_row, with_divergence=True)
    problem = diffusion_problem(config.problem, config.dim, config.rho)
    return _run(config, 'mg_diffusion', problem, _diffusion_row, with_divergence=False)


RUNNERS = {
    'converge': {'diffusion': run_converge_diffusion, 'stokes': run_converge_stokes},
    'mg': {'diffusion': run_mg_study, 'stokes': run_mg_study},
}

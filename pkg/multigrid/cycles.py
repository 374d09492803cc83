"""
Multigrid cycles in operator form.

A level operator is A_l = D_l^{-1} K_l with D_l the weights of (.,.)_{0,l}; right-hand
sides passed to the cycles are in the same form, f = D^{-1} b.
"""
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator

from helpers.conf import solver_setting
from linalg.krylov import pcg

logger = logging.getLogger(__name__)


def cycle(hierarchy, level, f, u0, q=None, steps=None):
    """
    One multigrid cycle on `level`: pre-smoothing, q coarse corrections,
    post-smoothing with the transposed smoother; the coarsest level is solved
    directly
    """
    current = hierarchy.levels[level]
    if level == 0:
        return u0 + current.coarse_solver.solve(current.weights * f - current.matrix @ u0)
    q = q or hierarchy.q
    m = (steps or hierarchy.steps)[level]
    K, w, smoother = current.matrix, current.weights, current.smoother

    u = np.array(u0, dtype=float)
    for _ in range(m):
        u += smoother.apply(w * f - K @ u)
    coarse_f = current.restriction @ (f - (K @ u) / w)
    correction = np.zeros(hierarchy.levels[level - 1].size)
    for _ in range(q):
        correction = cycle(hierarchy, level - 1, coarse_f, correction, q, steps)
    u += current.prolongation @ correction
    for _ in range(m):
        u += smoother.apply_transpose(w * f - K @ u)
    return u


def vcycle_diffusion(hierarchy, level, f, u0, m):
    """V-cycle with `m` smoothing steps on every level"""
    return cycle(hierarchy, level, f, u0, q=1, steps=[m] * len(hierarchy))


def mg_stokes(hierarchy, level, g, u0, q):
    """Cycle with `q` coarse corrections and the hierarchy's level dependent smoothing"""
    return cycle(hierarchy, level, g, u0, q=q)


def as_preconditioner(hierarchy) -> LinearOperator:
    """
    One cycle from a zero initial guess, acting on residuals b - K u
    """
    finest = hierarchy.finest
    top = len(hierarchy) - 1
    zero = np.zeros(finest.size)

    def apply(residual):
        return cycle(hierarchy, top, np.ravel(residual) / finest.weights, zero)

    return LinearOperator((finest.size, finest.size), matvec=apply, rmatvec=apply, dtype=float)


def solve_preconditioned(hierarchy, rhs=None, rel_tol=None, max_iter=None):
    """PCG on the finest level with one cycle as preconditioner"""
    rhs = hierarchy.system.rhs if rhs is None else rhs
    return pcg(hierarchy.finest.matrix, rhs, as_preconditioner(hierarchy), rel_tol, max_iter)


class StationaryResult(object):
    def __init__(self, x, iterations, converged, diverged, residuals):
        self.x = x
        self.iterations = iterations
        self.converged = converged
        self.diverged = diverged
        self.residuals = residuals

    @property
    def contraction(self) -> float:
        """Geometric mean of the residual reduction per iteration"""
        if self.iterations == 0 or not self.residuals[0]:
            return 0.0
        return float((self.residuals[-1] / self.residuals[0]) ** (1.0 / self.iterations))


def solve_stationary(hierarchy, rhs=None, rel_tol=None, max_iter=None, divergence_factor=None):
    """
    Iterate u <- cycle(u) until the relative residual reaches `rel_tol`, the residual
    grows past `divergence_factor` times the initial one, or `max_iter` is hit

    @rtype: `StationaryResult`
    """
    rel_tol = solver_setting('REL_TOL', rel_tol)
    max_iter = solver_setting('STATIONARY_MAX_ITER', max_iter)
    divergence_factor = solver_setting('DIVERGENCE_FACTOR', divergence_factor)
    finest = hierarchy.finest
    b = hierarchy.system.rhs if rhs is None else np.asarray(rhs, dtype=float)
    f = b / finest.weights
    top = len(hierarchy) - 1

    u = np.zeros(finest.size)
    residuals = [float(np.linalg.norm(b))]
    converged = residuals[0] == 0.0
    diverged = False
    iterations = 0
    with np.errstate(over='ignore', invalid='ignore'):
        while not converged and iterations < max_iter:
            u = cycle(hierarchy, top, f, u)
            iterations += 1
            residuals.append(float(np.linalg.norm(b - finest.matrix @ u)))
            if not np.isfinite(residuals[-1]) or residuals[-1] > divergence_factor * residuals[0]:
                diverged = True
                break
            converged = residuals[-1] <= rel_tol * residuals[0]
    if converged:
        logger.debug('stationary multigrid converged in %d iterations', iterations)
    else:
        logger.warning('stationary multigrid did not converge (%d iterations, diverged=%s)', iterations, diverged)
    return StationaryResult(u, iterations, converged, diverged, residuals)

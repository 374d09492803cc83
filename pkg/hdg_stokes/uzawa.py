"""
Augmented Lagrangian Uzawa iteration for the condensed Stokes system.
"""
import logging

import numpy as np
from scipy.sparse.linalg import splu

from helpers.conf import solver_setting
from linalg.exceptions import ConvergenceError

logger = logging.getLogger(__name__)


class UzawaStep(object):
    def __init__(self, index, iterations, divergence, pcg_result=None):
        self.index = index
        self.iterations = iterations
        self.divergence = divergence
        self.pcg_result = pcg_result


class UzawaResult(object):
    def __init__(self, uhat, p, steps):
        self.uhat = uhat
        self.p = p
        self.steps = steps

    @property
    def iterations(self) -> int:
        return sum(step.iterations for step in self.steps)


def direct_inner_solver(matrix):
    """An inner solver factorizing the augmented operator once"""
    factor = splu(matrix.tocsc())

    def solve(rhs):
        return factor.solve(rhs), None
    return solve


def uzawa_solve(system, inner_solver=None, k_max=None):
    """
    Run k_max steps of
        Aeps u = f + B'W p - B'W b_D / eps,   p <- p - (B u + b_D) / eps
    starting from p = 0

    @param system: `CondensedStokesSystem`
    @param inner_solver: callable rhs -> (solution, `PcgResult` or None) for Aeps;
        a sparse LU factorization if None
    @param k_max: number of steps, SOLVER_DEFAULTS['UZAWA_STEPS'] if None
    @raises ConvergenceError: when the inner solver does not converge
    @rtype: `UzawaResult`
    """
    k_max = solver_setting('UZAWA_STEPS', k_max)
    if inner_solver is None:
        inner_solver = direct_inner_solver(system.Aeps)
    eps = system.epsilon
    weights = system.pspace.weights
    BT = system.B.T.tocsr()
    lift = BT @ (weights * system.div_lift) / eps

    p = np.zeros(system.pspace.n)
    uhat = np.zeros(system.vspace.n_free)
    steps = []
    for k in range(1, k_max + 1):
        rhs = system.rhs + BT @ (weights * p) - lift
        uhat, result = inner_solver(rhs)
        if result is not None and not result.converged:
            raise ConvergenceError(f'inner solve of Uzawa step {k} did not converge')
        divergence = system.B @ uhat + system.div_lift
        p = system.pspace.project(p - divergence / eps)
        norm = float(np.sqrt(np.dot(weights, divergence ** 2)))
        steps.append(UzawaStep(k, result.iterations if result is not None else 0, norm, result))
        logger.debug('uzawa step %d: |div| = %.3e', k, norm)
    return UzawaResult(uhat, p, steps)

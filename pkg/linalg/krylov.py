"""
Preconditioned conjugate gradients with Lanczos condition number estimates.
"""
import logging

import numpy as np
from django.core.exceptions import ValidationError
from scipy.linalg import eigvalsh_tridiagonal
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from helpers.conf import solver_setting
from linalg.exceptions import IndefinitePreconditionerError

logger = logging.getLogger(__name__)


class PcgResult(object):
    """
    Outcome of a PCG run

    @param x: final iterate
    @param iterations: number of completed iterations
    @param converged: whether the relative residual reached the tolerance
    @param residuals: Euclidean residual norms, starting with the initial one
    @param alphas: step lengths, one per iteration
    @param betas: direction update coefficients, one per iteration
    """

    def __init__(self, x, iterations, converged, residuals, alphas, betas):
        self.x = x
        self.iterations = iterations
        self.converged = converged
        self.residuals = residuals
        self.alphas = alphas
        self.betas = betas

    @property
    def relative_residual(self) -> float:
        if not self.residuals[0]:
            return 0.0
        return self.residuals[-1] / self.residuals[0]

    def lanczos_tridiagonal(self):
        """Diagonal and off-diagonal of the Lanczos matrix of the run"""
        return lanczos_from_cg(self.alphas, self.betas)

    def condition_number(self) -> float:
        return estimate_condition_number(*self.lanczos_tridiagonal())


def _as_operator(operator, n):
    if operator is None:
        return None
    if callable(operator) and not hasattr(operator, 'shape'):
        return LinearOperator((n, n), matvec=operator, dtype=float)
    return aslinearoperator(operator)


def pcg(matrix, rhs, preconditioner=None, rel_tol=None, max_iter=None, x0=None) -> PcgResult:
    """
    Solve A x = b for symmetric positive definite A

    @param matrix: sparse matrix or linear operator
    @param preconditioner: matrix, linear operator or callable r -> M r; identity if None
    @param rel_tol: stop when |r_k| <= rel_tol |r_0|
    @raises IndefinitePreconditionerError: when p'Ap <= 0 or r'Mr <= 0
    """
    rel_tol = solver_setting('REL_TOL', rel_tol)
    max_iter = solver_setting('MAX_ITER', max_iter)
    b = np.asarray(rhs, dtype=float)
    n = len(b)
    A = _as_operator(matrix, n)
    M = _as_operator(preconditioner, n)

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A.matvec(x) if x0 is not None else b.copy()
    residuals = [float(np.linalg.norm(r))]
    alphas, betas = [], []
    target = rel_tol * residuals[0]
    if residuals[0] == 0.0:
        return PcgResult(x, 0, True, residuals, alphas, betas)

    z = M.matvec(r) if M is not None else r.copy()
    rz = float(np.dot(r, z))
    if not rz > 0:
        raise IndefinitePreconditionerError(f'r\'Mr = {rz:.3e} is not positive')
    p = z.copy()
    converged = False
    iterations = 0
    while iterations < max_iter:
        Ap = A.matvec(p)
        curvature = float(np.dot(p, Ap))
        if not curvature > 0:
            raise IndefinitePreconditionerError(f'p\'Ap = {curvature:.3e} is not positive')
        alpha = rz / curvature
        x += alpha * p
        r -= alpha * Ap
        alphas.append(alpha)
        iterations += 1
        residuals.append(float(np.linalg.norm(r)))
        if residuals[-1] <= target:
            converged = True
            break
        z = M.matvec(r) if M is not None else r.copy()
        rz_new = float(np.dot(r, z))
        if not rz_new > 0:
            raise IndefinitePreconditionerError(f'r\'Mr = {rz_new:.3e} is not positive')
        beta = rz_new / rz
        betas.append(beta)
        p = z + beta * p
        rz = rz_new

    if converged:
        logger.debug('pcg converged in %d iterations', iterations)
    else:
        logger.warning('pcg stopped after %d iterations at relative residual %.3e',
                       iterations, residuals[-1] / residuals[0])
    return PcgResult(x, iterations, converged, residuals, alphas, betas)


def lanczos_from_cg(alphas, betas):
    """
    Lanczos tridiagonal matrix implied by the CG coefficients

    @returns: diagonal (k,) and off-diagonal (k - 1,)
    """
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)[:max(len(alphas) - 1, 0)]
    diagonal = 1.0 / alphas
    diagonal[1:] += betas / alphas[:-1]
    off_diagonal = np.sqrt(betas) / alphas[:-1]
    return diagonal, off_diagonal


def estimate_condition_number(diagonal, off_diagonal) -> float:
    """
    Ratio of the extreme eigenvalues of a symmetric tridiagonal matrix

    @raises ValidationError: with fewer than two recorded iterations
    """
    diagonal = np.asarray(diagonal, dtype=float)
    if len(diagonal) < 2:
        raise ValidationError('At least two CG iterations are needed for a condition number estimate')
    eigenvalues = eigvalsh_tridiagonal(diagonal, np.asarray(off_diagonal, dtype=float))
    return float(eigenvalues[-1] / eigenvalues[0])

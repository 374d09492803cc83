"""
Pointwise smoothers. `apply` maps a residual b - K u to a correction.
"""
import numpy as np
import scipy.sparse as sp
from django.core.exceptions import ValidationError
from scipy.sparse.linalg import spsolve_triangular


class Smoother(object):
    kind = None

    def apply(self, residual):
        raise NotImplementedError

    def apply_transpose(self, residual):
        raise NotImplementedError


class PointJacobi(Smoother):
    kind = 'pjac'

    def __init__(self, matrix, damping):
        diagonal = matrix.diagonal()
        if np.any(diagonal <= 0):
            raise ValidationError('Jacobi smoothing needs a positive diagonal')
        self.damping = damping
        self.scaled_inverse = damping / diagonal

    def apply(self, residual):
        return self.scaled_inverse * residual

    apply_transpose = apply


class PointGaussSeidel(Smoother):
    """Forward sweep; the transpose is the backward sweep"""
    kind = 'pgs'

    def __init__(self, matrix):
        if np.any(matrix.diagonal() <= 0):
            raise ValidationError('Gauss-Seidel smoothing needs a positive diagonal')
        self.lower = sp.tril(matrix, format='csr')
        self.upper = sp.triu(matrix, format='csr')

    def apply(self, residual):
        return spsolve_triangular(self.lower, residual, lower=True)

    def apply_transpose(self, residual):
        return spsolve_triangular(self.upper, residual, lower=False)

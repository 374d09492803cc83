import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from linalg.exceptions import FactorizationError

logger = logging.getLogger(__name__)


class CholeskySolver(object):
    """
    Dense Cholesky factorization of a small SPD matrix, used on the coarsest level
    """

    def __init__(self, matrix):
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=float)
        try:
            self.factor = scipy.linalg.cho_factor(dense)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError('Coarse matrix is not symmetric positive definite') from exc
        self.shape = dense.shape
        logger.debug('coarse Cholesky factor of size %d', self.shape[0])

    def solve(self, rhs):
        return scipy.linalg.cho_solve(self.factor, rhs)

    __call__ = solve


def coarse_direct_solve(matrix) -> CholeskySolver:
    return CholeskySolver(matrix)

"""
Vertex patch smoothers, additive (block Jacobi) and multiplicative (block Gauss-Seidel).
"""
import numpy as np

from linalg.exceptions import FactorizationError
from linalg.sparse import assemble_from_triplets
from smoothers.point import Smoother


def _patch_inverses(matrix, patches):
    """Inverse of every patch block, batched over patches of equal size"""
    inverses = [None] * len(patches)
    sizes = np.array([len(p) for p in patches])
    for size in np.unique(sizes):
        members = np.flatnonzero(sizes == size)
        idx = np.stack([patches[m] for m in members])
        rows = np.broadcast_to(idx[:, :, None], (len(members), size, size))
        cols = np.broadcast_to(idx[:, None, :], (len(members), size, size))
        blocks = np.asarray(matrix[rows.ravel(), cols.ravel()]).reshape(len(members), size, size)
        try:
            np.linalg.cholesky(blocks)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError('Patch block is not symmetric positive definite') from exc
        inv = np.linalg.inv(blocks)
        inv = 0.5 * (inv + np.swapaxes(inv, 1, 2))
        for m, block in zip(members, inv):
            inverses[m] = block
    return inverses


class BlockJacobi(Smoother):
    """damping * sum over patches of the extended patch inverses, stored as one sparse matrix"""
    kind = 'bjac'

    def __init__(self, matrix, patches, damping):
        self.damping = damping
        inverses = _patch_inverses(matrix, list(patches))
        rows = np.concatenate([np.repeat(p, len(p)) for p in patches])
        cols = np.concatenate([np.tile(p, len(p)) for p in patches])
        vals = np.concatenate([inv.ravel() for inv in inverses])
        self.operator = damping * assemble_from_triplets(matrix.shape, rows, cols, vals)

    def apply(self, residual):
        return self.operator @ residual

    apply_transpose = apply


class BlockGaussSeidel(Smoother):
    """Sequential patch solves in vertex order; the transpose sweeps in reverse"""
    kind = 'bgs'

    def __init__(self, matrix, patches):
        self.patches = list(patches)
        self.inverses = _patch_inverses(matrix, self.patches)
        matrix = matrix.tocsr()
        self.rows = [matrix[p] for p in self.patches]

    def _sweep(self, residual, order):
        correction = np.zeros_like(residual)
        for k in order:
            patch = self.patches[k]
            local = residual[patch] - self.rows[k] @ correction
            correction[patch] += self.inverses[k] @ local
        return correction

    def apply(self, residual):
        return self._sweep(residual, range(len(self.patches)))

    def apply_transpose(self, residual):
        return self._sweep(residual, range(len(self.patches) - 1, -1, -1))

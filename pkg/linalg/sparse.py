import numpy as np
import scipy.sparse as sp
from django.core.exceptions import ValidationError


def assemble_from_triplets(shape, rows, cols, values):
    """
    Build a CSR matrix from (row, col, value) triplets, summing duplicates in
    (row, col, insertion) order so equal inputs give bit-identical matrices

    @param shape: (n_rows, n_cols)
    @rtype: `scipy.sparse.csr_matrix`
    """
    n_rows, n_cols = shape
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    values = np.asarray(values, dtype=float).ravel()
    if not len(rows) == len(cols) == len(values):
        raise ValidationError('Triplet arrays must have equal length')
    if len(rows) and (rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols):
        raise ValidationError('Triplet index out of range')
    if not len(rows):
        return sp.csr_matrix(shape)

    order = np.lexsort((cols, rows))
    rows, cols, values = rows[order], cols[order], values[order]
    starts = np.flatnonzero(np.r_[True, (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])])
    data = np.add.reduceat(values, starts)
    indptr = np.searchsorted(rows[starts], np.arange(n_rows + 1))
    return sp.csr_matrix((data, cols[starts], indptr), shape=shape)


def is_symmetric(matrix, tol=1e-12) -> bool:
    if not matrix.nnz:
        return True
    return abs(matrix - matrix.T).max() <= tol * abs(matrix).max()


def diagonal_scaled(matrix, weights):
    """The operator D^{-1} K for a diagonal weight vector"""
    return sp.diags(1.0 / np.asarray(weights)) @ matrix

"""
Helper functions for building coarse meshes. Currently we support the following 2 domains:

1. **`build_unit_box_mesh`** - the unit square or cube split into Kuhn simplices
2. **`build_step_domain_mesh`** - the backward-facing step (0.5, 5) x (0, 0.5) u (0, 5) x (0.5, 1),
   extruded over (0, 1) in three dimensions
"""
import itertools
import math

import numpy as np
from django.core.exceptions import ValidationError

from mesh.level import MeshLevel

STEP_LENGTH = 5.0
STEP_CORNER = 0.5


def _validate(dim, target_h) -> None:
    if dim not in (2, 3):
        raise ValidationError(f'Unsupported dimension {dim}, expected 2 or 3')
    if not target_h > 0:
        raise ValidationError('target_h must be positive')


def cells_per_length(dim, length, target_h) -> int:
    """
    Smallest number of cube cells along `length` for which every Kuhn simplex
    has diameter at most `target_h`
    """
    return max(1, math.ceil(math.sqrt(dim) * length / target_h - 1e-9))


def _kuhn_paths(dim):
    # each permutation of the axes walks from the cell origin to the opposite corner
    paths = []
    for perm in itertools.permutations(range(dim)):
        corner = np.zeros(dim, dtype=np.int64)
        path = [corner.copy()]
        for axis in perm:
            corner[axis] += 1
            path.append(corner.copy())
        paths.append(path)
    if dim == 2:
        paths.sort(key=lambda p: tuple(p[1]), reverse=True)
    return np.array(paths)


def structured_simplices(counts, spacing, keep=None):
    """
    Split a grid of cube cells into Kuhn simplices

    @param counts: cells per axis
    @param spacing: cell edge length
    @param keep: optional predicate on cell centres (array (n, d)) selecting cells
    @returns: a `MeshLevel`
    """
    counts = np.asarray(counts, dtype=np.int64)
    dim = len(counts)
    cells = np.stack(np.meshgrid(*[np.arange(n) for n in counts], indexing='ij'), axis=-1).reshape(-1, dim)
    if keep is not None:
        cells = cells[keep((cells + 0.5) * spacing)]

    strides = np.cumprod(np.concatenate(([1], counts[::-1][:-1] + 1)))[::-1]
    corners = cells[:, None, None, :] + _kuhn_paths(dim)[None, :, :, :]
    elements = (corners * strides).sum(axis=-1).reshape(-1, dim + 1)

    used, elements = np.unique(elements, return_inverse=True)
    elements = elements.reshape(-1, dim + 1)
    grid = np.stack(np.unravel_index(used, counts + 1), axis=-1)
    return MeshLevel(grid * spacing, elements)


def build_unit_box_mesh(dim, target_h) -> MeshLevel:
    """
    Triangulate (0, 1)^d with n^d cells, two triangles or six Kuhn tetrahedra each,
    n the smallest count with element diameter at most `target_h`
    """
    _validate(dim, target_h)
    n = cells_per_length(dim, 1.0, target_h)
    return structured_simplices([n] * dim, 1.0 / n)


def build_step_domain_mesh(dim, target_h) -> MeshLevel:
    """
    Triangulate the backward-facing step, aligning cells with the re-entrant corner
    """
    _validate(dim, target_h)
    k = cells_per_length(dim, STEP_CORNER, target_h)
    spacing = STEP_CORNER / k
    counts = [int(round(STEP_LENGTH / spacing)), 2 * k] + ([2 * k] if dim == 3 else [])

    def keep(centres):
        return ~((centres[:, 0] < STEP_CORNER) & (centres[:, 1] < STEP_CORNER))

    return structured_simplices(counts, spacing, keep)

"""
Uniform refinement and mesh hierarchies.

Triangles are split into four by edge midpoints. Tetrahedra are split into eight
following Bey's rule, which keeps the vertex order of Kuhn simplices and therefore
produces finitely many similarity classes under repeated refinement.
"""
import enum
import logging
from collections import namedtuple
from itertools import combinations

import numpy as np
from django.core.exceptions import ValidationError

from mesh.level import MeshLevel

logger = logging.getLogger(__name__)


class FacetParent(enum.IntEnum):
    INTERIOR_OF_COARSE_ELEMENT = 0
    ON_COARSE_FACET = 1


RefinementMaps = namedtuple('RefinementMaps', ['child_elems', 'facet_parent_kind', 'facet_parent_index'])

# local vertex labels: coarse vertices first, then edge midpoints in `combinations` order
_CHILDREN = {
    # midpoints: 3=(0,1) 4=(0,2) 5=(1,2)
    2: np.array([[0, 3, 4], [3, 1, 5], [4, 5, 2], [5, 4, 3]]),
    # midpoints: 4=(0,1) 5=(0,2) 6=(0,3) 7=(1,2) 8=(1,3) 9=(2,3)
    3: np.array([[0, 4, 5, 6], [4, 1, 7, 8], [5, 7, 2, 9], [6, 8, 9, 3],
                 [4, 5, 6, 8], [4, 5, 7, 8], [5, 6, 8, 9], [5, 7, 8, 9]]),
}


def _support_masks(dim):
    # bitmask of coarse local vertices whose convex hull contains each local label
    masks = [1 << i for i in range(dim + 1)]
    masks += [(1 << a) | (1 << b) for a, b in combinations(range(dim + 1), 2)]
    return np.array(masks)


def refine_uniform(coarse):
    """
    Refine every element of a mesh once

    @param coarse: mesh to refine
    @type coarse: `MeshLevel`
    @returns: the fine `MeshLevel` and its `RefinementMaps`
    """
    d = coarse.dim
    pairs = np.array(list(combinations(range(d + 1), 2)))
    edges = np.sort(coarse.elements[:, pairs], axis=2)
    unique_edges, edge_ids = np.unique(edges.reshape(-1, 2), axis=0, return_inverse=True)
    edge_ids = edge_ids.reshape(coarse.n_elements, len(pairs))

    midpoints = coarse.vertices[unique_edges].mean(axis=1)
    vertices = np.vstack([coarse.vertices, midpoints])
    labels = np.hstack([coarse.elements, coarse.n_vertices + edge_ids])

    template = _CHILDREN[d]
    n_children = len(template)
    fine_elements = labels[:, template].reshape(-1, d + 1)
    fine = MeshLevel(vertices, fine_elements)

    child_elems = np.arange(coarse.n_elements * n_children).reshape(coarse.n_elements, n_children)

    masks = _support_masks(d)
    full = (1 << (d + 1)) - 1
    kind = np.empty(fine.n_facets, dtype=np.int64)
    parent = np.empty(fine.n_facets, dtype=np.int64)
    for c, child in enumerate(template):
        for i in range(d + 1):
            facet_mask = np.bitwise_or.reduce(masks[np.delete(child, i)])
            fine_facets = fine.elem_facets[child_elems[:, c], i]
            if facet_mask == full:
                kind[fine_facets] = FacetParent.INTERIOR_OF_COARSE_ELEMENT
                parent[fine_facets] = np.arange(coarse.n_elements)
            else:
                missing = int(np.log2(full ^ facet_mask))
                kind[fine_facets] = FacetParent.ON_COARSE_FACET
                parent[fine_facets] = coarse.elem_facets[:, missing]

    logger.debug('refined %d elements into %d', coarse.n_elements, fine.n_elements)
    return fine, RefinementMaps(child_elems, kind, parent)


class MeshHierarchy(object):
    """
    A sequence of uniformly refined meshes, level 0 being the coarsest
    """

    def __init__(self, coarse, n_levels):
        if n_levels < 1:
            raise ValidationError('A hierarchy needs at least one level')
        self.levels = [coarse]
        self.maps = []
        for _ in range(n_levels - 1):
            fine, maps = refine_uniform(self.levels[-1])
            self.levels.append(fine)
            self.maps.append(maps)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, level) -> MeshLevel:
        return self.levels[level]

    @property
    def finest(self) -> MeshLevel:
        return self.levels[-1]

    def child_elems(self, level):
        """Children on `level` of the elements of `level - 1`"""
        return self.maps[level - 1].child_elems

    def facet_parent(self, level):
        maps = self.maps[level - 1]
        return maps.facet_parent_kind, maps.facet_parent_index

    def ancestors(self, level, coarse_level=0):
        """Index of the ancestor on `coarse_level` of every element on `level`"""
        owner = np.arange(self.levels[level].n_elements)
        for lvl in range(level, coarse_level, -1):
            children = self.maps[lvl - 1].child_elems
            parent_of = np.repeat(np.arange(len(children)), children.shape[1])
            fine_order = np.empty_like(parent_of)
            fine_order[children.ravel()] = parent_of
            owner = fine_order[owner]
        return owner

    def restrict_elementwise(self, values, level):
        """
        L2 projection of a piecewise constant on `level` onto the piecewise
        constants of `level - 1`
        """
        children = self.maps[level - 1].child_elems
        weights = self.levels[level].elem_measure[children]
        return (np.asarray(values)[children] * weights).sum(axis=1) / weights.sum(axis=1)

    def truncated(self, n_levels):
        """The hierarchy of the `n_levels` coarsest levels, sharing meshes and maps"""
        if not 1 <= n_levels <= len(self.levels):
            raise ValidationError(f'Hierarchy has {len(self.levels)} levels, {n_levels} requested')
        truncated = MeshHierarchy.__new__(MeshHierarchy)
        truncated.levels = self.levels[:n_levels]
        truncated.maps = self.maps[:n_levels - 1]
        return truncated

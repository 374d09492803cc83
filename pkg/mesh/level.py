"""
Simplicial mesh levels with facet connectivity.

Local facet ``i`` of an element is the facet opposite its local vertex ``i``.
Global facets are numbered in lexicographic order of their sorted vertex tuples,
so numbering depends only on the element list.
"""
import logging
from math import factorial

import numpy as np
from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)


def simplex_measure(points):
    """
    Measure of a k-simplex embedded in R^d, from its Gram determinant

    @param points: vertex coordinates, shape (..., k + 1, d)
    @type points: `numpy.ndarray`
    @rtype: `numpy.ndarray`
    """
    points = np.asarray(points, dtype=float)
    edges = points[..., 1:, :] - points[..., :1, :]
    k = edges.shape[-2]
    if k == 0:
        return np.ones(points.shape[:-2])
    gram = edges @ np.swapaxes(edges, -1, -2)
    return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / factorial(k)


class MeshLevel(object):
    """
    A conforming simplicial mesh of a polygonal/polyhedral domain

    @param vertices: coordinates, shape (n_vertices, d)
    @param elements: vertex indices, shape (n_elements, d + 1)
    """

    def __init__(self, vertices, elements):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.elements = np.ascontiguousarray(elements, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] not in (2, 3):
            raise ValidationError('Only two and three dimensional meshes are supported')
        self.dim = self.vertices.shape[1]
        if self.elements.ndim != 2 or self.elements.shape[1] != self.dim + 1:
            raise ValidationError(f'Elements must have {self.dim + 1} vertices')
        if self.elements.size and (self.elements.min() < 0 or self.elements.max() >= len(self.vertices)):
            raise ValidationError('Element references a vertex that does not exist')
        self._build_facets()
        self._build_geometry()
        logger.debug('mesh level: %d elements, %d facets (%d on the boundary)',
                     self.n_elements, self.n_facets, int(self.boundary_mask.sum()))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    def _build_facets(self) -> None:
        d, n_el = self.dim, self.n_elements
        local = np.array([[j for j in range(d + 1) if j != i] for i in range(d + 1)])
        keys = np.sort(self.elements[:, local], axis=2).reshape(-1, d)
        self.facets, inverse = np.unique(keys, axis=0, return_inverse=True)
        self.elem_facets = inverse.reshape(n_el, d + 1)

        counts = np.bincount(self.elem_facets.ravel(), minlength=self.n_facets)
        if counts.max(initial=0) > 2:
            raise ValidationError('Mesh is not conforming: a facet is shared by more than two elements')
        self.boundary_mask = counts == 1

        # first owner in element order gets +1, the other one -1
        owners = np.repeat(np.arange(n_el), d + 1)
        flat = self.elem_facets.ravel()
        order = np.lexsort((owners, flat))
        first = np.ones(len(flat), dtype=bool)
        first[1:] = flat[order][1:] != flat[order][:-1]
        sign = np.where(first, 1, -1)
        self.elem_facet_sign = np.empty(len(flat), dtype=np.int64)
        self.elem_facet_sign[order] = sign
        self.elem_facet_sign = self.elem_facet_sign.reshape(n_el, d + 1)

        self.facet_elements = -np.ones((self.n_facets, 2), dtype=np.int64)
        self.facet_local_index = -np.ones((self.n_facets, 2), dtype=np.int64)
        slot = np.where(self.elem_facet_sign.ravel() > 0, 0, 1)
        self.facet_elements[flat, slot] = owners
        self.facet_local_index[flat, slot] = np.tile(np.arange(d + 1), n_el)

    def _build_geometry(self) -> None:
        d = self.dim
        coords = self.vertices[self.elements]
        jac = np.swapaxes(coords[:, 1:, :] - coords[:, :1, :], 1, 2)
        det = np.linalg.det(jac)
        if np.any(np.abs(det) <= 1e-14 * np.abs(jac).max(initial=1.0) ** d):
            raise ValidationError('Mesh contains degenerate elements')
        self.elem_measure = np.abs(det) / factorial(d)
        self.elem_barycenter = coords.mean(axis=1)

        inv = np.linalg.inv(jac)
        grads = np.empty((self.n_elements, d + 1, d))
        grads[:, 1:, :] = inv
        grads[:, 0, :] = -inv.sum(axis=1)
        self.lambda_gradients = grads

        facet_coords = self.vertices[self.facets]
        self.facet_measure = simplex_measure(facet_coords)
        self.facet_barycenter = facet_coords.mean(axis=1)

        norms = np.linalg.norm(grads, axis=2)
        self.facet_normal = -grads / norms[:, :, None]
        self.h_k_facet = self.elem_measure[:, None] / self.facet_measure[self.elem_facets]

    @property
    def local_facet_measure(self):
        return self.facet_measure[self.elem_facets]

    @property
    def local_facet_barycenter(self):
        return self.facet_barycenter[self.elem_facets]

    @property
    def cr_gradients(self):
        """
        Gradients of the local Crouzeix-Raviart basis, |F_i| n_i / |K|,
        shape (n_elements, d + 1, d)
        """
        return -self.dim * self.lambda_gradients

    def barycentric(self, element, points):
        """
        Barycentric coordinates of points with respect to given elements

        @param element: element index per point, shape (n,)
        @param points: coordinates, shape (n, d)
        @returns: shape (n, d + 1)
        """
        element = np.asarray(element)
        origin = self.vertices[self.elements[element, 0]]
        grads = self.lambda_gradients[element]
        lam = np.einsum('nkd,nd->nk', grads, np.asarray(points) - origin)
        lam[:, 0] += 1.0
        return lam

    @property
    def diameter(self) -> float:
        coords = self.vertices[self.elements]
        diffs = coords[:, :, None, :] - coords[:, None, :, :]
        return float(np.linalg.norm(diffs, axis=3).max())

    @property
    def interior_facets(self):
        return np.flatnonzero(~self.boundary_mask)

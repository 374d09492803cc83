"""
Helper functions for quadrature on simplices. Currently we support the following 5 rules:

1. **`qk0`** - element barycentre rule
2. **`qk1`** - facet barycentre points of the element, weight |K| / (d + 1) each
3. **`qf0`** - facet barycentre rule
4. **`qdk0`** - sum of facet barycentre rules over the element boundary
5. **`error_quadrature`** - collapsed Gauss-Legendre rule for error norms

Integrands are vectorised: they take an array of points of shape (n, d) and
return an array whose leading axis has length n.
"""
from functools import lru_cache

import numpy as np

from mesh.level import simplex_measure

POINTS_PER_DIRECTION = 4


def qk0(vertices, g):
    vertices = np.asarray(vertices, dtype=float)
    centre = vertices.mean(axis=0)[None, :]
    return simplex_measure(vertices) * np.asarray(g(centre))[0]


def qk1(vertices, g):
    """Exact for P2 in 2D and for P1 in 3D"""
    vertices = np.asarray(vertices, dtype=float)
    # barycentre of the facet opposite vertex i
    points = (vertices.sum(axis=0) - vertices) / (len(vertices) - 1)
    values = np.asarray(g(points))
    return simplex_measure(vertices) * values.sum(axis=0) / len(vertices)


def qf0(facet_vertices, g):
    return qk0(facet_vertices, g)


def qdk0(vertices, g):
    vertices = np.asarray(vertices, dtype=float)
    total = 0.0
    for i in range(len(vertices)):
        total = total + qf0(np.delete(vertices, i, axis=0), g)
    return total


@lru_cache(maxsize=None)
def reference_error_rule(dim):
    """
    Collapsed Gauss-Legendre rule on the reference simplex

    @returns: barycentric coordinates of the points, shape (n, dim + 1), and
        weights summing to one
    """
    x, w = np.polynomial.legendre.leggauss(POINTS_PER_DIRECTION)
    x, w = (x + 1.0) / 2.0, w / 2.0
    grids = np.meshgrid(*([x] * dim), indexing='ij')
    wgrids = np.meshgrid(*([w] * dim), indexing='ij')
    t = [g.ravel() for g in grids]
    weight = np.prod([g.ravel() for g in wgrids], axis=0)

    # Duffy map from the unit cube onto the simplex
    coords = []
    scale = np.ones_like(t[0])
    for k in range(dim):
        coords.append(t[k] * scale)
        weight = weight * scale
        scale = scale * (1.0 - t[k])
    # weight currently integrates over the reference simplex of measure 1/dim!
    points = np.stack(coords, axis=1)
    weight = weight / weight.sum()
    lam = np.hstack([1.0 - points.sum(axis=1, keepdims=True), points])
    lam.setflags(write=False)
    weight.setflags(write=False)
    return lam, weight


def error_quadrature(vertices, g):
    """
    Integrate `g` over one simplex, exact for polynomials of degree five
    """
    vertices = np.asarray(vertices, dtype=float)
    lam, weight = reference_error_rule(vertices.shape[1])
    points = lam @ vertices
    values = np.asarray(g(points))
    return simplex_measure(vertices) * np.tensordot(weight, values, axes=(0, 0))


def mesh_error_rule(mesh):
    """
    The error rule mapped onto every element of a mesh

    @returns: points (n_elements, n_points, d), weights (n_elements, n_points)
        and the barycentric coordinates of the reference points
    """
    lam, weight = reference_error_rule(mesh.dim)
    points = np.einsum('qi,kid->kqd', lam, mesh.vertices[mesh.elements])
    return points, mesh.elem_measure[:, None] * weight[None, :], lam


def integrate_over_mesh(mesh, g):
    """Integral of a vectorised integrand over the whole mesh"""
    points, weights, _ = mesh_error_rule(mesh)
    values = np.asarray(g(points.reshape(-1, mesh.dim))).reshape(weights.shape + (-1,))
    return np.einsum('kq,kq...->...', weights, values).squeeze()

"""
Crouzeix-Raviart P1 functions evaluated from facet values.

On an element the basis function attached to facet ``i`` is
``phi_i = 1 - d * lambda_i`` with gradient ``|F_i| n_i / |K|``.
"""
import numpy as np

from mesh.level import MeshLevel


def _element(vertices):
    return MeshLevel(np.asarray(vertices, dtype=float), [list(range(len(vertices)))])


def cr_gradient(vertices, values):
    """
    Gradient of the CR function with the given facet values on one element

    @param vertices: shape (d + 1, d)
    @param values: shape (d + 1,) or (d + 1, m) for vector functions
    @returns: shape (d,) or (m, d)
    """
    grads = _element(vertices).cr_gradients[0]
    return np.einsum('i...,id->...d', np.asarray(values, dtype=float), grads)


def cr_divergence(vertices, values) -> float:
    """Divergence of a vector CR function from facet values of shape (d + 1, d)"""
    return float(np.trace(cr_gradient(vertices, values)))


def cr_basis_values(mesh, elements, points):
    """
    Values of the local CR basis of `elements` at `points`, shape (n, d + 1)
    """
    return 1.0 - mesh.dim * mesh.barycentric(elements, points)


def mesh_cr_gradients(mesh, local_values):
    """
    Elementwise gradients of a CR function

    @param local_values: shape (n_elements, d + 1) or (n_elements, d + 1, m)
    @returns: shape (n_elements, d) or (n_elements, m, d)
    """
    return np.einsum('ki...,kid->k...d', local_values, mesh.cr_gradients)


def mesh_cr_divergence(mesh, local_values):
    return np.einsum('kic,kic->k', local_values, mesh.cr_gradients)

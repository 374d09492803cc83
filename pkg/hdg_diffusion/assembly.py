"""
Condensed HDG-P0 systems for reaction-diffusion.

After eliminating the flux and the element unknowns, the trace system is the
Crouzeix-Raviart stiffness matrix with elementwise coefficient alpha_h plus a
facet-lumped reaction term weighted by gamma = alpha_h / (alpha_h + h^2 beta / (d + 1)).
"""
import logging

import numpy as np

from hdg_diffusion.coefficients import DiffusionLevelData

logger = logging.getLogger(__name__)


class CondensedDiffusionSystem(object):
    def __init__(self, matrix, rhs, space, data, dirichlet_values):
        self.matrix = matrix
        self.rhs = rhs
        self.space = space
        self.data = data
        self.dirichlet_values = dirichlet_values

    @property
    def mesh(self):
        return self.space.mesh

    @property
    def weights(self):
        return self.space.weights


def local_condensed_matrices(mesh, data):
    """
    Element matrices alpha_h |K| G G' + diag(|K| gamma beta / (d + 1))
    """
    grads = mesh.cr_gradients
    stiffness = (data.alpha_h * mesh.elem_measure)[:, None, None] * np.einsum('kid,kjd->kij', grads, grads)
    reaction = data.lumped_measure * data.gamma * data.beta
    return stiffness + reaction[:, :, None] * np.eye(mesh.dim + 1)[None]


def assemble_condensed_diffusion(space, coefficients, alpha_inv=None, dirichlet=None):
    """
    Assemble the condensed trace system of one level

    @param space: scalar `FacetSpace`
    @param coefficients: `DiffusionCoefficients`
    @param alpha_inv: optional elementwise 1/alpha
    @param dirichlet: boundary values, callable of points; homogeneous if None
    @rtype: `CondensedDiffusionSystem`
    """
    mesh = space.mesh
    data = DiffusionLevelData(mesh, coefficients, alpha_inv)
    local = local_condensed_matrices(mesh, data)
    loads = data.lumped_measure * data.gamma * data.f
    dirichlet_values = space.dirichlet_values(dirichlet) if dirichlet is not None else None
    matrix, rhs = space.scatter(local, loads, dirichlet_values)
    logger.debug('condensed diffusion system with %d unknowns and %d nonzeros', matrix.shape[0], matrix.nnz)
    return CondensedDiffusionSystem(matrix, rhs, space, data, dirichlet_values)

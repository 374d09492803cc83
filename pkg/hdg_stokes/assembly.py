"""
Condensed HDG-P0 Stokes systems.

The trace system reads A u - B'W p = f, W B u = -W b_D with W = diag(|K|) and
(B u)_K the divergence of the vector Crouzeix-Raviart function of the traces;
b_D is the divergence contributed by Dirichlet data. The augmented operator
A + B'W B / eps is what the multigrid solvers see.
"""
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from helpers.conf import solver_setting
from hdg_stokes.coefficients import StokesLevelData
from linalg.sparse import assemble_from_triplets

logger = logging.getLogger(__name__)


class CondensedStokesSystem(object):
    def __init__(self, A, B, rhs, div_lift, vspace, pspace, data, dirichlet_values, epsilon):
        self.A = A
        self.B = B
        self.rhs = rhs
        self.div_lift = div_lift
        self.vspace = vspace
        self.pspace = pspace
        self.data = data
        self.dirichlet_values = dirichlet_values
        self.epsilon = epsilon
        self.Aeps = self.augmented(epsilon)

    @property
    def mesh(self):
        return self.vspace.mesh

    @property
    def W(self):
        return sp.diags(self.pspace.weights)

    @property
    def weights(self):
        return self.vspace.weights

    def augmented(self, epsilon):
        return (self.A + (self.B.T @ self.W @ self.B) / epsilon).tocsr()

    def solve_saddle_point(self):
        """
        Direct solve of the condensed saddle point system; the pressure mean is
        fixed by a Lagrange multiplier when the whole boundary is Dirichlet

        @returns: free traces and pressure
        """
        n_u, n_p = self.A.shape[0], self.pspace.n
        WB = (self.W @ self.B).tocsr()
        blocks = [[self.A, -WB.T], [-WB, None]]
        rhs = [self.rhs, self.pspace.weights * self.div_lift]
        if self.pspace.mean_zero:
            weights = sp.csr_matrix(self.pspace.weights[None, :])
            blocks = [[self.A, -WB.T, None], [-WB, None, weights.T], [None, weights, None]]
            rhs.append([0.0])
        matrix = sp.bmat(blocks, format='csc')
        x = splu(matrix).solve(np.concatenate(rhs))
        return x[:n_u], x[n_u:n_u + n_p]


def local_stokes_matrices(mesh, data):
    """
    Vector CR stiffness mu |K| (G G' kron I) plus lumped reaction, local index i * d + c
    """
    d = mesh.dim
    grads = mesh.cr_gradients
    scalar = data.mu * mesh.elem_measure[:, None, None] * np.einsum('kid,kjd->kij', grads, grads)
    local = np.einsum('kij,ab->kiajb', scalar, np.eye(d)).reshape(mesh.n_elements, d * (d + 1), d * (d + 1))
    reaction = np.repeat(data.lumped_measure * data.gamma * data.beta, d, axis=1)
    return local + reaction[:, :, None] * np.eye(d * (d + 1))[None]


def assemble_divergence(vspace, dirichlet_values=None):
    """
    Divergence rows (B u)_K = sum_i G_i . u_i over free traces, and the
    divergence of the Dirichlet data per element

    @returns: csr matrix (n_elements, n_free) and b_D (n_elements,)
    """
    mesh = vspace.mesh
    n_el = mesh.n_elements
    values = mesh.cr_gradients.reshape(n_el, -1)
    dofs = vspace.local_dofs.reshape(n_el, -1)
    rows = np.broadcast_to(np.arange(n_el)[:, None], dofs.shape)
    free = dofs >= 0
    B = assemble_from_triplets((n_el, vspace.n_free), rows[free], dofs[free], values[free])
    div_lift = np.zeros(n_el)
    if dirichlet_values is not None:
        lifted = vspace.localize(np.zeros(vspace.n_free), dirichlet_values).reshape(n_el, -1)
        div_lift = np.where(free, 0.0, values * lifted).sum(axis=1)
    return B, div_lift


def assemble_condensed_stokes(vspace, pspace, coefficients, epsilon=None, dirichlet=None):
    """
    Assemble the condensed trace system of one level

    @param vspace: vector `FacetSpace`
    @param pspace: `PressureSpace`
    @param coefficients: `StokesCoefficients`
    @param epsilon: augmentation parameter, SOLVER_DEFAULTS['EPSILON'] if None
    @param dirichlet: boundary velocity, callable of points; homogeneous if None
    @rtype: `CondensedStokesSystem`
    """
    epsilon = solver_setting('EPSILON', epsilon)
    mesh = vspace.mesh
    data = StokesLevelData(mesh, coefficients)
    local = local_stokes_matrices(mesh, data)
    loads = ((data.lumped_measure * data.gamma)[:, :, None] * data.f).reshape(mesh.n_elements, -1)
    dirichlet_values = vspace.dirichlet_values(dirichlet) if dirichlet is not None else None
    A, rhs = vspace.scatter(local, loads, dirichlet_values)
    B, div_lift = assemble_divergence(vspace, dirichlet_values)
    logger.debug('condensed Stokes system with %d velocity and %d pressure unknowns', A.shape[0], B.shape[0])
    return CondensedStokesSystem(A, B, rhs, div_lift, vspace, pspace, data, dirichlet_values, epsilon)

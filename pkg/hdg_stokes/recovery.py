import numpy as np

from quadrature.rules import mesh_error_rule
from spaces.cr import mesh_cr_gradients


class StokesSolution(object):
    """
    @param L: elementwise velocity gradient flux, shape (n_elements, d, d)
    @param u: velocity at the facet barycentres, shape (n_elements, d + 1, d)
    @param p: elementwise pressure
    """

    def __init__(self, mesh, L, u, p, uhat):
        self.mesh = mesh
        self.L = L
        self.u = u
        self.p = p
        self.uhat = uhat

    @property
    def divergence(self):
        """Elementwise divergence of the P1 velocity"""
        return np.einsum('kic,kic->k', self.u, self.mesh.cr_gradients)


def recover_local_stokes(system, uhat, p):
    """
    L_h = -mu grad(CR uhat), u_h(m_i) = gamma_i (uhat_i + h_i^2 f_i / ((d + 1) mu))

    @rtype: `StokesSolution`
    """
    mesh, data = system.mesh, system.data
    local = system.vspace.localize(uhat, system.dirichlet_values)
    L = -data.mu * mesh_cr_gradients(mesh, local)
    u = data.gamma[:, :, None] * (local + (data.h ** 2)[:, :, None] * data.f / ((mesh.dim + 1) * data.mu))
    return StokesSolution(mesh, L, u, np.asarray(p, dtype=float), local)


def stokes_error_norms(solution, u_exact, L_exact):
    """
    @returns: (|u - u_h|, |div u_h|, |L - L_h|)
    """
    mesh = solution.mesh
    d = mesh.dim
    points, weights, lam = mesh_error_rule(mesh)
    flat = points.reshape(-1, d)
    basis = 1.0 - d * lam
    u_h = np.einsum('kic,qi->kqc', solution.u, basis)
    u_err = np.asarray(u_exact(flat)).reshape(u_h.shape) - u_h
    L_err = np.asarray(L_exact(flat)).reshape(weights.shape + (d, d)) - solution.L[:, None, :, :]
    div = np.sqrt((mesh.elem_measure * solution.divergence ** 2).sum())
    return (float(np.sqrt((weights[:, :, None] * u_err ** 2).sum())),
            float(div),
            float(np.sqrt((weights[:, :, None, None] * L_err ** 2).sum())))


def pressure_error_norm(solution, p_exact) -> float:
    points, weights, _ = mesh_error_rule(solution.mesh)
    values = np.asarray(p_exact(points.reshape(-1, solution.mesh.dim))).reshape(weights.shape)
    return float(np.sqrt((weights * (values - solution.p[:, None]) ** 2).sum()))

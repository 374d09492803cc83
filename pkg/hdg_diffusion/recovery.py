import numpy as np

from quadrature.rules import mesh_error_rule
from spaces.cr import mesh_cr_gradients


class DiffusionSolution(object):
    """
    Local unknowns recovered from the traces

    @param sigma: elementwise constant flux, shape (n_elements, d)
    @param u: values at the facet barycentres, shape (n_elements, d + 1)
    @param uhat: trace values seen from each element, shape (n_elements, d + 1)
    """

    def __init__(self, mesh, sigma, u, uhat):
        self.mesh = mesh
        self.sigma = sigma
        self.u = u
        self.uhat = uhat


def recover_local_diffusion(system, uhat):
    """
    Closed-form recovery sigma_h = -alpha_h grad(CR uhat) and
    u_h(m_i) = gamma_i (uhat_i + h_i^2 f_i / ((d + 1) alpha_h))

    @param system: the `CondensedDiffusionSystem` the traces solve
    @param uhat: free trace values
    @rtype: `DiffusionSolution`
    """
    mesh, data = system.mesh, system.data
    local = system.space.localize(uhat, system.dirichlet_values)[:, :, 0]
    sigma = -data.alpha_h[:, None] * mesh_cr_gradients(mesh, local)
    u = data.gamma * (local + data.h ** 2 * data.f / ((mesh.dim + 1) * data.alpha_h[:, None]))
    return DiffusionSolution(mesh, sigma, u, local)


def diffusion_error_norms(solution, u_exact, sigma_exact):
    """
    L2 errors of the recovered unknowns; u_h is the P1 function through its
    facet-barycentre values

    @returns: (|u - u_h|, |sigma - sigma_h|)
    """
    mesh = solution.mesh
    points, weights, lam = mesh_error_rule(mesh)
    flat = points.reshape(-1, mesh.dim)
    basis = 1.0 - mesh.dim * lam
    u_h = solution.u @ basis.T
    u_err = np.asarray(u_exact(flat)).reshape(weights.shape) - u_h
    sigma_err = np.asarray(sigma_exact(flat)).reshape(weights.shape + (mesh.dim,)) - solution.sigma[:, None, :]
    return (float(np.sqrt((weights * u_err ** 2).sum())),
            float(np.sqrt((weights[:, :, None] * sigma_err ** 2).sum())))


def numerical_flux(system, solution):
    """
    Normal numerical flux sigma_h.n + tau_K (u_h - uhat) on every (element, local facet);
    u_h is taken at the facet barycentre, which is its facet mean
    """
    normal = np.einsum('kd,kid->ki', solution.sigma, solution.mesh.facet_normal)
    return normal + system.data.tau * (solution.u - solution.uhat)

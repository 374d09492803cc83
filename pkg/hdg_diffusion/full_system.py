"""
The uncondensed HDG-P0 saddle system over (sigma_h, u_h, uhat_h).

Only used to cross-check the condensed trace system and the local recovery.
Unknowns are ordered flux first (element-major, d per element), then element
values at the facet barycentres (d + 1 per element), then free traces.
"""
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from hdg_diffusion.coefficients import DiffusionLevelData
from linalg.sparse import assemble_from_triplets


class FullDiffusionSystem(object):
    def __init__(self, matrix, rhs, space, data):
        self.matrix = matrix
        self.rhs = rhs
        self.space = space
        self.data = data
        mesh = space.mesh
        self.n_sigma = mesh.n_elements * mesh.dim
        self.n_local = self.n_sigma + mesh.n_elements * (mesh.dim + 1)

    def schur_complement(self):
        """
        Eliminate the element unknowns

        @returns: trace matrix (csr) and right-hand side
        """
        matrix = self.matrix.tocsc()
        n = self.n_local
        local = splu(matrix[:n, :n].tocsc())
        coupling = matrix[:n, n:].toarray()
        eliminated = local.solve(coupling)
        schur = matrix[n:, n:].toarray() - matrix[n:, :n] @ eliminated
        rhs = self.rhs[n:] - matrix[n:, :n] @ local.solve(self.rhs[:n])
        return sp.csr_matrix(schur), rhs

    def solve(self):
        """
        @returns: sigma (n_elements, d), u (n_elements, d + 1), free traces
        """
        mesh = self.space.mesh
        x = splu(self.matrix.tocsc()).solve(self.rhs)
        sigma = x[:self.n_sigma].reshape(mesh.n_elements, mesh.dim)
        u = x[self.n_sigma:self.n_local].reshape(mesh.n_elements, mesh.dim + 1)
        return sigma, u, x[self.n_local:]


def assemble_full_hdg_diffusion(space, coefficients, alpha_inv=None):
    """
    Assemble the block system [[M, 0, B], [0, D, -C], [-B', -C', E]] with
    homogeneous Dirichlet data

    @rtype: `FullDiffusionSystem`
    """
    mesh = space.mesh
    d, n_el = mesh.dim, mesh.n_elements
    data = DiffusionLevelData(mesh, coefficients, alpha_inv)
    n_sigma = n_el * d
    n_u = n_el * (d + 1)
    n = n_sigma + n_u + space.n_free

    sigma_dofs = np.arange(n_sigma).reshape(n_el, d)
    u_dofs = n_sigma + np.arange(n_u).reshape(n_el, d + 1)
    trace = space.local_dofs[:, :, 0]
    hat_dofs = np.where(trace >= 0, n_sigma + n_u + trace, -1)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        r, c, v = np.broadcast_arrays(r, c, v)
        keep = (r >= 0) & (c >= 0)
        rows.append(r[keep])
        cols.append(c[keep])
        vals.append(v[keep])

    measure = mesh.elem_measure
    add(sigma_dofs, sigma_dofs, (measure / data.alpha_h)[:, None])

    # B_i = |F_i| n_i
    flux = mesh.local_facet_measure[:, :, None] * mesh.facet_normal
    add(sigma_dofs[:, None, :], hat_dofs[:, :, None], flux)
    add(hat_dofs[:, :, None], sigma_dofs[:, None, :], -flux)

    stab = data.tau * mesh.local_facet_measure
    add(u_dofs, u_dofs, stab + data.lumped_measure * data.beta)
    add(u_dofs, hat_dofs, -stab)
    add(hat_dofs, u_dofs, -stab)
    add(hat_dofs, hat_dofs, stab)

    matrix = assemble_from_triplets((n, n), np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    rhs = np.zeros(n)
    rhs[u_dofs.ravel()] = (data.lumped_measure * data.f).ravel()
    return FullDiffusionSystem(matrix, rhs, space, data)


def diffusion_energy_balance(space, data, sigma, u, uhat_local):
    """
    Both sides of the discrete energy identity

    @returns: (flux, stabilisation and reaction energy, work of the source)
    """
    mesh = space.mesh
    energy = (mesh.elem_measure / data.alpha_h * (sigma ** 2).sum(axis=1)).sum()
    energy += (data.tau * mesh.local_facet_measure * (u - uhat_local) ** 2).sum()
    energy += (data.lumped_measure * data.beta * u ** 2).sum()
    work = (data.lumped_measure * data.f * u).sum()
    return float(energy), float(work)

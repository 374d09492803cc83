"""
The uncondensed HDG-P0 Stokes system over (L_h, u_h, uhat_h, p_h), kept as a
cross-check of the condensed system. Homogeneous Dirichlet data only.
"""
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from hdg_stokes.coefficients import StokesLevelData
from linalg.sparse import assemble_from_triplets


class FullStokesSystem(object):
    def __init__(self, matrix, rhs, vspace, pspace, data):
        self.matrix = matrix
        self.rhs = rhs
        self.vspace = vspace
        self.pspace = pspace
        self.data = data
        mesh = vspace.mesh
        d = mesh.dim
        self.n_flux = mesh.n_elements * d * d
        self.n_local = self.n_flux + mesh.n_elements * (d + 1) * d

    def schur_complement(self):
        """
        Eliminate L_h and u_h

        @returns: dense matrix over (traces, pressures) and right-hand side
        """
        matrix = self.matrix.tocsc()
        n = self.n_local
        local = splu(matrix[:n, :n].tocsc())
        eliminated = local.solve(matrix[:n, n:].toarray())
        schur = matrix[n:, n:].toarray() - matrix[n:, :n] @ eliminated
        rhs = self.rhs[n:] - matrix[n:, :n] @ local.solve(self.rhs[:n])
        return schur, rhs

    def solve(self):
        """
        Solve with the pressure mean fixed by a Lagrange multiplier

        @returns: L (n_elements, d, d), u (n_elements, d + 1, d), free traces, pressure
        """
        mesh = self.vspace.mesh
        d, n_el = mesh.dim, mesh.n_elements
        matrix, rhs = self.matrix, self.rhs
        if self.pspace.mean_zero:
            border = np.zeros(matrix.shape[0])
            border[-n_el:] = self.pspace.weights
            column = sp.csr_matrix(border[:, None])
            matrix = sp.bmat([[matrix, column], [column.T, None]])
            rhs = np.append(rhs, 0.0)
        x = splu(matrix.tocsc()).solve(rhs)
        n_hat = self.vspace.n_free
        L = x[:self.n_flux].reshape(n_el, d, d)
        u = x[self.n_flux:self.n_local].reshape(n_el, d + 1, d)
        uhat = x[self.n_local:self.n_local + n_hat]
        p = x[self.n_local + n_hat:self.n_local + n_hat + n_el]
        return L, u, uhat, p


def assemble_full_hdg_stokes(vspace, pspace, coefficients):
    """
    Assemble the four-field block system; rows are the constitutive law, the
    local momentum balance, flux continuity and incompressibility

    @rtype: `FullStokesSystem`
    """
    mesh = vspace.mesh
    d, n_el = mesh.dim, mesh.n_elements
    data = StokesLevelData(mesh, coefficients)
    n_flux = n_el * d * d
    n_u = n_el * (d + 1) * d
    n_hat = vspace.n_free
    n = n_flux + n_u + n_hat + n_el

    flux_dofs = np.arange(n_flux).reshape(n_el, d, d)
    u_dofs = n_flux + np.arange(n_u).reshape(n_el, d + 1, d)
    hat_dofs = np.where(vspace.local_dofs >= 0, n_flux + n_u + vspace.local_dofs, -1)
    p_dofs = n_flux + n_u + n_hat + np.arange(n_el)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        r, c, v = np.broadcast_arrays(r, c, v)
        keep = (r >= 0) & (c >= 0)
        rows.append(r[keep])
        cols.append(c[keep])
        vals.append(v[keep])

    add(flux_dofs, flux_dofs, (mesh.elem_measure / data.mu)[:, None, None])

    # L_ab couples to uhat_{i,a} through |F_i| n_{i,b}
    weighted_normal = mesh.local_facet_measure[:, :, None] * mesh.facet_normal
    eye = np.eye(d)
    coupling = np.einsum('kib,ac->kiabc', weighted_normal, eye)
    r = flux_dofs[:, None, :, :, None]
    c = hat_dofs[:, :, None, None, :]
    add(r, c, coupling)
    add(c, r, -coupling)

    stab = (data.tau * mesh.local_facet_measure)[:, :, None]
    add(u_dofs, u_dofs, stab + (data.lumped_measure * data.beta)[:, :, None])
    add(u_dofs, hat_dofs, -stab)
    add(hat_dofs, u_dofs, -stab)
    add(hat_dofs, hat_dofs, stab)

    add(hat_dofs, p_dofs[:, None, None], -weighted_normal)
    add(p_dofs[:, None, None], hat_dofs, -weighted_normal)

    matrix = assemble_from_triplets((n, n), np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    rhs = np.zeros(n)
    rhs[u_dofs.ravel()] = (data.lumped_measure[:, :, None] * data.f).ravel()
    return FullStokesSystem(matrix, rhs, vspace, pspace, data)


def stokes_energy_balance(vspace, data, L, u, uhat_local):
    mesh = vspace.mesh
    energy = (mesh.elem_measure / data.mu * (L ** 2).sum(axis=(1, 2))).sum()
    energy += (data.tau[:, :, None] * mesh.local_facet_measure[:, :, None] * (u - uhat_local) ** 2).sum()
    energy += (data.lumped_measure[:, :, None] * data.beta * u ** 2).sum()
    work = (data.lumped_measure[:, :, None] * data.f * u).sum()
    return float(energy), float(work)

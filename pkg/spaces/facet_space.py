"""
Degree-of-freedom numbering for facet traces and element pressures.

A trace vector holds one value per free facet and component, ordered as
``free_facet_index * components + component``. Facet values double as
Crouzeix-Raviart nodal values, so the same vector is read as a CR function
whenever convenient.
"""
import numpy as np
from django.core.exceptions import ValidationError

from linalg.sparse import assemble_from_triplets


def all_boundary(points):
    return np.ones(len(points), dtype=bool)


class FacetSpace(object):
    """
    Piecewise constant functions on the mesh skeleton with Dirichlet facets removed

    @param mesh: the mesh level
    @type mesh: `MeshLevel`
    @param components: 1 for scalar traces, d for vector traces
    @param dirichlet: predicate on boundary facet barycentres (n, d) -> bool (n,)
        selecting Dirichlet facets; every boundary facet by default
    """

    def __init__(self, mesh, components=1, dirichlet=None):
        if components not in (1, mesh.dim):
            raise ValidationError(f'components must be 1 or {mesh.dim}')
        self.mesh = mesh
        self.components = components
        self.dirichlet = dirichlet or all_boundary

        boundary = np.flatnonzero(mesh.boundary_mask)
        chosen = np.asarray(self.dirichlet(mesh.facet_barycenter[boundary]), dtype=bool)
        self.dirichlet_mask = np.zeros(mesh.n_facets, dtype=bool)
        self.dirichlet_mask[boundary[chosen]] = True
        self.free_facets = np.flatnonzero(~self.dirichlet_mask)
        self.facet_to_free = -np.ones(mesh.n_facets, dtype=np.int64)
        self.facet_to_free[self.free_facets] = np.arange(len(self.free_facets))

        local = self.facet_to_free[mesh.elem_facets]
        comps = np.arange(components)
        self.local_dofs = np.where(local[:, :, None] >= 0, local[:, :, None] * components + comps, -1)

    @property
    def n_free(self) -> int:
        return len(self.free_facets) * self.components

    @property
    def has_natural_boundary(self) -> bool:
        return bool(np.any(self.mesh.boundary_mask & ~self.dirichlet_mask))

    def dof(self, facet, component=0):
        free = self.facet_to_free[facet]
        return np.where(free >= 0, free * self.components + component, -1)

    @property
    def weights(self):
        """
        Diagonal of the mass-lumped (.,.)_{0,l} product: sum over owners of |K|/(d+1)
        """
        mesh = self.mesh
        share = np.repeat(mesh.elem_measure / (mesh.dim + 1), mesh.dim + 1)
        per_facet = np.bincount(mesh.elem_facets.ravel(), weights=share, minlength=mesh.n_facets)
        return np.repeat(per_facet[self.free_facets], self.components)

    def inner(self, u, v) -> float:
        return float(np.dot(self.weights * u, v))

    def interpolate(self, g):
        """
        Facet-barycentre values of `g` on every facet, shape (n_facets, components)
        """
        values = np.asarray(g(self.mesh.facet_barycenter), dtype=float)
        return values.reshape(self.mesh.n_facets, self.components)

    def free_values(self, facet_values):
        return np.asarray(facet_values, dtype=float).reshape(self.mesh.n_facets, self.components)[self.free_facets].ravel()

    def dirichlet_values(self, g):
        """Facet values of `g` on Dirichlet facets and zero elsewhere"""
        values = self.interpolate(g)
        values[~self.dirichlet_mask] = 0.0
        return values

    def localize(self, u, dirichlet_values=None):
        """
        Element-local facet values, shape (n_elements, d + 1, components)

        @param u: free degrees of freedom
        @param dirichlet_values: facet values used on Dirichlet facets
        """
        mesh = self.mesh
        full = np.zeros((mesh.n_facets, self.components))
        if dirichlet_values is not None:
            full[self.dirichlet_mask] = np.asarray(dirichlet_values).reshape(mesh.n_facets, -1)[self.dirichlet_mask]
        full[self.free_facets] = np.asarray(u).reshape(-1, self.components)
        return full[mesh.elem_facets]

    def scatter(self, local_matrices, local_vectors=None, dirichlet_values=None):
        """
        Assemble element matrices over the free degrees of freedom, moving the
        Dirichlet columns to the right-hand side

        @param local_matrices: shape (n_elements, n_local, n_local) with local index
            ``i * components + c``
        @param local_vectors: shape (n_elements, n_local), optional
        @returns: `scipy.sparse.csr_matrix` and right-hand side
        """
        n_el = self.mesh.n_elements
        dofs = self.local_dofs.reshape(n_el, -1)
        n_local = dofs.shape[1]
        rows = np.broadcast_to(dofs[:, :, None], (n_el, n_local, n_local))
        cols = np.broadcast_to(dofs[:, None, :], (n_el, n_local, n_local))
        keep = (rows >= 0) & (cols >= 0)
        matrix = assemble_from_triplets((self.n_free, self.n_free), rows[keep], cols[keep], local_matrices[keep])

        rhs = np.zeros(self.n_free)
        vectors = np.zeros((n_el, n_local)) if local_vectors is None else np.array(local_vectors, dtype=float)
        if dirichlet_values is not None:
            lifted = self.localize(np.zeros(self.n_free), dirichlet_values).reshape(n_el, -1)
            lifted[dofs >= 0] = 0.0
            vectors -= np.einsum('kij,kj->ki', local_matrices, lifted)
        free = dofs >= 0
        np.add.at(rhs, dofs[free], vectors[free])
        return matrix, rhs


def build_facet_space(mesh, components=1, dirichlet=None) -> FacetSpace:
    """
    @param components: 1 for scalar traces, mesh.dim for velocity traces
    @param dirichlet: predicate on facet barycentres; every boundary facet if None
    """
    return FacetSpace(mesh, components, dirichlet)


class PressureSpace(object):
    """
    Piecewise constant pressures with the |K|-weighted inner product [p, q]
    """

    def __init__(self, mesh, mean_zero=True):
        self.mesh = mesh
        self.mean_zero = mean_zero

    @property
    def n(self) -> int:
        return self.mesh.n_elements

    @property
    def weights(self):
        return self.mesh.elem_measure

    def inner(self, p, q) -> float:
        return float(np.dot(self.weights * p, q))

    def mean(self, p) -> float:
        return float(np.dot(self.weights, p) / self.weights.sum())

    def project(self, p):
        """Remove the mean when the pressure is only defined up to a constant"""
        if not self.mean_zero:
            return np.asarray(p, dtype=float)
        return np.asarray(p, dtype=float) - self.mean(p)

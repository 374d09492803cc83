"""
Intergrid transfer between consecutive levels of a mesh hierarchy.

The averaging prolongation evaluates the coarse Crouzeix-Raviart function at
fine facet barycentres, averaging the two one-sided values on the coarse
skeleton. For Stokes it is followed by a discrete harmonic correction on the
fine facets interior to each coarse element, which preserves the divergence
mean of every coarse element.
"""
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from linalg.exceptions import FactorizationError
from linalg.sparse import assemble_from_triplets
from mesh.refinement import FacetParent
from spaces.cr import cr_basis_values

logger = logging.getLogger(__name__)


def build_prolongation(hierarchy, level, coarse_space, fine_space):
    """
    Averaging prolongation from `level - 1` to `level` over free degrees of freedom

    @param hierarchy: `MeshHierarchy`
    @param level: index of the fine level
    @param coarse_space: `FacetSpace` on `level - 1`
    @param fine_space: `FacetSpace` on `level`, same number of components
    @rtype: `scipy.sparse.csr_matrix`
    """
    coarse, fine = hierarchy[level - 1], hierarchy[level]
    kind, parent = hierarchy.facet_parent(level)
    facets = fine_space.free_facets

    # (fine facet, coarse element, weight) sources
    interior = kind[facets] == FacetParent.INTERIOR_OF_COARSE_ELEMENT
    sources_facet = [facets[interior]]
    sources_element = [parent[facets[interior]]]
    sources_weight = [np.ones(int(interior.sum()))]
    skeleton = facets[~interior]
    owners = coarse.facet_elements[parent[skeleton]]
    two_sided = owners[:, 1] >= 0
    for side in (0, 1):
        chosen = two_sided if side else np.ones(len(skeleton), dtype=bool)
        sources_facet.append(skeleton[chosen])
        sources_element.append(owners[chosen, side])
        sources_weight.append(np.where(two_sided[chosen], 0.5, 1.0))
    fine_facet = np.concatenate(sources_facet)
    element = np.concatenate(sources_element)
    weight = np.concatenate(sources_weight)

    values = cr_basis_values(coarse, element, fine.facet_barycenter[fine_facet]) * weight[:, None]
    rows = np.broadcast_to(fine_space.facet_to_free[fine_facet][:, None], values.shape)
    cols = coarse_space.facet_to_free[coarse.elem_facets[element]]
    keep = cols >= 0
    scalar = assemble_from_triplets((len(facets), len(coarse_space.free_facets)),
                                    rows[keep], cols[keep], values[keep])
    if fine_space.components == 1:
        return scalar
    return sp.kron(scalar, sp.identity(fine_space.components), format='csr')


def restrict(prolongation, fine_weights, coarse_weights):
    """
    The adjoint D_c^{-1} P' D_f of a prolongation with respect to the weighted
    products of both levels; sparse when the prolongation is
    """
    if sp.issparse(prolongation):
        return (sp.diags(1.0 / coarse_weights) @ prolongation.T @ sp.diags(fine_weights)).tocsr()
    operator = aslinearoperator(prolongation)
    fine_weights = np.asarray(fine_weights)
    coarse_weights = np.asarray(coarse_weights)
    return LinearOperator((operator.shape[1], operator.shape[0]),
                          matvec=lambda v: operator.rmatvec(fine_weights * v) / coarse_weights,
                          rmatvec=lambda v: fine_weights * operator.matvec(v / coarse_weights),
                          dtype=float)


class BubbleSpaceIndex(object):
    """
    Free fine degrees of freedom on facets interior to each coarse element,
    shape (n_coarse_elements, n_bubble_dofs)
    """

    def __init__(self, hierarchy, level, fine_space):
        kind, parent = hierarchy.facet_parent(level)
        facets = np.flatnonzero(kind == FacetParent.INTERIOR_OF_COARSE_ELEMENT)
        order = np.argsort(parent[facets], kind='stable')
        facets = facets[order]
        n_coarse = hierarchy[level - 1].n_elements
        per_element = len(facets) // n_coarse
        comps = np.arange(fine_space.components)
        dofs = fine_space.facet_to_free[facets][:, None] * fine_space.components + comps
        self.dofs = dofs.reshape(n_coarse, per_element * fine_space.components)

    def __len__(self):
        return len(self.dofs)


class DivergenceCorrectedProlongation(LinearOperator):
    """
    v -> w - Q Aeps w with w = P_avg v, Q the block diagonal inverse of Aeps
    on the bubble degrees of freedom of every coarse element
    """

    def __init__(self, averaging, augmented, bubbles):
        super().__init__(dtype=float, shape=averaging.shape)
        self.averaging = averaging.tocsr()
        self.augmented = augmented.tocsr()
        self.bubbles = bubbles
        idx = bubbles.dofs
        n_coarse, size = idx.shape
        rows = np.broadcast_to(idx[:, :, None], (n_coarse, size, size))
        cols = np.broadcast_to(idx[:, None, :], (n_coarse, size, size))
        blocks = np.asarray(self.augmented[rows.ravel(), cols.ravel()]).reshape(n_coarse, size, size)
        try:
            np.linalg.cholesky(blocks)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError('Bubble block is not symmetric positive definite') from exc
        inverses = np.linalg.inv(blocks)
        inverses = 0.5 * (inverses + np.swapaxes(inverses, 1, 2))
        n = self.augmented.shape[0]
        self.correction = assemble_from_triplets((n, n), rows, cols, inverses)
        logger.debug('divergence corrected prolongation with %d bubble blocks of size %d', n_coarse, size)

    def _matvec(self, v):
        w = self.averaging @ np.ravel(v)
        return w - self.correction @ (self.augmented @ w)

    def _rmatvec(self, y):
        y = np.ravel(y)
        return self.averaging.T @ (y - self.augmented @ (self.correction @ y))


def build_div_corrected_prolongation(averaging, augmented, bubbles):
    return DivergenceCorrectedProlongation(averaging, augmented, bubbles)

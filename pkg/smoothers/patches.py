import numpy as np


class VertexPatchIndex(object):
    """
    For every mesh vertex, the sorted free degrees of freedom (all components)
    on facets containing it; vertices without free facets are skipped
    """

    def __init__(self, space):
        mesh = space.mesh
        facets = space.free_facets
        comps = space.components
        vertex = mesh.facets[facets]
        dofs = space.facet_to_free[facets][:, None, None] * comps + np.arange(comps)[None, None, :]
        dofs = np.broadcast_to(dofs, (len(facets), mesh.dim, comps))
        vertex = np.broadcast_to(vertex[:, :, None], dofs.shape)
        order = np.lexsort((dofs.ravel(), vertex.ravel()))
        vertex, dofs = vertex.ravel()[order], dofs.ravel()[order]
        splits = np.flatnonzero(np.diff(vertex)) + 1
        self.vertices = vertex[np.r_[0, splits]] if len(vertex) else vertex
        self.patches = np.split(dofs, splits) if len(dofs) else []

    def __len__(self):
        return len(self.patches)

    def __iter__(self):
        return iter(self.patches)

    def __getitem__(self, index):
        return self.patches[index]


def build_vertex_patches(space) -> VertexPatchIndex:
    return VertexPatchIndex(space)

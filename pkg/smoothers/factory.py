from django.core.exceptions import ValidationError

from helpers.conf import solver_setting
from smoothers.block import BlockGaussSeidel, BlockJacobi
from smoothers.patches import build_vertex_patches
from smoothers.point import PointGaussSeidel, PointJacobi

SMOOTHER_KINDS = (
    ('pjac', 'P-JAC'),
    ('pgs', 'P-GS'),
    ('bjac', 'B-JAC'),
    ('bgs', 'B-GS'),
)

BLOCK_KINDS = ('bjac', 'bgs')


def build_smoother(matrix, kind, space=None, damping=None):
    """
    Build a smoother of the given kind for a symmetric positive definite matrix

    @param kind: one of `SMOOTHER_KINDS`
    @param space: the `FacetSpace` of the matrix, needed for vertex patches
    @param damping: overrides POINT_DAMPING or BLOCK_DAMPING for the Jacobi variants
    """
    if kind == 'pjac':
        return PointJacobi(matrix, solver_setting('POINT_DAMPING', damping))
    if kind == 'pgs':
        return PointGaussSeidel(matrix)
    if kind in BLOCK_KINDS:
        if space is None:
            raise ValidationError('Block smoothers need the facet space to build vertex patches')
        patches = build_vertex_patches(space)
        if kind == 'bjac':
            return BlockJacobi(matrix, patches, solver_setting('BLOCK_DAMPING', damping))
        return BlockGaussSeidel(matrix, patches)
    raise ValidationError(f'Unknown smoother {kind!r}')

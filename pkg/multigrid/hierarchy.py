"""
Helper classes for multigrid hierarchies. Currently we support the following 2 hierarchies:

1. **`MgHierarchyDiffusion`** - condensed reaction-diffusion operators with point or block
   smoothers and the averaging prolongation
2. **`MgHierarchyStokes`** - augmented Stokes operators with vertex patch smoothers and the
   divergence corrected prolongation

Every level is rediscretized on its own mesh. Level 0 is the coarsest and is solved directly.
"""
import logging

from django.core.exceptions import ValidationError

from hdg_diffusion.assembly import assemble_condensed_diffusion
from hdg_stokes.assembly import assemble_condensed_stokes
from linalg.direct import coarse_direct_solve
from smoothers.factory import build_smoother
from spaces.facet_space import FacetSpace, PressureSpace
from transfer.prolongation import (BubbleSpaceIndex, build_div_corrected_prolongation, build_prolongation,
                                   restrict)

logger = logging.getLogger(__name__)

CYCLES = (
    ('v', 'V-cycle'),
    ('w', 'W-cycle'),
    ('varv', 'variable V-cycle'),
)


def smoothing_schedule(n_levels, steps, cycle):
    """
    Smoothing steps per level index; the variable V-cycle doubles them on every
    coarser level, starting from `steps` on the finest
    """
    if steps < 1:
        raise ValidationError('At least one smoothing step is needed')
    if cycle == 'varv':
        return [steps * 2 ** (n_levels - 1 - level) for level in range(n_levels)]
    return [steps] * n_levels


def coarse_corrections(cycle) -> int:
    return 2 if cycle == 'w' else 1


class MultigridLevel(object):
    """
    @param matrix: stiffness matrix K of the level; the level operator is D^{-1} K
    @param weights: diagonal D of the (.,.)_{0,l} product
    @param prolongation: transfer from the next coarser level
    @param restriction: weighted adjoint of the prolongation
    """

    def __init__(self, matrix, weights, smoother=None, prolongation=None, restriction=None, coarse_solver=None):
        self.matrix = matrix
        self.weights = weights
        self.smoother = smoother
        self.prolongation = prolongation
        self.restriction = restriction
        self.coarse_solver = coarse_solver

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


class MultigridHierarchy(object):
    def __init__(self, levels, systems, steps, cycle='v'):
        self.levels = levels
        self.systems = systems
        self.cycle = cycle
        self.steps = smoothing_schedule(len(levels), steps, cycle)
        self.q = coarse_corrections(cycle)

    def __len__(self):
        return len(self.levels)

    @property
    def finest(self) -> MultigridLevel:
        return self.levels[-1]

    @property
    def system(self):
        """The assembled system of the finest level"""
        return self.systems[-1]


class MgHierarchyDiffusion(MultigridHierarchy):
    pass


class MgHierarchyStokes(MultigridHierarchy):
    pass


def build_diffusion_hierarchy(mesh_hierarchy, coefficients, smoother='pgs', steps=2, cycle='v', damping=None,
                              alpha_inv_levels=None, dirichlet=None, boundary=None):
    """
    Assemble the condensed diffusion operators of every level and their transfers

    @param mesh_hierarchy: `MeshHierarchy`
    @param coefficients: `DiffusionCoefficients`
    @param alpha_inv_levels: optional elementwise 1/alpha per level
    @param dirichlet: predicate selecting Dirichlet boundary facets
    @param boundary: Dirichlet values for the finest level
    @rtype: `MgHierarchyDiffusion`
    """
    alpha_inv_levels = alpha_inv_levels or [None] * len(mesh_hierarchy)
    levels, systems, spaces = [], [], []
    for index, mesh in enumerate(mesh_hierarchy.levels):
        space = FacetSpace(mesh, dirichlet=dirichlet)
        finest = index == len(mesh_hierarchy) - 1
        system = assemble_condensed_diffusion(space, coefficients, alpha_inv_levels[index],
                                              boundary if finest else None)
        level = MultigridLevel(system.matrix, space.weights)
        if index == 0:
            level.coarse_solver = coarse_direct_solve(system.matrix)
        else:
            level.smoother = build_smoother(system.matrix, smoother, space, damping)
            level.prolongation = build_prolongation(mesh_hierarchy, index, spaces[-1], space)
            level.restriction = restrict(level.prolongation, space.weights, spaces[-1].weights)
        levels.append(level)
        systems.append(system)
        spaces.append(space)
    logger.info('diffusion hierarchy: %d levels, %d unknowns on the finest', len(levels), levels[-1].size)
    return MgHierarchyDiffusion(levels, systems, steps, cycle)


def build_stokes_hierarchy(mesh_hierarchy, coefficients, epsilon=None, smoother='bgs', steps=1, cycle='varv',
                           damping=None, dirichlet=None, boundary=None):
    """
    Assemble the augmented Stokes operators of every level with the same epsilon

    @param dirichlet: predicate selecting Dirichlet boundary facets; the pressure
        is mean-zero exactly when every boundary facet is Dirichlet
    @param boundary: Dirichlet velocity for the finest level
    @rtype: `MgHierarchyStokes`
    """
    levels, systems, spaces = [], [], []
    for index, mesh in enumerate(mesh_hierarchy.levels):
        vspace = FacetSpace(mesh, mesh.dim, dirichlet)
        pspace = PressureSpace(mesh, mean_zero=not vspace.has_natural_boundary)
        finest = index == len(mesh_hierarchy) - 1
        system = assemble_condensed_stokes(vspace, pspace, coefficients, epsilon, boundary if finest else None)
        level = MultigridLevel(system.Aeps, vspace.weights)
        if index == 0:
            level.coarse_solver = coarse_direct_solve(system.Aeps)
        else:
            level.smoother = build_smoother(system.Aeps, smoother, vspace, damping)
            averaging = build_prolongation(mesh_hierarchy, index, spaces[-1], vspace)
            bubbles = BubbleSpaceIndex(mesh_hierarchy, index, vspace)
            level.prolongation = build_div_corrected_prolongation(averaging, system.Aeps, bubbles)
            level.restriction = restrict(level.prolongation, vspace.weights, spaces[-1].weights)
        levels.append(level)
        systems.append(system)
        spaces.append(vspace)
    logger.info('Stokes hierarchy: %d levels, %d unknowns on the finest', len(levels), levels[-1].size)
    return MgHierarchyStokes(levels, systems, steps, cycle)

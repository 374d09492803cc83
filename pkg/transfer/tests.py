import numpy as np
from django.test import SimpleTestCase

from hdg_stokes.assembly import assemble_condensed_stokes, assemble_divergence
from hdg_stokes.coefficients import StokesCoefficients
from mixins.init_meshes import InitMeshesMixin
from spaces.facet_space import FacetSpace, PressureSpace
from transfer.prolongation import (BubbleSpaceIndex, build_div_corrected_prolongation, build_prolongation,
                                   restrict)


def no_dirichlet(points):
    return np.zeros(len(points), dtype=bool)


def zero_source(points):
    return np.zeros_like(points)


class AveragingProlongationTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.rng = np.random.default_rng(11)

    def test_linear_functions_are_reproduced(self):
        for hierarchy in (self.square_hierarchy, self.cube_hierarchy):
            coarse = FacetSpace(hierarchy[0], dirichlet=no_dirichlet)
            fine = FacetSpace(hierarchy[1], dirichlet=no_dirichlet)
            P = build_prolongation(hierarchy, 1, coarse, fine)
            gradient = np.array([0.7, -1.3, 2.1])[:hierarchy[0].dim]

            def linear(points):
                return 0.25 + points @ gradient

            coarse_values = linear(hierarchy[0].facet_barycenter)
            np.testing.assert_allclose(P @ coarse_values, linear(hierarchy[1].facet_barycenter), atol=1e-12)

    def test_rows_sum_to_one_away_from_the_boundary(self):
        hierarchy = self.square_hierarchy
        P = build_prolongation(hierarchy, 2, FacetSpace(hierarchy[1], dirichlet=no_dirichlet),
                               FacetSpace(hierarchy[2], dirichlet=no_dirichlet))
        np.testing.assert_allclose(np.asarray(P.sum(axis=1)).ravel(), 1.0)

    def test_restriction_is_the_weighted_adjoint(self):
        hierarchy = self.square_hierarchy
        coarse, fine = FacetSpace(hierarchy[0], 2), FacetSpace(hierarchy[1], 2)
        P = build_prolongation(hierarchy, 1, coarse, fine)
        R = restrict(P, fine.weights, coarse.weights)
        v, w = self.rng.standard_normal(fine.n_free), self.rng.standard_normal(coarse.n_free)
        self.assertAlmostEqual(coarse.inner(R @ v, w), fine.inner(v, P @ w), places=12)


class DivergenceCorrectedProlongationTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.rng = np.random.default_rng(5)

    def corrected(self, hierarchy, level):
        coarse = FacetSpace(hierarchy[level - 1], hierarchy[0].dim)
        fine = FacetSpace(hierarchy[level], hierarchy[0].dim)
        system = assemble_condensed_stokes(fine, PressureSpace(hierarchy[level]),
                                           StokesCoefficients(1.0, 1.0, zero_source), epsilon=1e-6)
        P = build_prolongation(hierarchy, level, coarse, fine)
        bubbles = BubbleSpaceIndex(hierarchy, level, fine)
        return coarse, fine, system, build_div_corrected_prolongation(P, system.Aeps, bubbles), bubbles

    def test_bubble_sizes(self):
        _, _, _, _, bubbles = self.corrected(self.square_hierarchy, 1)
        self.assertEqual(bubbles.dofs.shape, (self.square_hierarchy[0].n_elements, 6))
        _, _, _, _, bubbles = self.corrected(self.cube_hierarchy, 1)
        self.assertEqual(bubbles.dofs.shape, (self.cube_hierarchy[0].n_elements, 24))

    def test_divergence_means_are_preserved(self):
        cases = [(self.square_hierarchy, 1), (self.square_hierarchy, 2), (self.cube_hierarchy, 1)]
        for hierarchy, level in cases:
            coarse, fine, _, operator, _ = self.corrected(hierarchy, level)
            B_coarse, _ = assemble_divergence(coarse)
            B_fine, _ = assemble_divergence(fine)
            v = self.rng.standard_normal(coarse.n_free)
            fine_flux = hierarchy[level].elem_measure * (B_fine @ (operator @ v))
            coarse_flux = hierarchy[level - 1].elem_measure * (B_coarse @ v)
            summed = fine_flux[hierarchy.child_elems(level)].sum(axis=1)
            np.testing.assert_allclose(summed, coarse_flux, atol=1e-11 * np.abs(coarse_flux).max())

    def test_correction_is_discrete_harmonic(self):
        _, _, system, operator, bubbles = self.corrected(self.cube_hierarchy, 1)
        v = self.rng.standard_normal(operator.shape[1])
        residual = system.Aeps @ (operator @ v)
        scale = np.abs(system.Aeps).max() * np.abs(v).max()
        self.assertLess(np.abs(residual[bubbles.dofs]).max(), 1e-9 * scale)

    def test_transpose(self):
        _, _, _, operator, _ = self.corrected(self.square_hierarchy, 2)
        v = self.rng.standard_normal(operator.shape[1])
        y = self.rng.standard_normal(operator.shape[0])
        self.assertAlmostEqual(np.dot(operator @ v, y) / np.dot(v, operator.rmatvec(y)), 1.0, places=10)

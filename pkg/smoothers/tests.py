import numpy as np
import scipy.sparse as sp
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from experiments.problems import ManufacturedStokesProblem, SmoothDiffusionProblem
from hdg_diffusion.assembly import assemble_condensed_diffusion
from hdg_stokes.assembly import assemble_condensed_stokes
from mixins.init_meshes import InitMeshesMixin
from smoothers.block import BlockGaussSeidel
from smoothers.factory import build_smoother
from smoothers.patches import build_vertex_patches
from spaces.facet_space import FacetSpace, PressureSpace


class SmootherTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()
        cls.rng = np.random.default_rng(17)
        cls.scalar_space = FacetSpace(cls.square)
        cls.diffusion = assemble_condensed_diffusion(cls.scalar_space, SmoothDiffusionProblem(2).coefficients())
        cls.vector_space = FacetSpace(cls.square, 2)
        cls.stokes = assemble_condensed_stokes(cls.vector_space, PressureSpace(cls.square),
                                               ManufacturedStokesProblem(2).coefficients(), epsilon=1e-4)

    def cases(self):
        return [
            (self.diffusion.matrix, 'pjac', self.scalar_space),
            (self.diffusion.matrix, 'pgs', self.scalar_space),
            (self.diffusion.matrix, 'bjac', self.scalar_space),
            (self.stokes.Aeps, 'bjac', self.vector_space),
            (self.stokes.Aeps, 'bgs', self.vector_space),
        ]

    def test_transpose(self):
        for matrix, kind, space in self.cases():
            smoother = build_smoother(matrix, kind, space)
            r, s = self.rng.standard_normal(space.n_free), self.rng.standard_normal(space.n_free)
            self.assertAlmostEqual(np.dot(smoother.apply(r), s) / np.dot(r, smoother.apply_transpose(s)), 1.0,
                                   places=9, msg=kind)

    def test_contraction(self):
        for matrix, kind, space in self.cases():
            smoother = build_smoother(matrix, kind, space)
            dense = matrix.toarray()
            columns = np.stack([smoother.apply(col) for col in dense.T], axis=1)
            iteration = np.eye(space.n_free) - columns
            radius = np.abs(np.linalg.eigvals(iteration)).max()
            self.assertLess(radius, 1.0, kind)

    def test_symmetric_gauss_seidel_is_positive(self):
        matrix = self.diffusion.matrix
        smoother = build_smoother(matrix, 'pgs')
        r = self.rng.standard_normal(matrix.shape[0])
        self.assertGreater(np.dot(r, smoother.apply(r)), 0.0)

    def test_patches(self):
        patches = build_vertex_patches(self.vector_space)
        counts = np.bincount(np.concatenate(list(patches)), minlength=self.vector_space.n_free)
        np.testing.assert_array_equal(counts, self.square.dim)
        for patch in patches:
            self.assertTrue(np.all(np.diff(patch) > 0))
            self.assertEqual(len(patch) % 2, 0)

    def test_invalid(self):
        with self.assertRaises(ValidationError):
            build_smoother(-self.diffusion.matrix, 'pjac')
        with self.assertRaises(ValidationError):
            build_smoother(self.diffusion.matrix, 'sor')
        with self.assertRaises(ValidationError):
            build_smoother(self.diffusion.matrix, 'bgs')

    def test_single_patch_is_exact(self):
        matrix = sp.csr_matrix(np.array([[4.0, 1.0], [1.0, 3.0]]))

        class OnePatch(object):
            patches = [np.array([0, 1])]

            def __iter__(self):
                return iter(self.patches)

        smoother = BlockGaussSeidel(matrix, OnePatch())
        r = np.array([1.0, 2.0])
        np.testing.assert_allclose(matrix @ smoother.apply(r), r)

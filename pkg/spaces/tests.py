import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from mesh.builders import build_unit_box_mesh
from mixins.init_meshes import InitMeshesMixin
from spaces.cr import cr_basis_values, cr_divergence, cr_gradient, mesh_cr_gradients
from spaces.facet_space import FacetSpace, PressureSpace, build_facet_space

TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


class CrTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()

    def test_gradient_of_linear_function(self):
        midpoints = np.array([[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]])
        values = 2.0 * midpoints[:, 0] - 3.0 * midpoints[:, 1] + 1.0
        np.testing.assert_allclose(cr_gradient(TRIANGLE, values), [2.0, -3.0])
        np.testing.assert_allclose(cr_gradient(TRIANGLE, np.ones(3)), [0.0, 0.0], atol=1e-15)

    def test_divergence(self):
        midpoints = np.array([[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]])
        self.assertAlmostEqual(cr_divergence(TRIANGLE, midpoints), 2.0)

    def test_basis_is_nodal(self):
        mesh = self.cube
        elements = np.repeat(np.arange(mesh.n_elements), 4)
        values = cr_basis_values(mesh, elements, mesh.local_facet_barycenter.reshape(-1, 3))
        np.testing.assert_allclose(values.reshape(-1, 4, 4), np.broadcast_to(np.eye(4), (mesh.n_elements, 4, 4)),
                                   atol=1e-12)

    def test_mesh_gradients_sum_to_zero(self):
        mesh = self.square
        grads = mesh_cr_gradients(mesh, np.ones((mesh.n_elements, 3)))
        self.assertLess(np.abs(grads).max(), 1e-12)


class FacetSpaceTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()

    def test_scalar_numbering(self):
        space = FacetSpace(self.square)
        self.assertEqual(space.n_free, int((~self.square.boundary_mask).sum()))
        interior = self.square.interior_facets
        np.testing.assert_array_equal(space.dof(interior), np.arange(len(interior)))

    def test_vector_numbering(self):
        space = FacetSpace(self.cube, 3)
        free = space.free_facets
        self.assertEqual(space.n_free, 3 * len(free))
        self.assertEqual(space.dof(free[2], 1), 7)

    def test_single_cell_square(self):
        mesh = build_unit_box_mesh(2, 1.5)
        self.assertEqual(mesh.n_elements, 2)
        self.assertEqual(build_facet_space(mesh).n_free, 1)
        self.assertEqual(build_facet_space(mesh, 2).n_free, 2)

    def test_invalid_components(self):
        with self.assertRaises(ValidationError):
            FacetSpace(self.square, 3)

    def test_partial_dirichlet(self):
        space = FacetSpace(self.square, dirichlet=lambda points: points[:, 0] < 1.0 - 1e-12)
        self.assertTrue(space.has_natural_boundary)
        outflow = self.square.boundary_mask & (np.abs(self.square.facet_barycenter[:, 0] - 1.0) < 1e-12)
        self.assertTrue(np.all(space.facet_to_free[outflow] >= 0))

    def test_weights(self):
        space = FacetSpace(self.square, dirichlet=lambda points: np.zeros(len(points), dtype=bool))
        self.assertAlmostEqual(space.weights.sum(), 1.0)
        self.assertAlmostEqual(space.inner(np.ones(space.n_free), np.ones(space.n_free)), 1.0)

    def test_localize_with_dirichlet_values(self):
        space = FacetSpace(self.square)
        values = space.dirichlet_values(lambda points: points[:, 0])
        local = space.localize(np.zeros(space.n_free), values)[:, :, 0]
        expected = np.where(space.dirichlet_mask[self.square.elem_facets],
                            self.square.local_facet_barycenter[:, :, 0], 0.0)
        np.testing.assert_allclose(local, expected)

    def test_pressure_space(self):
        space = PressureSpace(self.square)
        p = np.arange(self.square.n_elements, dtype=float)
        self.assertAlmostEqual(space.mean(space.project(p)), 0.0)
        np.testing.assert_array_equal(PressureSpace(self.square, mean_zero=False).project(p), p)

import io
import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from mesh.builders import build_step_domain_mesh, build_unit_box_mesh
from mesh.export import read_mesh_text, write_mesh_text
from mesh.level import MeshLevel
from mesh.refinement import FacetParent, MeshHierarchy, refine_uniform
from mixins.init_meshes import InitMeshesMixin


class MeshLevelTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()

    def check_invariants(self, mesh) -> None:
        d = mesh.dim
        # every facet has one or two owners
        counts = np.bincount(mesh.elem_facets.ravel(), minlength=mesh.n_facets)
        self.assertTrue(np.all((counts == 1) | (counts == 2)))
        np.testing.assert_array_equal(counts == 1, mesh.boundary_mask)
        # sum of |F_i| n_i vanishes on every element
        flux = (mesh.local_facet_measure[:, :, None] * mesh.facet_normal).sum(axis=1)
        self.assertLess(np.abs(flux).max(), 1e-12)
        # local facet i is opposite vertex i, normals point away from it
        opposite = mesh.vertices[mesh.elements]
        outward = np.einsum('kid,kid->ki', mesh.facet_normal, mesh.local_facet_barycenter - opposite)
        self.assertTrue(np.all(outward > 0))
        np.testing.assert_allclose(np.linalg.norm(mesh.facet_normal, axis=2), 1.0)
        self.assertEqual(mesh.facets.shape[1], d)

    def test_unit_square(self):
        mesh = self.square
        self.assertEqual(mesh.n_elements, 2 * 3 ** 2)
        self.assertAlmostEqual(mesh.elem_measure.sum(), 1.0)
        self.check_invariants(mesh)

    def test_single_cell_square(self):
        mesh = build_unit_box_mesh(2, 1.5)
        self.assertEqual(mesh.n_elements, 2)
        self.assertEqual(mesh.n_facets, 5)
        self.assertEqual(int(mesh.boundary_mask.sum()), 4)

    def test_diameter_rule(self):
        mesh = build_unit_box_mesh(2, 1.0)
        self.assertEqual(mesh.n_elements, 8)
        self.assertLessEqual(mesh.diameter, 1.0 + 1e-12)

    def test_unit_cube(self):
        mesh = build_unit_box_mesh(3, 0.5)
        self.assertEqual(mesh.n_elements, 384)
        self.assertAlmostEqual(mesh.elem_measure.sum(), 1.0)
        self.check_invariants(mesh)
        self.check_invariants(self.cube)

    def test_step(self):
        mesh = build_step_domain_mesh(2, 0.5)
        self.assertAlmostEqual(mesh.elem_measure.sum(), 4.75)
        self.check_invariants(mesh)
        mesh = build_step_domain_mesh(3, 1.0)
        self.assertAlmostEqual(mesh.elem_measure.sum(), 4.75)
        self.check_invariants(mesh)

    def test_facet_numbering_is_lexicographic(self):
        facets = [tuple(f) for f in self.square.facets]
        self.assertEqual(facets, sorted(facets))
        self.assertTrue(np.all(np.diff(self.square.facets, axis=1) > 0))

    def test_orientation_signs(self):
        mesh = self.square
        for f in mesh.interior_facets:
            (k0, k1), (i0, i1) = mesh.facet_elements[f], mesh.facet_local_index[f]
            self.assertEqual(mesh.elem_facet_sign[k0, i0], 1)
            self.assertEqual(mesh.elem_facet_sign[k1, i1], -1)
            np.testing.assert_allclose(mesh.facet_normal[k0, i0], -mesh.facet_normal[k1, i1], atol=1e-12)

    def test_invalid_input(self):
        with self.assertRaises(ValidationError):
            build_unit_box_mesh(2, 0.0)
        with self.assertRaises(ValidationError):
            build_unit_box_mesh(4, 0.5)
        with self.assertRaises(ValidationError):
            MeshLevel([[0, 0], [1, 0], [2, 0]], [[0, 1, 2]])

    def test_barycentric(self):
        mesh = self.cube
        lam = mesh.barycentric(np.arange(mesh.n_elements), mesh.elem_barycenter)
        np.testing.assert_allclose(lam, 1.0 / 4)


class RefinementTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()

    def check_refinement(self, coarse) -> None:
        fine, maps = refine_uniform(coarse)
        d = coarse.dim
        self.assertEqual(fine.n_elements, 2 ** d * coarse.n_elements)
        child_measure = fine.elem_measure[maps.child_elems]
        np.testing.assert_allclose(child_measure.sum(axis=1), coarse.elem_measure)
        np.testing.assert_allclose(child_measure, coarse.elem_measure[:, None] / 2 ** d)

        interior = maps.facet_parent_kind == FacetParent.INTERIOR_OF_COARSE_ELEMENT
        self.assertEqual(int(interior.sum()), coarse.n_elements * (3 if d == 2 else 8))
        # fine facets on a coarse facet tile it
        on_facet = ~interior
        covered = np.bincount(maps.facet_parent_index[on_facet],
                              weights=fine.facet_measure[on_facet], minlength=coarse.n_facets)
        np.testing.assert_allclose(covered, coarse.facet_measure)
        # fine boundary facets lie on coarse boundary facets
        self.assertTrue(np.all(coarse.boundary_mask[maps.facet_parent_index[fine.boundary_mask]]))
        return fine

    def test_refine_triangles(self):
        fine = self.check_refinement(self.square)
        self.assertLess(fine.diameter, self.square.diameter / 2 + 1e-12)

    def test_refine_tetrahedra(self):
        fine = self.check_refinement(self.cube)
        again = self.check_refinement(fine)
        # Kuhn simplices stay in one similarity class
        ratio = again.elem_measure.max() / again.elem_measure.min()
        self.assertAlmostEqual(ratio, 1.0)

    def test_hierarchy(self):
        hierarchy = self.square_hierarchy
        self.assertEqual(len(hierarchy), 3)
        ancestors = hierarchy.ancestors(2)
        coarse = hierarchy[0]
        lam = coarse.barycentric(ancestors, hierarchy[2].elem_barycenter)
        self.assertTrue(np.all(lam > -1e-12))

    def test_restrict_elementwise(self):
        hierarchy = self.square_hierarchy
        values = np.arange(hierarchy[1].n_elements, dtype=float)
        coarse = hierarchy.restrict_elementwise(values, 1)
        children = hierarchy.child_elems(1)
        np.testing.assert_allclose(coarse, values[children].mean(axis=1))

    def test_truncated(self):
        truncated = self.square_hierarchy.truncated(2)
        self.assertEqual(len(truncated), 2)
        self.assertIs(truncated.finest, self.square_hierarchy[1])
        np.testing.assert_array_equal(truncated.child_elems(1), self.square_hierarchy.child_elems(1))
        with self.assertRaises(ValidationError):
            self.square_hierarchy.truncated(4)

    def test_export(self):
        stream = io.StringIO()
        write_mesh_text(self.square, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual(len(lines), self.square.n_vertices + self.square.n_elements)
        self.assertTrue(lines[0].startswith('v '))
        stream.seek(0)
        mesh = read_mesh_text(stream)
        np.testing.assert_array_equal(mesh.elements, self.square.elements)
        self.assertTrue(math.isclose(mesh.elem_measure.sum(), 1.0))

import math

import numpy as np
from django.test import SimpleTestCase

from mixins.init_meshes import InitMeshesMixin
from quadrature.rules import (error_quadrature, integrate_over_mesh, qdk0, qf0, qk0, qk1,
                              reference_error_rule)

TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
TETRAHEDRON = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def monomial(exponents):
    def g(points):
        return np.prod(points ** np.asarray(exponents), axis=1)
    return g


def exact_monomial(exponents):
    # integral over the reference simplex: prod(a_i!) / (d + sum(a_i))!
    d = len(exponents)
    return np.prod([math.factorial(a) for a in exponents]) / math.factorial(d + sum(exponents))


class QuadratureTestCase(SimpleTestCase, InitMeshesMixin):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.set_up()

    def test_low_order_rules(self):
        ones = lambda points: np.ones(len(points))
        self.assertAlmostEqual(qk0(TRIANGLE, ones), 0.5)
        self.assertAlmostEqual(qk0(TRIANGLE, monomial((1, 0))), 1.0 / 6)
        self.assertAlmostEqual(qk1(TRIANGLE, monomial((1, 0))), 1.0 / 6)
        self.assertAlmostEqual(qf0(TRIANGLE[1:], ones), math.sqrt(2.0))
        self.assertAlmostEqual(qdk0(TRIANGLE, ones), 2.0 + math.sqrt(2.0))
        self.assertAlmostEqual(qk0(TETRAHEDRON, ones), 1.0 / 6)

    def test_facet_barycentre_rule_on_random_simplices(self):
        rng = np.random.default_rng(11)
        for dim, degree in ((2, 2), (3, 1)):
            for _ in range(100):
                simplex = rng.random((dim + 1, dim))
                exponents = [e for e in np.ndindex(*([degree + 1] * dim)) if sum(e) <= degree]
                coefficients = rng.standard_normal(len(exponents))

                def g(points):
                    return sum(c * monomial(e)(points) for c, e in zip(coefficients, exponents))

                exact = error_quadrature(simplex, g)
                self.assertAlmostEqual(qk1(simplex, g), exact, places=12)

    def test_one_point_rules_on_random_simplices(self):
        rng = np.random.default_rng(13)
        for dim in (2, 3):
            for _ in range(100):
                simplex = rng.random((dim + 1, dim))
                gradient, shift = rng.standard_normal(dim), rng.standard_normal()

                def g(points):
                    return points @ gradient + shift

                self.assertAlmostEqual(qk0(simplex, g), error_quadrature(simplex, g), places=12)
                facet = simplex[1:]
                measure = qf0(facet, lambda points: np.ones(len(points)))
                self.assertAlmostEqual(qf0(facet, g), measure * g(facet).mean(), places=12)

    def test_facet_barycentre_rule_quadratics(self):
        self.assertAlmostEqual(qk1(TRIANGLE, monomial((2, 0))), 1.0 / 12)
        self.assertAlmostEqual(qk1(TRIANGLE, monomial((1, 1))), 1.0 / 24)

    def test_vector_valued_integrand(self):
        value = qk0(TRIANGLE, lambda points: points)
        np.testing.assert_allclose(value, [1.0 / 6, 1.0 / 6])

    def test_error_rule_exactness(self):
        for dim, simplex in ((2, TRIANGLE), (3, TETRAHEDRON)):
            lam, weight = reference_error_rule(dim)
            self.assertTrue(np.all(weight > 0))
            self.assertTrue(np.all(lam > 0))
            for degree in range(6):
                for exponents in np.ndindex(*([degree + 1] * dim)):
                    if sum(exponents) != degree:
                        continue
                    value = error_quadrature(simplex, monomial(exponents))
                    self.assertAlmostEqual(value, exact_monomial(exponents), places=13)

    def test_mesh_integration(self):
        value = integrate_over_mesh(self.square, lambda p: np.sin(np.pi * p[:, 0]) * np.sin(np.pi * p[:, 1]))
        self.assertAlmostEqual(float(value), 4.0 / np.pi ** 2, places=3)
        volume = integrate_over_mesh(self.cube, lambda p: np.ones(len(p)))
        self.assertAlmostEqual(float(volume), 1.0)

import numpy as np
from django.core.exceptions import ValidationError


class StokesCoefficients(object):
    """
    Data of -mu lap u + beta u + grad p = f, div u = 0

    @param mu: viscosity, a positive constant
    @param beta: reaction coefficient, a non-negative constant
    @param f: vectorised source, points (n, d) -> (n, d)
    """

    def __init__(self, mu, beta, f):
        if not mu > 0:
            raise ValidationError('mu must be positive')
        if not beta >= 0:
            raise ValidationError('beta must be non-negative')
        self.mu = float(mu)
        self.beta = float(beta)
        self.f = f

    def level_data(self, mesh):
        return StokesLevelData(mesh, self)


class StokesLevelData(object):
    def __init__(self, mesh, coefficients):
        d = mesh.dim
        self.mu = coefficients.mu
        self.beta = coefficients.beta
        points = mesh.local_facet_barycenter.reshape(-1, d)
        self.f = np.asarray(coefficients.f(points), dtype=float).reshape(mesh.n_elements, d + 1, d)
        self.h = mesh.h_k_facet
        self.tau = self.mu / self.h
        self.gamma = self.mu / (self.mu + self.h ** 2 * self.beta / (d + 1))
        self.lumped_measure = np.repeat((mesh.elem_measure / (d + 1))[:, None], d + 1, axis=1)

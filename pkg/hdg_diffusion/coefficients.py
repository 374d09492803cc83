import numpy as np
from django.core.exceptions import ValidationError


def constant(value):
    """A vectorised constant function of the points"""
    def g(points):
        return np.full(len(points), float(value))
    return g


class DiffusionCoefficients(object):
    """
    Data of -div(alpha grad u) + beta u = f; every entry is a vectorised callable

    @param alpha: diffusion coefficient, positive
    @param beta: reaction coefficient, non-negative
    @param f: source term
    """

    def __init__(self, alpha, beta, f):
        self.alpha = alpha if callable(alpha) else constant(alpha)
        self.beta = beta if callable(beta) else constant(beta)
        self.f = f if callable(f) else constant(f)

    def level_data(self, mesh, alpha_inv=None):
        """
        Elementwise quantities of one mesh level

        @param alpha_inv: optional elementwise values of 1/alpha replacing the
            average of 1/alpha over the facet barycentres
        @rtype: `DiffusionLevelData`
        """
        return DiffusionLevelData(mesh, self, alpha_inv)


class DiffusionLevelData(object):
    def __init__(self, mesh, coefficients, alpha_inv=None):
        d = mesh.dim
        points = mesh.local_facet_barycenter.reshape(-1, d)
        shape = (mesh.n_elements, d + 1)
        if alpha_inv is None:
            alpha = np.asarray(coefficients.alpha(points), dtype=float).reshape(shape)
            if np.any(alpha <= 0):
                raise ValidationError('alpha must be positive')
            alpha_inv = (1.0 / alpha).mean(axis=1)
        alpha_inv = np.asarray(alpha_inv, dtype=float)
        if np.any(alpha_inv <= 0):
            raise ValidationError('alpha must be positive')
        self.alpha_h = 1.0 / alpha_inv
        self.beta = np.asarray(coefficients.beta(points), dtype=float).reshape(shape)
        if np.any(self.beta < 0):
            raise ValidationError('beta must be non-negative')
        self.f = np.asarray(coefficients.f(points), dtype=float).reshape(shape)

        self.h = mesh.h_k_facet
        # tau_K |F_i| = alpha_h |F_i|^2 / |K|
        self.tau = self.alpha_h[:, None] / self.h
        self.gamma = self.alpha_h[:, None] / (self.alpha_h[:, None] + self.h ** 2 * self.beta / (d + 1))
        self.lumped_measure = np.repeat((mesh.elem_measure / (d + 1))[:, None], d + 1, axis=1)

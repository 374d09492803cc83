"""
Helper classes for the model problems. Currently we support the following 5 problems:

1. **`SmoothDiffusionProblem`** - manufactured reaction-diffusion solution on the unit box
2. **`ChessboardDiffusionProblem`** - alternating diffusion coefficient on the finest cells
3. **`ManufacturedStokesProblem`** - divergence-free manufactured Stokes solution
4. **`LidDrivenCavityProblem`** - Stokes flow driven by a tangential lid velocity
5. **`BackwardStepProblem`** - Stokes flow over a backward-facing step with free outflow
"""
import numpy as np
from numpy.polynomial import Polynomial

from hdg_diffusion.coefficients import DiffusionCoefficients
from hdg_stokes.coefficients import StokesCoefficients
from mesh.builders import STEP_LENGTH, build_step_domain_mesh, build_unit_box_mesh

BOUNDARY_TOL = 1e-10

# x^2 (x - 1)^2 and its derivatives
PHI = [Polynomial([0.0, 0.0, 1.0, -2.0, 1.0])]
for _ in range(4):
    PHI.append(PHI[-1].deriv())


class SeparableProduct(object):
    """
    coefficient * prod_k factor_k(x_k) with polynomial factors
    """

    def __init__(self, coefficient, factors):
        self.coefficient = coefficient
        self.factors = factors

    def __call__(self, points, derivatives=None):
        derivatives = derivatives or [0] * len(self.factors)
        value = np.full(len(points), float(self.coefficient))
        for k, (factor, order) in enumerate(zip(self.factors, derivatives)):
            value = value * factor.deriv(order)(points[:, k]) if order else value * factor(points[:, k])
        return value

    def gradient(self, points):
        dim = len(self.factors)
        return np.stack([self(points, list(np.eye(dim, dtype=int)[k])) for k in range(dim)], axis=1)

    def laplacian(self, points):
        dim = len(self.factors)
        return sum(self(points, list(2 * np.eye(dim, dtype=int)[k])) for k in range(dim))


class SmoothDiffusionProblem(object):
    """
    u = prod_k (x_k - x_k^2), alpha = beta = 1 + prod_k sin(x_k) / 2
    """
    kind = 'diffusion'
    dirichlet = None
    exact = True

    def __init__(self, dim):
        self.dim = dim
        self.u = SeparableProduct(1.0, [Polynomial([0.0, 1.0, -1.0])] * dim)

    def build_mesh(self, target_h):
        return build_unit_box_mesh(self.dim, target_h)

    def alpha(self, points):
        return 1.0 + 0.5 * np.prod(np.sin(points), axis=1)

    def alpha_gradient(self, points):
        sines, cosines = np.sin(points), np.cos(points)
        grads = []
        for k in range(self.dim):
            grads.append(0.5 * cosines[:, k] * np.prod(np.delete(sines, k, axis=1), axis=1))
        return np.stack(grads, axis=1)

    def f(self, points):
        grad_u = self.u.gradient(points)
        flux_div = (self.alpha_gradient(points) * grad_u).sum(axis=1) + self.alpha(points) * self.u.laplacian(points)
        return -flux_div + self.alpha(points) * self.u(points)

    def sigma(self, points):
        return -self.alpha(points)[:, None] * self.u.gradient(points)

    def coefficients(self):
        return DiffusionCoefficients(self.alpha, self.alpha, self.f)

    def alpha_inv_levels(self, hierarchy):
        return [None] * len(hierarchy)


class ChessboardDiffusionProblem(object):
    """
    alpha alternates between 1 and rho on the squares of the finest grid,
    beta = 1 and f = 1 with homogeneous Dirichlet data
    """
    kind = 'diffusion'
    dirichlet = None
    exact = False

    def __init__(self, rho, dim=2):
        self.rho = rho
        self.dim = dim

    def build_mesh(self, target_h):
        return build_unit_box_mesh(self.dim, target_h)

    def coefficients(self):
        return DiffusionCoefficients(1.0, 1.0, 1.0)

    def alpha_inv_levels(self, hierarchy):
        """
        1/alpha on every level: chessboard values on the finest level; coarser levels
        invert the L2 projection of alpha onto their piecewise constants
        """
        finest = hierarchy.finest
        # Kuhn cells of the finest level are the chessboard squares
        spacing = np.diff(np.unique(finest.vertices[:, 0])).min()
        cells = np.floor(finest.elem_barycenter / spacing).astype(np.int64)
        colour = cells.sum(axis=1) % 2
        alpha = np.where(colour == 0, 1.0, self.rho)
        levels = [alpha]
        for level in range(len(hierarchy) - 1, 0, -1):
            levels.insert(0, hierarchy.restrict_elementwise(levels[0], level))
        return [1.0 / values for values in levels]


class ManufacturedStokesProblem(object):
    """
    Divergence-free polynomial velocity with a mean-zero polynomial pressure
    """
    kind = 'stokes'
    dirichlet = None
    outflow = None
    exact = True

    def __init__(self, dim, mu=1.0, beta=10.0):
        self.dim, self.mu, self.beta = dim, mu, beta
        phi, dphi = PHI[0], PHI[1]
        if dim == 2:
            self.velocity = [SeparableProduct(-1.0, [phi, dphi]), SeparableProduct(1.0, [dphi, phi])]
            self.pressure = SeparableProduct(1.0, [Polynomial([0.0, 1.0, -1.0]), Polynomial([1.0, -1.0])])
            self.pressure_mean = 1.0 / 12
        else:
            self.velocity = [SeparableProduct(1.0, [phi, dphi, dphi]), SeparableProduct(1.0, [dphi, phi, dphi]),
                             SeparableProduct(-2.0, [dphi, dphi, phi])]
            self.pressure = SeparableProduct(1.0, [Polynomial([0.0, 1.0, -1.0]), Polynomial([1.0, -1.0]),
                                                   Polynomial([1.0, -1.0])])
            self.pressure_mean = 1.0 / 24

    def build_mesh(self, target_h):
        return build_unit_box_mesh(self.dim, target_h)

    def u(self, points):
        return np.stack([c(points) for c in self.velocity], axis=1)

    def p(self, points):
        return self.pressure(points) - self.pressure_mean

    def grad_u(self, points):
        return np.stack([c.gradient(points) for c in self.velocity], axis=1)

    def flux(self, points):
        return -self.mu * self.grad_u(points)

    def f(self, points):
        laplacian = np.stack([c.laplacian(points) for c in self.velocity], axis=1)
        return self.beta * self.u(points) - self.mu * laplacian + self.pressure.gradient(points)

    def coefficients(self):
        return StokesCoefficients(self.mu, self.beta, self.f)


class LidDrivenCavityProblem(object):
    """
    Unit box, no-slip walls and a tangential velocity on the top side
    """
    kind = 'stokes'
    dirichlet = None
    outflow = None
    exact = False

    def __init__(self, dim, mu=1.0, beta=0.0):
        self.dim, self.mu, self.beta = dim, mu, beta

    def build_mesh(self, target_h):
        return build_unit_box_mesh(self.dim, target_h)

    def boundary_velocity(self, points):
        values = np.zeros_like(points)
        top = np.abs(points[:, -1] - 1.0) < BOUNDARY_TOL
        x = points[top]
        if self.dim == 2:
            values[top, 0] = 4.0 * x[:, 0] * (1.0 - x[:, 0])
        else:
            values[top, 0] = 16.0 * x[:, 0] * (1.0 - x[:, 0]) * x[:, 1] * (1.0 - x[:, 1])
        return values

    def coefficients(self):
        return StokesCoefficients(self.mu, self.beta, lambda points: np.zeros_like(points))


class BackwardStepProblem(object):
    """
    Parabolic inflow on x = 0, do-nothing outflow on x = 5, no-slip elsewhere
    """
    kind = 'stokes'
    exact = False

    def __init__(self, dim, mu=1.0, beta=0.0):
        self.dim, self.mu, self.beta = dim, mu, beta

    def build_mesh(self, target_h):
        return build_step_domain_mesh(self.dim, target_h)

    @staticmethod
    def dirichlet(points):
        return np.abs(points[:, 0] - STEP_LENGTH) > BOUNDARY_TOL

    def boundary_velocity(self, points):
        values = np.zeros_like(points)
        inlet = np.abs(points[:, 0]) < BOUNDARY_TOL
        y = points[inlet, 1]
        profile = (1.0 - y) * (y - 0.5)
        if self.dim == 2:
            values[inlet, 0] = 16.0 * profile
        else:
            z = points[inlet, 2]
            values[inlet, 0] = 64.0 * profile * z * (1.0 - z)
        return values

    def coefficients(self):
        return StokesCoefficients(self.mu, self.beta, lambda points: np.zeros_like(points))


def diffusion_problem(name, dim, rho=1.0):
    if name == 'chessboard':
        return ChessboardDiffusionProblem(rho, dim)
    return SmoothDiffusionProblem(dim)


def stokes_problem(name, dim, mu=1.0, beta=None):
    if name == 'cavity':
        return LidDrivenCavityProblem(dim, mu, beta or 0.0)
    if name == 'step':
        return BackwardStepProblem(dim, mu, beta or 0.0)
    return ManufacturedStokesProblem(dim, mu, 10.0 if beta is None else beta)

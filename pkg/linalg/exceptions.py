class SolverError(ArithmeticError):
    """Base class for failures of the iterative and direct solvers"""


class IndefinitePreconditionerError(SolverError):
    """Raised when PCG meets a non-positive curvature or preconditioned residual product"""


class FactorizationError(SolverError):
    """Raised when a matrix that should be symmetric positive definite cannot be factorized"""


class ConvergenceError(SolverError):
    """Raised when an inner solve of an outer iteration does not converge"""

"""Exception hierarchy shared by every helmfem module."""

from typing import Optional


class HelmholtzError(Exception):
    """Base class for all errors raised by helmfem."""

    pass


class DomainError(HelmholtzError, ValueError):
    """An argument lies outside the domain of a function."""

    pass


class ParameterError(HelmholtzError, ValueError):
    """A configuration or size parameter is invalid."""

    pass


class MeshValidityError(HelmholtzError):
    """An element map has a nonpositive Jacobian determinant."""

    def __init__(self, element: int, det: float):
        super().__init__(f"Element {element} has nonpositive Jacobian determinant {det:.3e}")
        self.element = element
        self.det = det


class MeshFormatError(HelmholtzError):
    """An MSH file uses an unsupported version, encoding or element type."""

    pass


class MeshConformityError(HelmholtzError):
    """A mesh edge crosses an interface circle."""

    def __init__(self, edge: tuple, radius: float):
        super().__init__(f"Edge {edge} crosses the interface circle r={radius}")
        self.edge = edge
        self.radius = radius


class ComputationError(HelmholtzError):
    """A numerical subproblem (e.g. a Mie mode system) is singular."""

    def __init__(self, message: str, mode: Optional[int] = None):
        super().__init__(message)
        self.mode = mode


class SolverError(HelmholtzError):
    """Structural singularity or factorization breakdown."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class ConvergenceError(HelmholtzError):
    """The residual contract of the linear solve could not be met."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"Relative residual {residual:.3e} exceeds tolerance {tol:.1e}")
        self.residual = residual
        self.tol = tol


class StudyError(HelmholtzError):
    """A frequency sweep aborted."""

    def __init__(self, frequency: float, cause: BaseException):
        super().__init__(f"Study aborted at f={frequency}: {cause}")
        self.frequency = frequency
        self.cause = cause

from .basis import ReferenceBasis, reference_basis, eval_basis, lattice
from .quadrature import QuadratureRule, quadrature

__all__ = [
    "ReferenceBasis",
    "reference_basis",
    "eval_basis",
    "lattice",
    "QuadratureRule",
    "quadrature",
]

"""Collapsed Gauss-Jacobi quadrature on the reference triangle."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from ..core.errors import ParameterError

MAX_QUADRATURE_DEGREE = 20


@dataclass(frozen=True)
class QuadratureRule:
    degree: int
    points: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.weights.size


@lru_cache(maxsize=None)
def quadrature(degree: int) -> QuadratureRule:
    """Rule exact for all polynomials of total degree <= ``degree``; weights sum to 1/2.

    Uses the Duffy map xi = a (1 - b), eta = b with Gauss-Legendre nodes in a
    and Gauss-Jacobi(1, 0) nodes in b.
    """
    if not 1 <= degree <= MAX_QUADRATURE_DEGREE:
        raise ParameterError(
            f"Quadrature degree must be in [1, {MAX_QUADRATURE_DEGREE}], got {degree}"
        )
    n = (degree + 2) // 2
    a, wa = roots_legendre(n)
    b, wb = roots_jacobi(n, 1.0, 0.0)
    a = 0.5 * (a + 1.0)
    b = 0.5 * (b + 1.0)
    xi = np.outer(a, 1.0 - b).ravel()
    eta = np.broadcast_to(b, (n, n)).ravel()
    weights = np.outer(0.5 * wa, 0.25 * wb).ravel()
    return QuadratureRule(degree=degree, points=np.stack([xi, eta], axis=1), weights=weights)

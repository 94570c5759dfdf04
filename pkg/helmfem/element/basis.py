"""Lagrange bases on the reference triangle {xi, eta >= 0, xi + eta <= 1}.

Node ordering (shared with element geometry maps): the three vertices
(0,0), (1,0), (0,1); then the p-1 nodes of edges 0->1, 1->2, 2->0 at
parameter j/p; then interior lattice points row by row.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from ..core.errors import ParameterError

MAX_DEGREE = 4

LOCAL_EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2), (2, 0))
_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def lattice(p: int) -> np.ndarray:
    """Equispaced lattice nodes of degree p in the canonical ordering."""
    nodes: List[Tuple[float, float]] = [tuple(v) for v in _VERTICES]  # type: ignore[misc]
    for a, b in LOCAL_EDGES:
        va, vb = _VERTICES[a], _VERTICES[b]
        for j in range(1, p):
            t = j / p
            nodes.append(tuple(va + t * (vb - va)))  # type: ignore[arg-type]
    for jj in range(1, p - 1):
        for ii in range(1, p - jj):
            nodes.append((ii / p, jj / p))
    return np.array(nodes, dtype=float)


def node_count(p: int) -> int:
    return (p + 1) * (p + 2) // 2


def _exponents(p: int) -> np.ndarray:
    return np.array([(a, total - a) for total in range(p + 1) for a in range(total, -1, -1)])


def _monomials(exponents: np.ndarray, ref_points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # monomials in s = 2 xi - 1, t = 2 eta - 1 keep the Vandermonde well conditioned
    s = 2.0 * ref_points[:, 0:1] - 1.0
    t = 2.0 * ref_points[:, 1:2] - 1.0
    a = exponents[:, 0][None, :]
    b = exponents[:, 1][None, :]
    values = s**a * t**b
    ds = np.where(a > 0, 2.0 * a * s ** np.maximum(a - 1, 0), 0.0) * t**b
    dt = np.where(b > 0, 2.0 * b * t ** np.maximum(b - 1, 0), 0.0) * s**a
    return values, np.stack([ds, dt], axis=-1)


@dataclass(frozen=True)
class ReferenceBasis:
    p: int
    node_count: int
    nodes: np.ndarray
    exponents: np.ndarray
    vandermonde_inverse: np.ndarray

    def evaluate(self, ref_points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Values (M, n) and reference gradients (M, n, 2) at points (M, 2)."""
        pts = np.atleast_2d(np.asarray(ref_points, dtype=float))
        mono, dmono = _monomials(self.exponents, pts)
        values = mono @ self.vandermonde_inverse
        grads = np.einsum("mjd,ji->mid", dmono, self.vandermonde_inverse)
        return values, grads


@lru_cache(maxsize=None)
def reference_basis(p: int) -> ReferenceBasis:
    if not 1 <= p <= MAX_DEGREE:
        raise ParameterError(f"Polynomial degree must be in [1, {MAX_DEGREE}], got {p}")
    nodes = lattice(p)
    exponents = _exponents(p)
    vandermonde, _ = _monomials(exponents, nodes)
    return ReferenceBasis(
        p=p,
        node_count=node_count(p),
        nodes=nodes,
        exponents=exponents,
        vandermonde_inverse=np.linalg.inv(vandermonde),
    )


def eval_basis(basis: ReferenceBasis, ref_point: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Shape-function values and reference gradients at one point."""
    values, grads = basis.evaluate(np.asarray(ref_point, dtype=float).reshape(1, 2))
    return values[0], grads[0]

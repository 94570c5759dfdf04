"""Plane-wave verification on the unit square (no geometric error)."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..core.coefficients import HomogeneousMedium
from ..core.errors import ParameterError
from ..core.models import BoundaryTag
from ..fem.assembly import apply_dirichlet_inhomogeneous, assemble
from ..fem.dofmap import build_dofmap
from ..fem.linalg import solve
from ..fem.postprocess import h1k_error, interpolate
from ..mesh.generators import generate_square

logger = logging.getLogger(__name__)

DIRECTION = (0.6, 0.8)


@dataclass(frozen=True)
class ConvergenceResult:
    hs: Tuple[float, ...]
    errors: Tuple[float, ...]
    norms: Tuple[float, ...]
    rate: float

    @property
    def relative(self) -> Tuple[float, ...]:
        return tuple(e / n for e, n in zip(self.errors, self.norms))


def convergence_rate(hs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    if len(hs) < 2:
        raise ParameterError("A rate needs at least two meshes")
    slope, _ = np.polyfit(np.log(np.asarray(hs)), np.log(np.asarray(errors)), 1)
    return float(slope)


def plane_wave(
    k: float, direction: Tuple[float, float] = DIRECTION
) -> Callable[[np.ndarray], np.ndarray]:
    d = np.asarray(direction, dtype=float)

    def values(x: np.ndarray) -> np.ndarray:
        return np.exp(1j * k * (x @ d))

    return values


def manufactured_convergence(
    p: int, k: float, hs: Sequence[float], interpolate_only: bool = False
) -> ConvergenceResult:
    """H^1_k error of u = exp(ik d.x) on (0,1)^2 with Dirichlet data on the whole boundary."""
    if len(hs) < 3:
        raise ParameterError(f"Manufactured convergence needs at least 3 meshes, got {len(hs)}")
    exact = plane_wave(k)
    direction = np.asarray(DIRECTION)

    def field(x: np.ndarray, _elements: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        u = exact(x)
        return u, 1j * k * u[..., None] * direction

    measured: List[float] = []
    errors: List[float] = []
    norms: List[float] = []
    for h in hs:
        mesh = generate_square(int(round(1.0 / h)))
        dofmap = build_dofmap(mesh, p, {BoundaryTag.OTHER})
        if interpolate_only:
            solution = interpolate(dofmap, exact)
        else:
            system = assemble(mesh, dofmap, HomogeneousMedium(k), eliminate=False)
            system = apply_dirichlet_inhomogeneous(system, dofmap, exact)
            solution = solve(system.matrix, system.rhs)
        err, nor = h1k_error(mesh, dofmap, solution, field, k)
        logger.info("Manufactured p=%d k=%.3f h=%.4f: err=%.4e", p, k, h, err)
        measured.append(mesh.measured_h)
        errors.append(err)
        norms.append(nor)
    return ConvergenceResult(
        hs=tuple(measured),
        errors=tuple(errors),
        norms=tuple(norms),
        rate=convergence_rate(measured, errors),
    )

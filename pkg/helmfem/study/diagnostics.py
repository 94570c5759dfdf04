"""Fixed-wavenumber refinement studies."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..core.errors import ParameterError
from ..core.models import ProblemSpec, Sampling, StudyRecord
from ..fem.postprocess import solution_difference
from ..mesh.generators import generate_polar
from .config import StudyConfig
from .manufactured import convergence_rate
from .runner import StudyRunner, discretize_and_solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefinementResult:
    records: Tuple[StudyRecord, ...]
    rate: float


@dataclass(frozen=True)
class CrimeResult:
    hs: Tuple[float, ...]
    differences: Tuple[float, ...]
    rate: float


def _check(h_list: Sequence[float]) -> None:
    if len(h_list) < 3:
        raise ParameterError(f"Refinement studies need at least 3 meshes, got {len(h_list)}")


def refinement_study(
    spec: ProblemSpec,
    p: int,
    q: int,
    h_list: Sequence[float],
    sampling: Sampling = Sampling.MIDPOINT,
    weighted: bool = True,
    config: Optional[StudyConfig] = None,
) -> RefinementResult:
    """Relative error on successively finer meshes at fixed k, with its observed rate."""
    _check(h_list)
    runner = StudyRunner(spec, p, q, sampling, weighted, config)
    records = [runner.run_single(spec, h)[1] for h in h_list]
    rate = convergence_rate([r.hmax for r in records], [r.relative for r in records])
    logger.info("Refinement p=%d q=%d: rate %.3f", p, q, rate)
    return RefinementResult(records=tuple(records), rate=rate)


def quadrature_crime(
    spec: ProblemSpec, p: int, q: int, h_list: Sequence[float]
) -> CrimeResult:
    """Relative H^1_k distance between midpoint- and per-point-sampled solutions."""
    _check(h_list)
    hs: List[float] = []
    differences: List[float] = []
    for h in h_list:
        mesh = generate_polar(spec, h, q)
        exact = discretize_and_solve(spec, p, q, h, Sampling.PERPOINT, mesh)
        crime = discretize_and_solve(spec, p, q, h, Sampling.MIDPOINT, mesh)
        diff = solution_difference(mesh, exact.dofmap, exact.values, crime.values, spec.wavenumber)
        logger.info("Quadrature crime at h=%.4f: %.4e", mesh.measured_h, diff)
        hs.append(mesh.measured_h)
        differences.append(diff)
    return CrimeResult(
        hs=tuple(hs), differences=tuple(differences), rate=convergence_rate(hs, differences)
    )

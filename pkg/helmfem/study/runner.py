"""Single solves and wavenumber sweeps under the mesh law k^(2p+1) h^(2p) = C."""

import asyncio
import logging
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import HelmholtzError, ParameterError, StudyError
from ..core.models import ErrorReport, ProblemSpec, Sampling, StudyRecord
from ..fem.assembly import assemble
from ..fem.dofmap import DofMap, build_dofmap
from ..fem.linalg import solve, write_matrix_market
from ..fem.postprocess import total_field_error
from ..mesh.generators import generate_polar
from ..mesh.mesh import Mesh
from ..reference.mie import solve_for
from .config import StudyConfig
from .records import write_records

logger = logging.getLogger(__name__)


def h_law(k: float, p: int, C: float) -> float:
    if k <= 0 or C <= 0 or p < 1:
        raise ParameterError(f"h_law needs k, C > 0 and p >= 1 (got k={k}, p={p}, C={C})")
    return float((C / k ** (2 * p + 1)) ** (1.0 / (2 * p)))


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    mesh: Mesh
    dofmap: DofMap
    values: np.ndarray


def discretize_and_solve(
    spec: ProblemSpec,
    p: int,
    q: int,
    h_target: float,
    sampling: Sampling = Sampling.MIDPOINT,
    mesh: Optional[Mesh] = None,
    dump_matrix: Optional[Union[str, Path]] = None,
) -> DiscreteSolution:
    mesh = mesh if mesh is not None else generate_polar(spec, h_target, q)
    dofmap = build_dofmap(mesh, p, spec.dirichlet_tags())
    system = assemble(mesh, dofmap, spec, sampling)
    if dump_matrix is not None:
        write_matrix_market(dump_matrix, system.matrix, comment=f"k={spec.wavenumber!r} p={p}")
    return DiscreteSolution(mesh, dofmap, solve(system.matrix, system.rhs))


class StudyRunner:
    """Runs the solve-and-measure pipeline for one problem kind and discretization."""

    def __init__(
        self,
        spec: ProblemSpec,
        p: int,
        q: int = 1,
        sampling: Sampling = Sampling.MIDPOINT,
        weighted: bool = True,
        config: Optional[StudyConfig] = None,
    ):
        self.spec = spec
        self.p = p
        self.q = q
        self.sampling = sampling
        self.weighted = weighted
        self.config = config or StudyConfig()

    def target_h(self, k: float, C: float) -> float:
        """Mesh-law size, capped at the generator's largest admissible size."""
        h = h_law(k, self.p, C)
        if h > self.config.max_h:
            logger.warning(
                "Mesh law gives h=%.3f at k=%.3f; capped at %.3f", h, k, self.config.max_h
            )
            return self.config.max_h
        return h

    def run_single(
        self,
        spec: ProblemSpec,
        h_target: float,
        mesh: Optional[Mesh] = None,
        dump_matrix: Optional[Union[str, Path]] = None,
    ) -> Tuple[ErrorReport, StudyRecord]:
        logger.info(
            "Solving %s at k=%.4f (p=%d, q=%d, h_target=%.4f)",
            spec.kind.value,
            spec.wavenumber,
            self.p,
            self.q,
            h_target,
        )
        start_time = time.perf_counter()
        discrete = discretize_and_solve(
            spec, self.p, self.q, h_target, self.sampling, mesh, dump_matrix
        )
        series = solve_for(spec, self.config.mie_radius)
        report = total_field_error(
            discrete.mesh, discrete.dofmap, discrete.values, series, spec, self.weighted
        )
        elapsed = time.perf_counter() - start_time
        record = StudyRecord(
            f=float(spec.frequency),
            hmax=float(discrete.mesh.measured_h),
            err=float(report.err),
            nor=float(report.nor),
            dofs=int(discrete.dofmap.num_dofs),
            wall_seconds=float(elapsed),
        )
        logger.info("f=%.3f done: relative=%.4e in %.2fs", record.f, report.relative, elapsed)
        return report, record

    async def run_study(
        self,
        C: float,
        f_list: Sequence[float],
        out: Optional[Union[str, Path]] = None,
        max_workers: Optional[int] = None,
    ) -> List[StudyRecord]:
        """One run per frequency; records come back (and are written) in input order."""
        frequencies = [float(f) for f in f_list]
        if not frequencies:
            raise ParameterError("Frequency list is empty")
        if any(b <= a for a, b in zip(frequencies, frequencies[1:])) or frequencies[0] <= 0:
            raise ParameterError("Frequencies must be positive and strictly increasing")

        limit = asyncio.Semaphore(max_workers or self.config.max_workers)

        async def run_one(f: float) -> StudyRecord:
            spec = self.spec.with_wavenumber(2.0 * np.pi * f)
            h_target = self.target_h(spec.wavenumber, C)
            async with limit:
                try:
                    _, record = await asyncio.to_thread(self.run_single, spec, h_target)
                    record = replace(record, f=f)
                except HelmholtzError as exc:
                    raise StudyError(f, exc) from exc
            return record

        records = list(await asyncio.gather(*(run_one(f) for f in frequencies)))
        if out is not None:
            write_records(out, records)
            logger.info("Wrote %d records to %s", len(records), out)
        return records


def run_single(
    spec: ProblemSpec,
    p: int,
    q: int,
    h_target: float,
    sampling: Sampling = Sampling.MIDPOINT,
    weighted: bool = True,
) -> Tuple[ErrorReport, StudyRecord]:
    return StudyRunner(spec, p, q, sampling, weighted).run_single(spec, h_target)


async def run_study(
    spec: ProblemSpec,
    p: int,
    q: int,
    C: float,
    f_list: Sequence[float],
    out: Optional[Union[str, Path]] = None,
    sampling: Sampling = Sampling.MIDPOINT,
    weighted: bool = True,
) -> List[StudyRecord]:
    return await StudyRunner(spec, p, q, sampling, weighted).run_study(C, f_list, out)

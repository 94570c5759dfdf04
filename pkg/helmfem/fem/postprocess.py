"""Evaluation of discrete solutions and the H^1_k error against reference fields."""

import logging
from typing import Callable, Optional, Tuple

import numpy as np

from ..core.coefficients import cutoff_chi, incident_wave
from ..core.models import Branch, ErrorReport, ProblemKind, ProblemSpec
from ..element.basis import reference_basis
from ..element.quadrature import quadrature
from ..mesh.mesh import Mesh
from ..reference.mie import MieSeries
from .dofmap import DofMap

logger = logging.getLogger(__name__)

BLOCK_SIZE = 2048

# (x (E, M, 2), elements (E,)) -> (values (E, M), gradients (E, M, 2))
ExactField = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def error_degree(p: int) -> int:
    return 2 * p + 6


def _segment_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    t = np.clip(-(a * d).sum(axis=1) / (d * d).sum(axis=1), 0.0, 1.0)
    return np.linalg.norm(a + t[:, None] * d, axis=1)


def origin_distance(mesh: Mesh) -> np.ndarray:
    """Distance from the origin to every straight triangle (0 when it contains the origin)."""
    v = mesh.vertices[mesh.triangles]
    cross = [
        v[:, i, 0] * v[:, (i + 1) % 3, 1] - v[:, i, 1] * v[:, (i + 1) % 3, 0] for i in range(3)
    ]
    inside = (cross[0] >= 0) & (cross[1] >= 0) & (cross[2] >= 0)
    dist = np.minimum.reduce([_segment_distance(v[:, i], v[:, (i + 1) % 3]) for i in range(3)])
    return np.where(inside, 0.0, dist)


def select_elements(mesh: Mesh, radius: float) -> np.ndarray:
    """Indices of triangles meeting the closed disk of the given radius."""
    return np.nonzero(origin_distance(mesh) <= radius)[0]


def evaluate_solution(
    mesh: Mesh,
    dofmap: DofMap,
    solution: np.ndarray,
    ref_points: np.ndarray,
    elements: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Values (E, M), physical gradients (E, M, 2), points (E, M, 2) and determinants (E, M)."""
    phi, ref_grads = reference_basis(dofmap.p).evaluate(ref_points)
    x, jac, det = mesh.map_points(ref_points, elements)
    local = np.asarray(solution)[dofmap.element_dofs[elements]]
    values = np.einsum("mi,ti->tm", phi, local)
    ref_grad = np.einsum("mid,ti->tmd", ref_grads, local)
    # J^{-T} applied to the reference gradient
    gx = (jac[..., 1, 1] * ref_grad[..., 0] - jac[..., 1, 0] * ref_grad[..., 1]) / det
    gy = (-jac[..., 0, 1] * ref_grad[..., 0] + jac[..., 0, 0] * ref_grad[..., 1]) / det
    return values, np.stack([gx, gy], axis=-1), x, det


def fem_eval(
    mesh: Mesh, dofmap: DofMap, solution: np.ndarray, t: int, ref_point: np.ndarray
) -> Tuple[complex, np.ndarray]:
    values, grads, _, _ = evaluate_solution(
        mesh, dofmap, solution, np.asarray(ref_point, dtype=float).reshape(1, 2), np.array([t])
    )
    return complex(values[0, 0]), grads[0, 0]


def interpolate(dofmap: DofMap, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Nodal interpolant: func evaluated at every dof coordinate."""
    return np.asarray(func(dofmap.coordinates), dtype=complex)


def h1k_error(
    mesh: Mesh,
    dofmap: DofMap,
    solution: np.ndarray,
    exact: ExactField,
    k: float,
    elements: Optional[np.ndarray] = None,
    weighted: bool = True,
    degree: Optional[int] = None,
) -> Tuple[float, float]:
    """(err, nor): ||exact - u_h|| and ||exact|| in H^1_k (or H^1 when not weighted)."""
    rule = quadrature(degree or error_degree(dofmap.p))
    selected = np.arange(mesh.num_triangles) if elements is None else np.asarray(elements)
    scale = k * k if weighted else 1.0
    err2 = 0.0
    nor2 = 0.0
    for start in range(0, selected.size, BLOCK_SIZE):
        block = selected[start : start + BLOCK_SIZE]
        uh, guh, x, det = evaluate_solution(mesh, dofmap, solution, rule.points, block)
        ue, gue = exact(x, block)
        w = det * rule.weights[None, :]
        diff = np.abs(gue - guh) ** 2
        err2 += float((w * (diff.sum(axis=-1) + scale * np.abs(ue - uh) ** 2)).sum())
        ref = np.abs(gue) ** 2
        nor2 += float((w * (ref.sum(axis=-1) + scale * np.abs(ue) ** 2)).sum())
    return float(np.sqrt(err2)), float(np.sqrt(nor2))


def series_field(mesh: Mesh, series: MieSeries, spec: ProblemSpec) -> ExactField:
    """Reference field with the element-wise branch rule of the error functional."""
    inner_elements = np.zeros(mesh.num_triangles, dtype=bool)
    if spec.kind is ProblemKind.PENETRABLE:
        r = np.hypot(mesh.centroids[:, 0], mesh.centroids[:, 1])
        inner_elements = r < spec.scatterer_radius

    def field(x: np.ndarray, elements: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        e, m = x.shape[:2]
        values = np.empty((e, m), dtype=complex)
        grads = np.empty((e, m, 2), dtype=complex)
        inner = inner_elements[elements]
        for mask, branch in ((inner, Branch.FORCE_INNER), (~inner, Branch.FORCE_OUTER)):
            if mask.any():
                v, g = series.evaluate(x[mask].reshape(-1, 2), branch)
                values[mask] = np.asarray(v).reshape(-1, m)
                grads[mask] = g.reshape(-1, m, 2)
        return values, grads

    return field


def total_field_error(
    mesh: Mesh,
    dofmap: DofMap,
    solution: np.ndarray,
    series: MieSeries,
    spec: ProblemSpec,
    weighted: bool = True,
    degree: Optional[int] = None,
) -> ErrorReport:
    elements = select_elements(mesh, spec.total_field_radius)
    err, nor = h1k_error(
        mesh,
        dofmap,
        solution,
        series_field(mesh, series, spec),
        spec.wavenumber,
        elements,
        weighted,
        degree,
    )
    r = np.hypot(mesh.centroids[elements, 0], mesh.centroids[elements, 1])
    inner = int((r < spec.scatterer_radius).sum()) if spec.kind is ProblemKind.PENETRABLE else 0
    report = ErrorReport(
        err=err,
        nor=nor,
        relative=err / nor if nor > 0 else float("nan"),
        element_count=int(elements.size),
        k=spec.wavenumber,
        p=dofmap.p,
        q=mesh.q,
        measured_h=mesh.measured_h,
        weighted=weighted,
        inner_element_count=inner,
    )
    logger.info(
        "Error on %d elements: err=%.4e nor=%.4e relative=%.4e",
        report.element_count,
        err,
        nor,
        report.relative,
    )
    return report


def solution_difference(
    mesh: Mesh,
    dofmap: DofMap,
    u_a: np.ndarray,
    u_b: np.ndarray,
    k: float,
    weighted: bool = True,
    elements: Optional[np.ndarray] = None,
) -> float:
    """Relative H^1_k distance ||u_a - u_b|| / ||u_a|| of two discrete solutions."""
    rule_degree = 2 * dofmap.p + 2 * (mesh.q - 1)

    def reference(x: np.ndarray, block: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        values, grads, _, _ = evaluate_solution(mesh, dofmap, u_a, rule.points, block)
        return values, grads

    rule = quadrature(max(rule_degree, 1))
    err, nor = h1k_error(mesh, dofmap, u_b, reference, k, elements, weighted, rule.degree)
    return err / nor if nor > 0 else float("nan")


def recover_fields(
    u: np.ndarray, points: np.ndarray, spec: ProblemSpec
) -> Tuple[np.ndarray, np.ndarray]:
    """Total and scattered fields from the computed unknown u = chi u_inc + u_sca."""
    r = np.hypot(points[..., 0], points[..., 1])
    chi = np.asarray(cutoff_chi(r, spec)[0])
    u_inc = incident_wave(points, spec.wavenumber)
    return u + (1.0 - chi) * u_inc, u - chi * u_inc

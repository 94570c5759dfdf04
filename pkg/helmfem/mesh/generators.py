"""Structured mesh generators.

The polar generator lays rings of vertices at radii that include every
interface circle. Each ring carries 8 * 2^m equally spaced vertices, the
smallest such count with arc spacing <= h, so neighbouring rings differ by
a factor of 1 or 2 and no hanging nodes appear.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np

from ..core.coefficients import region_of
from ..core.errors import ParameterError
from ..core.models import BoundaryTag, ProblemKind, ProblemSpec
from .mesh import Mesh, build_mesh

logger = logging.getLogger(__name__)

MAX_H_TARGET = 0.5
MIN_RING_COUNT = 8


def ring_count(radius: float, h_target: float) -> int:
    count = MIN_RING_COUNT
    while 2.0 * math.pi * radius / count > h_target:
        count *= 2
    return count


def ring_radii(breakpoints: Sequence[float], h_target: float) -> List[float]:
    """Radii of all vertex rings; breakpoints are kept exactly."""
    radii = [float(breakpoints[0])]
    for inner, outer in zip(breakpoints[:-1], breakpoints[1:]):
        width = outer - inner
        if width < h_target:
            raise ParameterError(
                f"h_target={h_target} is too large to resolve the annulus [{inner}, {outer}]"
            )
        layers = int(math.ceil(width / h_target - 1e-9))
        radii.extend(inner + width * i / layers for i in range(1, layers))
        radii.append(float(outer))
    return radii


def _ring(radius: float, count: int) -> np.ndarray:
    angles = 2.0 * math.pi * np.arange(count) / count
    return np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)


def _layer(inner: int, n_in: int, outer: int, n_out: int) -> List[Tuple[int, int, int]]:
    """Triangles between two rings given their first vertex index and count."""
    tris = []
    if n_out == n_in:
        for i in range(n_in):
            a0, a1 = inner + i, inner + (i + 1) % n_in
            b0, b1 = outer + i, outer + (i + 1) % n_out
            if i % 2 == 0:
                tris += [(a0, a1, b1), (a0, b1, b0)]
            else:
                tris += [(a0, a1, b0), (a1, b1, b0)]
    elif n_out == 2 * n_in:
        for i in range(n_in):
            a0, a1 = inner + i, inner + (i + 1) % n_in
            b0, bm, b2 = outer + 2 * i, outer + 2 * i + 1, outer + (2 * i + 2) % n_out
            tris += [(a0, bm, b0), (a0, a1, bm), (a1, b2, bm)]
    else:
        raise ParameterError(f"Ring counts {n_in} -> {n_out} are not conforming")
    return tris


def polar_triangulation(
    radii: Sequence[float], h_target: float, central_fan: bool
) -> Tuple[np.ndarray, np.ndarray]:
    """Vertices and triangles of a ring mesh; radii[0] == 0 requires a central fan."""
    counts: List[int] = []
    for radius in radii:
        if central_fan and radius == 0.0:
            counts.append(1)
            continue
        target = ring_count(radius, h_target)
        if counts and counts[-1] > 1:
            target = min(max(target, counts[-1]), 2 * counts[-1])
        counts.append(target)

    blocks, offsets, start = [], [], 0
    for radius, count in zip(radii, counts):
        offsets.append(start)
        blocks.append(np.zeros((1, 2)) if count == 1 else _ring(radius, count))
        start += count
    vertices = np.concatenate(blocks)

    tris: List[Tuple[int, int, int]] = []
    for j in range(len(radii) - 1):
        if counts[j] == 1:
            n = counts[j + 1]
            first = offsets[j + 1]
            tris += [(offsets[j], first + i, first + (i + 1) % n) for i in range(n)]
        else:
            tris += _layer(offsets[j], counts[j], offsets[j + 1], counts[j + 1])
    return vertices, np.array(tris, dtype=np.int64)


def generate_polar(spec: ProblemSpec, h_target: float, q: int = 1) -> Mesh:
    """Conforming mesh of B_5 (penetrable) or the annulus B_5 minus B_1 (sound-soft)."""
    if not 0 < h_target <= MAX_H_TARGET:
        raise ParameterError(f"h_target must lie in (0, {MAX_H_TARGET}], got {h_target}")
    if q < 1:
        raise ParameterError(f"Geometry degree must be >= 1, got {q}")

    circles = spec.interface_radii()
    penetrable = spec.kind is ProblemKind.PENETRABLE
    breakpoints = ((0.0,) if penetrable else ()) + circles
    radii = ring_radii(breakpoints, h_target)
    vertices, triangles = polar_triangulation(radii, h_target, central_fan=penetrable)

    centroids = vertices[triangles].mean(axis=1)
    regions = np.asarray(region_of(centroids, spec))
    tag_radii = {spec.outer_radius: BoundaryTag.OUTER_CIRCLE}
    if not penetrable:
        tag_radii[spec.scatterer_radius] = BoundaryTag.INNER_CIRCLE

    mesh = build_mesh(
        vertices, triangles, q=q, region_tags=regions, tag_radii=tag_radii, circles=circles
    )
    logger.info(
        "Polar mesh (%s): %d triangles, %d rings, h_target=%.4f, measured h=%.4f, q=%d",
        spec.kind.value,
        mesh.num_triangles,
        len(radii),
        h_target,
        mesh.measured_h,
        q,
    )
    return mesh


def generate_square(n: int, q: int = 1) -> Mesh:
    """Unit square split into n x n cells, each cut by its rising diagonal."""
    if n < 1:
        raise ParameterError(f"Square mesh needs n >= 1, got {n}")
    ticks = np.linspace(0.0, 1.0, n + 1)
    xx, yy = np.meshgrid(ticks, ticks, indexing="xy")
    vertices = np.stack([xx.ravel(), yy.ravel()], axis=1)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    v00 = (j * (n + 1) + i).ravel()
    v10, v01, v11 = v00 + 1, v00 + n + 1, v00 + n + 2
    triangles = np.concatenate(
        [np.stack([v00, v10, v11], axis=1), np.stack([v00, v11, v01], axis=1)]
    )
    return build_mesh(vertices, triangles, q=q)

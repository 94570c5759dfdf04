"""Triangular meshes with polynomial element maps of degree q."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import MeshValidityError
from ..core.models import BoundaryTag, Region
from ..element.basis import LOCAL_EDGES, lattice, node_count, reference_basis
from ..element.quadrature import quadrature

logger = logging.getLogger(__name__)

CIRCLE_TOLERANCE = 1e-9
SHAPE_RATIO_LIMIT = 10.0
DET_RATIO_LIMIT = 4.0


@dataclass(frozen=True)
class EdgeTopology:
    edges: np.ndarray         # (ne, 2), lower vertex index first
    element_edges: np.ndarray  # (nt, 3) global edge of each local edge
    counts: np.ndarray         # (ne,) number of adjacent elements


def edge_topology(triangles: np.ndarray) -> EdgeTopology:
    local = triangles[:, np.array(LOCAL_EDGES)]
    ordered = np.sort(local, axis=2).reshape(-1, 2)
    edges, inverse = np.unique(ordered, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(triangles.shape[0], 3)
    return EdgeTopology(edges=edges, element_edges=inverse, counts=np.bincount(inverse.ravel()))


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray
    geometry_nodes: np.ndarray
    q: int
    region_tags: np.ndarray
    boundary_edges: np.ndarray  # rows (triangle, local edge, BoundaryTag)
    measured_h: float
    circles: Tuple[float, ...] = field(default=())

    @property
    def num_triangles(self) -> int:
        return int(self.triangles.shape[0])

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @cached_property
    def topology(self) -> EdgeTopology:
        return edge_topology(self.triangles)

    @cached_property
    def centroids(self) -> np.ndarray:
        """Straight-vertex barycenters."""
        return self.vertices[self.triangles].mean(axis=1)

    def map_points(
        self, ref_points: np.ndarray, elements: Optional[np.ndarray] = None
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Physical points (E, M, 2), Jacobians (E, M, 2, 2) and determinants (E, M)."""
        nodes = self.geometry_nodes if elements is None else self.geometry_nodes[elements]
        values, grads = reference_basis(self.q).evaluate(ref_points)
        x = np.einsum("mi,tia->tma", values, nodes)
        jac = np.einsum("mib,tia->tmab", grads, nodes)
        det = jac[..., 0, 0] * jac[..., 1, 1] - jac[..., 0, 1] * jac[..., 1, 0]
        bad = det <= 0
        if bad.any():
            local = int(np.argwhere(bad)[0, 0])
            index = local if elements is None else int(np.asarray(elements)[local])
            raise MeshValidityError(index, float(det.ravel()[np.argmax(bad.ravel())]))
        return x, jac, det

    def area(self) -> float:
        rule = quadrature(2 * self.q)
        _, _, det = self.map_points(rule.points)
        return float((det * rule.weights).sum())

    def boundary_dof_edges(self, tags: Sequence[BoundaryTag]) -> np.ndarray:
        """Rows of boundary_edges whose tag is in ``tags``."""
        wanted = np.isin(self.boundary_edges[:, 2], [int(t) for t in tags])
        return self.boundary_edges[wanted]


def element_map(
    mesh: Mesh, t: int, ref_point: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, float]:
    """x = F_K(ref_point), its Jacobian and determinant for triangle t."""
    x, jac, det = mesh.map_points(np.asarray(ref_point, dtype=float).reshape(1, 2), np.array([t]))
    return x[0, 0], jac[0, 0], float(det[0, 0])


def measured_h(mesh: Mesh) -> float:
    return _max_edge_length(mesh.vertices, mesh.topology.edges)


def _max_edge_length(vertices: np.ndarray, edges: np.ndarray) -> float:
    lengths = np.linalg.norm(vertices[edges[:, 0]] - vertices[edges[:, 1]], axis=1)
    return float(lengths.max())


def orient_counterclockwise(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    tri = triangles.copy()
    p = vertices[tri]
    signed = (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (
        p[:, 1, 1] - p[:, 0, 1]
    ) * (p[:, 2, 0] - p[:, 0, 0])
    flip = signed < 0
    tri[flip] = tri[flip][:, [0, 2, 1]]
    return tri


def _on_circle(r: np.ndarray, radius: float) -> np.ndarray:
    return np.abs(r - radius) <= CIRCLE_TOLERANCE * max(1.0, radius)


def curved_edge_radii(
    vertices: np.ndarray, edges: np.ndarray, circles: Sequence[float]
) -> np.ndarray:
    """Radius of the circle carrying each edge, NaN for straight edges."""
    r = np.hypot(vertices[:, 0], vertices[:, 1])
    out = np.full(edges.shape[0], np.nan)
    for radius in circles:
        hit = _on_circle(r[edges[:, 0]], radius) & _on_circle(r[edges[:, 1]], radius)
        out[hit] = radius
    return out


def _arc_points(
    va: np.ndarray, vb: np.ndarray, radius: np.ndarray, t: np.ndarray
) -> np.ndarray:
    ta = np.arctan2(va[..., 1], va[..., 0])
    tb = np.arctan2(vb[..., 1], vb[..., 0])
    delta = np.angle(np.exp(1j * (tb - ta)))
    theta = ta + t * delta
    return np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=-1)


def build_geometry_nodes(
    vertices: np.ndarray,
    triangles: np.ndarray,
    q: int,
    circles: Sequence[float] = (),
    topology: Optional[EdgeTopology] = None,
) -> np.ndarray:
    """Lagrange geometry nodes (nt, (q+1)(q+2)/2, 2).

    Edges with both vertices on one of ``circles`` get their nodes on the arc;
    edge nodes are computed once per global edge so neighbours share them
    bitwise. Interior nodes blend the arc-minus-chord offsets of the curved
    edges.
    """
    nt = triangles.shape[0]
    corners = vertices[triangles]
    if q == 1:
        return corners.copy()
    topo = topology or edge_topology(triangles)
    radii = curved_edge_radii(vertices, topo.edges, circles)
    curved = ~np.isnan(radii)

    ts = np.arange(1, q) / q
    va = vertices[topo.edges[:, 0]][:, None, :]
    vb = vertices[topo.edges[:, 1]][:, None, :]
    edge_nodes = va + ts[None, :, None] * (vb - va)
    if curved.any():
        edge_nodes[curved] = _arc_points(
            va[curved], vb[curved], radii[curved][:, None], ts[None, :]
        )

    nodes = np.empty((nt, node_count(q), 2))
    nodes[:, :3] = corners
    for e, (a, b) in enumerate(LOCAL_EDGES):
        g = topo.element_edges[:, e]
        forward = triangles[:, a] < triangles[:, b]
        block = edge_nodes[g]
        block = np.where(forward[:, None, None], block, block[:, ::-1])
        nodes[:, 3 + e * (q - 1) : 3 + (e + 1) * (q - 1)] = block

    interior = lattice(q)[3 + 3 * (q - 1) :]
    if interior.size:
        lam = np.stack([1.0 - interior[:, 0] - interior[:, 1], interior[:, 0], interior[:, 1]], 1)
        x = np.einsum("mi,tia->tma", lam, corners)
        for e, (a, b) in enumerate(LOCAL_EDGES):
            radius = radii[topo.element_edges[:, e]]
            hit = ~np.isnan(radius)
            if not hit.any():
                continue
            weight = lam[:, a] + lam[:, b]
            t = lam[:, b] / weight
            pa = corners[hit, a][:, None, :]
            pb = corners[hit, b][:, None, :]
            arc = _arc_points(pa, pb, radius[hit][:, None], t[None, :])
            chord = pa + t[None, :, None] * (pb - pa)
            x[hit] += weight[None, :, None] * (arc - chord)
        nodes[:, 3 + 3 * (q - 1) :] = x
    return nodes


def find_boundary_edges(
    vertices: np.ndarray,
    triangles: np.ndarray,
    tag_radii: Dict[float, BoundaryTag],
    topology: Optional[EdgeTopology] = None,
) -> np.ndarray:
    """(triangle, local edge, tag) for every edge with a single neighbour."""
    topo = topology or edge_topology(triangles)
    on_boundary = topo.counts[topo.element_edges] == 1
    tri_idx, local_idx = np.nonzero(on_boundary)
    r = np.hypot(vertices[:, 0], vertices[:, 1])
    pairs = np.array(LOCAL_EDGES)[local_idx]
    ra = r[triangles[tri_idx, pairs[:, 0]]]
    rb = r[triangles[tri_idx, pairs[:, 1]]]
    tags = np.full(tri_idx.size, int(BoundaryTag.OTHER))
    for radius, tag in tag_radii.items():
        tags[_on_circle(ra, radius) & _on_circle(rb, radius)] = int(tag)
    return np.stack([tri_idx, local_idx, tags], axis=1).astype(np.int64).reshape(-1, 3)


def build_mesh(
    vertices: np.ndarray,
    triangles: np.ndarray,
    q: int = 1,
    region_tags: Optional[np.ndarray] = None,
    tag_radii: Optional[Dict[float, BoundaryTag]] = None,
    circles: Sequence[float] = (),
    geometry_nodes: Optional[np.ndarray] = None,
) -> Mesh:
    """Assemble a validated Mesh from raw vertex and connectivity arrays."""
    vertices = np.asarray(vertices, dtype=float)
    triangles = orient_counterclockwise(vertices, np.asarray(triangles, dtype=np.int64))
    topo = edge_topology(triangles)
    if geometry_nodes is None:
        geometry_nodes = build_geometry_nodes(vertices, triangles, q, circles, topo)
    if region_tags is None:
        region_tags = np.full(triangles.shape[0], int(Region.PHYSICAL))
    mesh = Mesh(
        vertices=vertices,
        triangles=triangles,
        geometry_nodes=geometry_nodes,
        q=q,
        region_tags=np.asarray(region_tags, dtype=np.int64),
        boundary_edges=find_boundary_edges(vertices, triangles, tag_radii or {}, topo),
        measured_h=_max_edge_length(vertices, topo.edges),
        circles=tuple(circles),
    )
    mesh.map_points(quadrature(max(2 * q - 2, 1)).points)
    logger.debug(
        "Mesh built: %d vertices, %d triangles, q=%d, h=%.4f",
        mesh.num_vertices,
        mesh.num_triangles,
        q,
        mesh.measured_h,
    )
    return mesh


@dataclass(frozen=True)
class QualityReport:
    h: np.ndarray
    shape_ratio: np.ndarray
    det_ratio: np.ndarray
    flagged: np.ndarray

    def summary(self) -> Dict[str, float]:
        return {
            "elements": float(self.h.size),
            "h_max": float(self.h.max()),
            "h_min": float(self.h.min()),
            "shape_ratio_max": float(self.shape_ratio.max()),
            "det_ratio_max": float(self.det_ratio.max()),
            "flagged": float(self.flagged.size),
        }


def mesh_quality_report(mesh: Mesh) -> QualityReport:
    p = mesh.vertices[mesh.triangles]
    sides = np.linalg.norm(p[:, [1, 2, 0]] - p, axis=2)
    diameter = sides.max(axis=1)
    area = 0.5 * np.abs(
        (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
        - (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0])
    )
    inradius = 2.0 * area / sides.sum(axis=1)
    shape = diameter / inradius

    _, _, det = mesh.map_points(quadrature(2 * mesh.q).points)
    det_ratio = det.max(axis=1) / det.min(axis=1)
    flagged = np.nonzero((shape > SHAPE_RATIO_LIMIT) | (det_ratio > DET_RATIO_LIMIT))[0]
    if flagged.size:
        logger.warning("%d elements violate the quality limits", flagged.size)
    return QualityReport(h=diameter, shape_ratio=shape, det_ratio=det_ratio, flagged=flagged)

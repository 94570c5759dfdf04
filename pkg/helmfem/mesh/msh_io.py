"""Gmsh MSH 2.2 ASCII reader and writer (3- and 6-node triangles)."""

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.coefficients import region_of
from ..core.errors import MeshConformityError, MeshFormatError
from ..core.models import BoundaryTag, ProblemKind, ProblemSpec
from .mesh import Mesh, build_mesh, orient_counterclockwise

logger = logging.getLogger(__name__)

TRIANGLE3 = 2
TRIANGLE6 = 9
LINE2 = 1
LINE3 = 8
POINT = 15
_IGNORED_TYPES = {LINE2, LINE3, POINT}
_CROSSING_TOLERANCE = 1e-9


def _sections(lines: List[str]) -> Dict[str, List[str]]:
    sections: Dict[str, List[str]] = {}
    current: Optional[str] = None
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("$End"):
            current = None
        elif line.startswith("$"):
            current = line[1:]
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    return sections


def _records(body: List[str]) -> Iterator[List[str]]:
    count = int(body[0])
    if len(body) - 1 < count:
        raise MeshFormatError(f"Section declares {count} records but holds {len(body) - 1}")
    for line in body[1 : count + 1]:
        yield line.split()


def _check_crossings(
    vertices: np.ndarray, triangles: np.ndarray, circles: Tuple[float, ...]
) -> None:
    r = np.hypot(vertices[:, 0], vertices[:, 1])
    pairs = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    ra, rb = r[pairs[:, 0]], r[pairs[:, 1]]
    for radius in circles:
        da, db = ra - radius, rb - radius
        crossing = (da * db < 0) & (np.minimum(np.abs(da), np.abs(db)) > _CROSSING_TOLERANCE)
        if crossing.any():
            edge = tuple(int(v) for v in pairs[np.argmax(crossing)])
            raise MeshConformityError(edge, radius)


def read_msh(path: Union[str, Path], spec: Optional[ProblemSpec] = None) -> Mesh:
    """Read an MSH 2.2 ASCII file.

    With a ProblemSpec the mesh is checked for interface conformity, regions
    come from barycenter radii and boundary edges on the scatterer or outer
    circle are tagged. Without one every element is Physical and every
    boundary edge is tagged Other.
    """
    text = Path(path).read_text()
    sections = _sections(text.splitlines())
    header = sections.get("MeshFormat")
    if not header:
        raise MeshFormatError("Missing $MeshFormat section")
    fields = header[0].split()
    if fields[0] != "2.2" and not fields[0].startswith("2.2"):
        raise MeshFormatError(f"Unsupported MSH version {fields[0]}; expected 2.2")
    if len(fields) > 1 and fields[1] != "0":
        raise MeshFormatError("Binary MSH files are not supported")
    if "Nodes" not in sections or "Elements" not in sections:
        raise MeshFormatError("Missing $Nodes or $Elements section")

    node_ids: Dict[int, int] = {}
    coords = []
    for rec in _records(sections["Nodes"]):
        node_ids[int(rec[0])] = len(coords)
        coords.append((float(rec[1]), float(rec[2])))
    all_nodes = np.array(coords, dtype=float)

    connectivity = []
    element_type: Optional[int] = None
    for rec in _records(sections["Elements"]):
        etype, ntags = int(rec[1]), int(rec[2])
        if etype in _IGNORED_TYPES:
            continue
        if etype not in (TRIANGLE3, TRIANGLE6):
            raise MeshFormatError(f"Unsupported element type {etype}")
        if element_type is not None and etype != element_type:
            raise MeshFormatError("Mixed 3-node and 6-node triangles are not supported")
        element_type = etype
        connectivity.append([node_ids[int(v)] for v in rec[3 + ntags :]])
    if element_type is None:
        raise MeshFormatError("File contains no triangle elements")
    conn = np.array(connectivity, dtype=np.int64)

    corner_ids, triangles = np.unique(conn[:, :3], return_inverse=True)
    triangles = np.asarray(triangles).reshape(-1, 3)
    vertices = all_nodes[corner_ids]
    oriented = orient_counterclockwise(vertices, triangles)
    flipped = np.any(oriented != triangles, axis=1)

    q = 1
    geometry_nodes = None
    if element_type == TRIANGLE6:
        q = 2
        # gmsh 6-node order: 3 corners, then midpoints of edges 01, 12, 20
        nodes = all_nodes[conn]
        nodes[flipped] = nodes[flipped][:, [0, 2, 1, 5, 4, 3]]
        geometry_nodes = nodes

    regions: Optional[np.ndarray] = None
    tag_radii: Dict[float, BoundaryTag] = {}
    circles: Tuple[float, ...] = ()
    if spec is not None:
        circles = spec.interface_radii()
        _check_crossings(vertices, oriented, circles)
        regions = np.asarray(region_of(vertices[oriented].mean(axis=1), spec))
        tag_radii[spec.outer_radius] = BoundaryTag.OUTER_CIRCLE
        if spec.kind is ProblemKind.SOUND_SOFT:
            tag_radii[spec.scatterer_radius] = BoundaryTag.INNER_CIRCLE

    mesh = build_mesh(
        vertices,
        oriented,
        q=q,
        region_tags=regions,
        tag_radii=tag_radii,
        circles=circles,
        geometry_nodes=geometry_nodes,
    )
    logger.info("Read %s: %d triangles (q=%d)", path, mesh.num_triangles, q)
    return mesh


def write_msh(mesh: Mesh, path: Union[str, Path]) -> None:
    """Write the mesh as MSH 2.2 ASCII; physical tag = region + 1."""
    if mesh.q > 2:
        raise MeshFormatError(f"MSH export supports q <= 2, got q={mesh.q}")
    nodes = [(float(x), float(y)) for x, y in mesh.vertices]
    elements: List[List[int]] = []

    if mesh.q == 2:
        topo = mesh.topology
        mid_ids = np.arange(topo.edges.shape[0]) + mesh.num_vertices
        mids = np.empty((topo.edges.shape[0], 2))
        for e in range(3):
            mids[topo.element_edges[:, e]] = mesh.geometry_nodes[:, 3 + e]
        nodes.extend((float(x), float(y)) for x, y in mids)
        conn = np.concatenate([mesh.triangles, mid_ids[topo.element_edges]], axis=1)
        etype = TRIANGLE6
    else:
        conn = mesh.triangles
        etype = TRIANGLE3

    for tri, edge, tag in mesh.boundary_edges:
        a, b = ((0, 1), (1, 2), (2, 0))[edge]
        line = [int(mesh.triangles[tri, a]), int(mesh.triangles[tri, b])]
        elements.append([LINE2, 10 + int(tag), 10 + int(tag)] + line)
    for t in range(mesh.num_triangles):
        physical = int(mesh.region_tags[t]) + 1
        elements.append([etype, physical, physical] + [int(v) for v in conn[t]])

    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(nodes))]
    out += [f"{i + 1} {x!r} {y!r} 0" for i, (x, y) in enumerate(nodes)]
    out += ["$EndNodes", "$Elements", str(len(elements))]
    for i, (etype_i, phys, elem, *verts) in enumerate(elements):
        ids = " ".join(str(v + 1) for v in verts)
        out.append(f"{i + 1} {etype_i} 2 {phys} {elem} {ids}")
    out.append("$EndElements")
    Path(path).write_text("\n".join(out) + "\n")
    logger.info("Wrote %s: %d nodes, %d triangles", path, len(nodes), mesh.num_triangles)

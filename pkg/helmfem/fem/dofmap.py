"""Global numbering of degree-p Lagrange degrees of freedom.

Vertex dofs come first, then p-1 dofs per global edge ordered from the
lower to the higher vertex index, then element-interior dofs.
"""

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..core.models import BoundaryTag
from ..element.basis import LOCAL_EDGES, lattice, node_count, reference_basis
from ..mesh.mesh import Mesh

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DofMap:
    p: int
    num_dofs: int
    element_dofs: np.ndarray    # (nt, (p+1)(p+2)/2)
    dirichlet_mask: np.ndarray  # (num_dofs,) bool
    coordinates: np.ndarray     # (num_dofs, 2)

    @property
    def free_dofs(self) -> np.ndarray:
        return np.nonzero(~self.dirichlet_mask)[0]


def build_dofmap(mesh: Mesh, p: int, dirichlet_tags: Iterable[BoundaryTag] = ()) -> DofMap:
    reference_basis(p)  # validates p
    tri = mesh.triangles
    topo = mesh.topology
    nt, nv, ne = mesh.num_triangles, mesh.num_vertices, topo.edges.shape[0]
    per_edge = p - 1
    per_cell = node_count(p) - 3 - 3 * per_edge

    dofs = np.empty((nt, node_count(p)), dtype=np.int64)
    dofs[:, :3] = tri
    steps = np.arange(per_edge)
    for e, (a, b) in enumerate(LOCAL_EDGES):
        forward = (tri[:, a] < tri[:, b])[:, None]
        offset = np.where(forward, steps[None, :], per_edge - 1 - steps[None, :])
        base = nv + topo.element_edges[:, e] * per_edge
        dofs[:, 3 + e * per_edge : 3 + (e + 1) * per_edge] = base[:, None] + offset
    interior_base = nv + ne * per_edge
    dofs[:, 3 + 3 * per_edge :] = (
        interior_base + np.arange(nt)[:, None] * per_cell + np.arange(per_cell)[None, :]
    )
    num_dofs = interior_base + nt * per_cell

    x, _, _ = mesh.map_points(lattice(p))
    coordinates = np.empty((num_dofs, 2))
    coordinates[dofs.ravel()] = x.reshape(-1, 2)

    mask = np.zeros(num_dofs, dtype=bool)
    constrained = mesh.boundary_dof_edges(list(dirichlet_tags))
    for tri_index, edge, _ in constrained:
        a, b = LOCAL_EDGES[edge]
        row = dofs[tri_index]
        mask[row[a]] = True
        mask[row[b]] = True
        mask[row[3 + edge * per_edge : 3 + (edge + 1) * per_edge]] = True

    logger.debug("Dof map: p=%d, %d dofs, %d constrained", p, num_dofs, int(mask.sum()))
    return DofMap(
        p=p, num_dofs=int(num_dofs), element_dofs=dofs, dirichlet_mask=mask, coordinates=coordinates
    )

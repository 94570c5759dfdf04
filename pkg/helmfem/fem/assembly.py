"""Assembly of -k^2 (mu u, v) + (A grad u, grad v) = (f, v) on curved triangles."""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..core.coefficients import Medium, ScattererMedium
from ..core.errors import ParameterError
from ..core.models import ProblemSpec, Sampling
from ..element.basis import lattice, reference_basis
from ..element.quadrature import quadrature
from ..mesh.mesh import Mesh
from .dofmap import DofMap
from .linalg import CompressedRowMatrix

logger = logging.getLogger(__name__)

BLOCK_SIZE = 2048
_CENTROID = np.array([[1.0 / 3.0, 1.0 / 3.0]])


@dataclass(frozen=True, eq=False)
class SparseSystem:
    matrix: CompressedRowMatrix
    rhs: np.ndarray
    dof_count: int
    eliminated: bool = False


def assembly_degree(p: int, q: int) -> int:
    return 2 * p + 2 * (q - 1) + 2


def _inverse_transpose_gradients(
    jac: np.ndarray, det: np.ndarray, ref_grads: np.ndarray
) -> np.ndarray:
    inv = np.empty_like(jac)
    inv[..., 0, 0] = jac[..., 1, 1]
    inv[..., 0, 1] = -jac[..., 0, 1]
    inv[..., 1, 0] = -jac[..., 1, 0]
    inv[..., 1, 1] = jac[..., 0, 0]
    inv /= det[..., None, None]
    # grad_x phi = J^{-T} grad_ref phi
    return np.einsum("tqba,qib->tqia", inv, ref_grads)


class _CoefficientSampler:
    """Evaluates mu and A for a block of elements at their quadrature points."""

    def __init__(self, mesh: Mesh, medium: Medium, sampling: Sampling, ref_points: np.ndarray):
        self.mesh = mesh
        self.medium = medium
        self.sampling = sampling
        self.ref_points = ref_points
        self.interp_values: Optional[np.ndarray] = None
        self.interp_nodes: Optional[np.ndarray] = None
        if sampling is Sampling.INTERPOLATED and mesh.q > 1:
            degree = mesh.q - 1
            self.interp_nodes = lattice(degree)
            self.interp_values, _ = reference_basis(degree).evaluate(ref_points)

    def _eval(self, points: np.ndarray, regions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """points (E, M, 2), regions (E,) -> mu (E, M), A (E, M, 2, 2)."""
        e, m = points.shape[:2]
        flat = points.reshape(-1, 2)
        reg = np.repeat(regions, m)
        mu = self.medium.mu(flat, reg).reshape(e, m)
        a = self.medium.tensor(flat, reg).reshape(e, m, 2, 2)
        return mu, a

    def sample(
        self, elements: np.ndarray, x_quad: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        regions = self.mesh.region_tags[elements]
        nq = x_quad.shape[1]
        if self.sampling is Sampling.PERPOINT:
            return self._eval(x_quad, regions)
        if self.sampling is Sampling.INTERPOLATED and self.interp_nodes is not None:
            assert self.interp_values is not None
            nodes, _, _ = self.mesh.map_points(self.interp_nodes, elements)
            mu_n, a_n = self._eval(nodes, regions)
            mu = np.einsum("qi,ti->tq", self.interp_values, mu_n)
            a = np.einsum("qi,tiab->tqab", self.interp_values, a_n)
            return mu, a
        centers, _, _ = self.mesh.map_points(_CENTROID, elements)
        mu_c, a_c = self._eval(centers, regions)
        return np.repeat(mu_c, nq, axis=1), np.repeat(a_c, nq, axis=1)


def assemble(
    mesh: Mesh,
    dofmap: DofMap,
    problem: Union[ProblemSpec, Medium],
    sampling: Sampling = Sampling.MIDPOINT,
    eliminate: bool = True,
) -> SparseSystem:
    """Global matrix and load vector; Dirichlet dofs eliminated with zero data by default."""
    medium = ScattererMedium(problem) if isinstance(problem, ProblemSpec) else problem
    if dofmap.element_dofs.shape[0] != mesh.num_triangles:
        raise ParameterError("Dof map does not match the mesh")
    p = dofmap.p
    basis = reference_basis(p)
    if dofmap.element_dofs.shape[1] != basis.node_count:
        raise ParameterError("Dof map does not match the polynomial degree")

    rule = quadrature(assembly_degree(p, mesh.q))
    phi, ref_grads = basis.evaluate(rule.points)
    sampler = _CoefficientSampler(mesh, medium, sampling, rule.points)
    k2 = medium.wavenumber**2

    nl = basis.node_count
    element_matrices = np.empty((mesh.num_triangles, nl, nl), dtype=complex)
    element_loads = np.empty((mesh.num_triangles, nl), dtype=complex)
    for start in range(0, mesh.num_triangles, BLOCK_SIZE):
        elements = np.arange(start, min(start + BLOCK_SIZE, mesh.num_triangles))
        x, jac, det = mesh.map_points(rule.points, elements)
        grads = _inverse_transpose_gradients(jac, det, ref_grads)
        wdet = det * rule.weights[None, :]
        mu, a = sampler.sample(elements, x)

        mass = np.einsum("tq,qi,qj->tij", wdet * mu, phi, phi, optimize=True)
        stiffness = np.einsum("tq,tqia,tqab,tqjb->tij", wdet, grads, a, grads, optimize=True)
        element_matrices[elements] = stiffness - k2 * mass

        f = medium.source(x.reshape(-1, 2)).reshape(x.shape[:2])
        element_loads[elements] = np.einsum("tq,qi->ti", wdet * f, phi)

    dofs = dofmap.element_dofs
    rows = np.repeat(dofs, nl, axis=1).ravel()
    cols = np.tile(dofs, (1, nl)).ravel()
    n = dofmap.num_dofs
    matrix = sp.coo_matrix((element_matrices.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    flat = dofs.ravel()
    loads = element_loads.ravel()
    rhs = np.bincount(flat, loads.real, minlength=n) + 1j * np.bincount(
        flat, loads.imag, minlength=n
    )
    system = SparseSystem(CompressedRowMatrix.from_scipy(matrix), rhs, n)
    logger.info(
        "Assembled %d dofs (%d nonzeros, p=%d, q=%d, %s sampling)",
        n,
        matrix.nnz,
        p,
        mesh.q,
        sampling.value,
    )
    if eliminate:
        return apply_dirichlet_inhomogeneous(system, dofmap, None)
    return system


def apply_dirichlet_inhomogeneous(
    system: SparseSystem,
    dofmap: DofMap,
    boundary_values: Optional[Callable[[np.ndarray], np.ndarray]],
) -> SparseSystem:
    """Impose u = g on masked dofs by symmetric elimination (g = 0 when omitted)."""
    if system.eliminated:
        raise ParameterError("Dirichlet conditions were already applied to this system")
    fixed = dofmap.dirichlet_mask
    g = np.zeros(system.dof_count, dtype=complex)
    if boundary_values is not None and fixed.any():
        g[fixed] = np.asarray(boundary_values(dofmap.coordinates[fixed]), dtype=complex)

    a = system.matrix.csr
    rhs = system.rhs - a @ g
    rhs[fixed] = g[fixed]
    keep = sp.diags((~fixed).astype(float))
    pin = sp.diags(fixed.astype(float))
    reduced = (keep @ a @ keep + pin).tocsr()
    reduced.eliminate_zeros()
    return replace(
        system, matrix=CompressedRowMatrix.from_scipy(reduced), rhs=rhs, eliminated=True
    )

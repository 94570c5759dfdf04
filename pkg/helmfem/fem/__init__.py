from .dofmap import DofMap, build_dofmap
from .assembly import SparseSystem, assemble, apply_dirichlet_inhomogeneous
from .linalg import CompressedRowMatrix, solve, spmv
from .postprocess import h1k_error, total_field_error, recover_fields

__all__ = [
    "DofMap",
    "build_dofmap",
    "SparseSystem",
    "assemble",
    "apply_dirichlet_inhomogeneous",
    "CompressedRowMatrix",
    "solve",
    "spmv",
    "h1k_error",
    "total_field_error",
    "recover_fields",
]

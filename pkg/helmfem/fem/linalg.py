"""Complex sparse matrices and the direct solve used for every Helmholtz system."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import scipy.io
import scipy.sparse as sp
from scipy.sparse.linalg import splu
from tenacity import (
    Retrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
)

from ..core.errors import ConvergenceError, ParameterError, SolverError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
MAX_REFINEMENTS = 3


@dataclass(frozen=True, eq=False)
class CompressedRowMatrix:
    """Square complex CSR matrix with sorted, duplicate-free rows."""

    csr: sp.csr_matrix

    @classmethod
    def from_scipy(cls, matrix: sp.spmatrix) -> "CompressedRowMatrix":
        csr = sp.csr_matrix(matrix, dtype=complex)
        if csr.shape[0] != csr.shape[1]:
            raise ParameterError(f"Matrix must be square, got shape {csr.shape}")
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr=csr)

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "CompressedRowMatrix":
        return cls.from_scipy(sp.csr_matrix(np.asarray(matrix, dtype=complex)))

    @property
    def n(self) -> int:
        return int(self.csr.shape[0])

    @property
    def row_offsets(self) -> np.ndarray:
        return self.csr.indptr

    @property
    def column_indices(self) -> np.ndarray:
        return self.csr.indices

    @property
    def values(self) -> np.ndarray:
        return self.csr.data

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()


def spmv(m: CompressedRowMatrix, x: np.ndarray) -> np.ndarray:
    vec = np.asarray(x, dtype=complex)
    if vec.shape != (m.n,):
        raise ParameterError(f"Dimension mismatch: matrix is {m.n}x{m.n}, vector has {vec.shape}")
    return np.asarray(m.csr @ vec)


class _ResidualAboveTolerance(Exception):
    def __init__(self, residual: float):
        super().__init__(f"relative residual {residual:.3e}")
        self.residual = residual


def _relative_residual(
    m: CompressedRowMatrix, x: np.ndarray, rhs: np.ndarray, b_norm: float
) -> float:
    return float(np.linalg.norm(rhs - m.csr @ x)) / b_norm


def _check_structure(csr: sp.csr_matrix) -> None:
    empty_rows = np.nonzero(np.diff(csr.indptr) == 0)[0]
    if empty_rows.size:
        row = int(empty_rows[0])
        raise SolverError(f"Structurally singular: row {row} is empty", row=row)
    empty_cols = np.setdiff1d(np.arange(csr.shape[1]), csr.indices)
    if empty_cols.size:
        raise SolverError(
            f"Structurally singular: column {empty_cols[0]} is empty", row=int(empty_cols[0])
        )


def solve(
    m: CompressedRowMatrix,
    b: np.ndarray,
    tol: float = DEFAULT_TOLERANCE,
    max_refinements: int = MAX_REFINEMENTS,
) -> np.ndarray:
    """Return x with ||m x - b|| <= tol ||b||.

    SuperLU with a COLAMD column ordering, followed by up to
    ``max_refinements`` steps of iterative refinement.
    """
    rhs = np.asarray(b, dtype=complex)
    if rhs.shape != (m.n,):
        raise ParameterError(f"Dimension mismatch: matrix is {m.n}x{m.n}, rhs has {rhs.shape}")
    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0.0:
        return np.zeros(m.n, dtype=complex)

    _check_structure(m.csr)
    try:
        lu = splu(m.csr.tocsc(), permc_spec="COLAMD")
    except RuntimeError as exc:
        raise SolverError(f"Sparse LU factorization failed: {exc}") from exc

    x = lu.solve(rhs)
    achieved = _relative_residual(m, x, rhs, b_norm)
    if not achieved <= tol:
        if max_refinements < 1:
            raise ConvergenceError(achieved, tol)
        try:
            for attempt in Retrying(
                stop=stop_after_attempt(max_refinements),
                retry=retry_if_exception_type(_ResidualAboveTolerance),
                before_sleep=before_sleep_log(logger, logging.DEBUG),
                reraise=True,
            ):
                with attempt:
                    x = x + lu.solve(rhs - m.csr @ x)
                    achieved = _relative_residual(m, x, rhs, b_norm)
                    if not achieved <= tol:
                        raise _ResidualAboveTolerance(achieved)
        except _ResidualAboveTolerance as exc:
            raise ConvergenceError(exc.residual, tol) from exc
    logger.debug("Solved %d unknowns, relative residual %.2e", m.n, achieved)
    return x


def write_matrix_market(
    path: Union[str, Path], data: Union[CompressedRowMatrix, np.ndarray], comment: str = ""
) -> None:
    """Complex general coordinate (matrices) or array (vectors) format, 1-based."""
    if isinstance(data, CompressedRowMatrix):
        scipy.io.mmwrite(
            str(path),
            data.csr.tocoo(),
            comment=comment,
            field="complex",
            precision=17,
            symmetry="general",
        )
    else:
        column = np.asarray(data, dtype=complex).reshape(-1, 1)
        scipy.io.mmwrite(
            str(path), column, comment=comment, field="complex", precision=17, symmetry="general"
        )


def read_matrix_market(path: Union[str, Path]) -> Union[CompressedRowMatrix, np.ndarray]:
    data = scipy.io.mmread(str(path))
    if sp.issparse(data):
        return CompressedRowMatrix.from_scipy(data)
    return np.asarray(data, dtype=complex).ravel()

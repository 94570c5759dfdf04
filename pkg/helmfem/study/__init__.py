"""Wavenumber sweeps, refinement diagnostics and manufactured-solution checks."""

from .config import StudyConfig
from .runner import StudyRunner, h_law, run_single, run_study
from .records import read_records, write_records
from .manufactured import ConvergenceResult, manufactured_convergence
from .diagnostics import refinement_study, quadrature_crime

__all__ = [
    "StudyConfig",
    "StudyRunner",
    "h_law",
    "run_single",
    "run_study",
    "read_records",
    "write_records",
    "ConvergenceResult",
    "manufactured_convergence",
    "refinement_study",
    "quadrature_crime",
]

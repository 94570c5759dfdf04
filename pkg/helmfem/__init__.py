"""
helmfem - High-order finite elements for 2-d Helmholtz scattering with a radial PML.

The package solves -k^2 mu u - div(A grad u) = f on a disk of radius 5 whose
outer shell is a perfectly matched layer, for a sound-soft unit disk or a
penetrable unit disk, and measures the error against a Mie-series reference.

Quick Start:
    >>> import asyncio
    >>> from helmfem import ProblemKind, ProblemSpec, StudyRunner
    >>>
    >>> spec = ProblemSpec.from_frequency(ProblemKind.PENETRABLE, 1.0)
    >>> runner = StudyRunner(spec, p=2, q=2)
    >>> report, record = runner.run_single(spec, h_target=0.25)
    >>> print(f"relative error: {report.relative:.2e}")
    >>>
    >>> records = asyncio.run(runner.run_study(C=16.0, f_list=[0.5, 1.0], out="study.txt"))

Main Components:
    - core: problem models, coefficients, special functions and errors
    - element: reference Lagrange basis and triangle quadrature
    - mesh: polar and square generators, curved geometry, Gmsh I/O
    - reference: Mie-series exact solutions
    - fem: dof numbering, assembly, sparse solve and error measurement
    - study: wavenumber sweeps and convergence diagnostics
    - utils: record formatters
"""

from .core import (
    HelmholtzError,
    ProblemKind,
    ProblemSpec,
    PmlProfile,
    Sampling,
    Branch,
    ErrorReport,
    StudyRecord,
)
from .mesh import Mesh, generate_polar, generate_square, read_msh, write_msh
from .reference import MieSeries, solve_for
from .fem import build_dofmap, assemble, solve, h1k_error, total_field_error
from .study import StudyConfig, StudyRunner, run_single, run_study, manufactured_convergence
from .utils import create_formatter

__version__ = "0.1.0"

# fmt: off
__all__ = [
    # Models
    'HelmholtzError', 'ProblemKind', 'ProblemSpec', 'PmlProfile', 'Sampling', 'Branch',
    'ErrorReport', 'StudyRecord',

    # Meshes
    'Mesh', 'generate_polar', 'generate_square', 'read_msh', 'write_msh',

    # Reference solutions
    'MieSeries', 'solve_for',

    # Discretization
    'build_dofmap', 'assemble', 'solve', 'h1k_error', 'total_field_error',

    # Studies
    'StudyConfig', 'StudyRunner', 'run_single', 'run_study', 'manufactured_convergence',

    # Utilities
    'create_formatter',
]
# fmt: on

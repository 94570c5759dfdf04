"""Polar and square mesh generation, curved geometry and Gmsh 2.2 I/O."""

from .mesh import Mesh, build_mesh, mesh_quality_report, QualityReport
from .generators import generate_polar, generate_square
from .msh_io import read_msh, write_msh

__all__ = [
    "Mesh",
    "build_mesh",
    "mesh_quality_report",
    "QualityReport",
    "generate_polar",
    "generate_square",
    "read_msh",
    "write_msh",
]

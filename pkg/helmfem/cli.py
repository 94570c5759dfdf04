"""Command-line interface for the Helmholtz PML finite element solver."""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .core.errors import HelmholtzError, ParameterError
from .core.models import ProblemKind, ProblemSpec, Sampling, StudyRecord
from .mesh.generators import generate_polar
from .mesh.mesh import Mesh, mesh_quality_report
from .mesh.msh_io import read_msh, write_msh
from .reference.mie import solve_for
from .study.config import StudyConfig
from .study.diagnostics import quadrature_crime, refinement_study
from .study.manufactured import manufactured_convergence
from .study.records import write_records
from .study.runner import StudyRunner
from .utils.visualization import create_formatter

logger = logging.getLogger(__name__)

DEFAULT_SQUARE_H_LIST = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0]


def _parse_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"Expected true or false, got '{value}'")


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        description="High-order FEM for Helmholtz scattering with a PML"
    )

    parser.add_argument("--verbose", action="store_true", help="Log debug output")
    parser.add_argument("--quiet", action="store_true", help="Log warnings and errors only")
    parser.add_argument(
        "--config",
        metavar="JSON",
        help="Study configuration file (overrides HELMFEM_STUDY_CONFIG)",
    )

    # Problem options shared by the scattering commands
    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument(
        "--problem",
        choices=[kind.value for kind in ProblemKind],
        default=ProblemKind.PENETRABLE.value,
        help="Scatterer type (default: penetrable)",
    )
    problem.add_argument("--p", type=int, default=2, help="Polynomial degree (default: 2)")
    problem.add_argument("--q", type=int, default=1, help="Geometry degree (default: 1)")
    problem.add_argument(
        "--sampling",
        choices=[s.value for s in Sampling],
        default=Sampling.MIDPOINT.value,
        help="Coefficient sampling in assembly (default: midpoint)",
    )
    problem.add_argument(
        "--weighted-norm",
        type=_parse_bool,
        default=True,
        metavar="{true|false}",
        help="Measure errors in the k-weighted H1 norm (default: true)",
    )

    wavenumber = argparse.ArgumentParser(add_help=False)
    group = wavenumber.add_mutually_exclusive_group()
    group.add_argument("--k", type=float, help="Wavenumber")
    group.add_argument("--f", type=float, help="Frequency, k = 2 pi f (default: 1)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    solve_parser = subparsers.add_parser(
        "solve", parents=[problem, wavenumber], help="Solve once and report the error"
    )
    solve_parser.add_argument("--h", type=float, help="Target mesh size")
    solve_parser.add_argument("--C", type=float, help="Mesh-law constant (default: from config)")
    solve_parser.add_argument("--mesh-in", metavar="MSH", help="Read the mesh from a Gmsh 2.2 file")
    solve_parser.add_argument("--dump-matrix", metavar="MTX", help="Write the system matrix")
    solve_parser.add_argument("--out", help="Record file for this run")

    study_parser = subparsers.add_parser(
        "study", parents=[problem], help="Wavenumber sweep under the mesh law"
    )
    study_parser.add_argument("--C", type=float, help="Mesh-law constant (default: from config)")
    study_parser.add_argument(
        "--f-list", type=float, nargs="+", help="Frequencies (default: from config)"
    )
    study_parser.add_argument("--workers", type=int, help="Concurrent frequencies")
    study_parser.add_argument("--out", help="Record file (whitespace-separated table)")
    study_parser.add_argument(
        "--format",
        choices=["table", "json", "summary"],
        default="summary",
        help="Console format (default: summary)",
    )

    manufactured_parser = subparsers.add_parser(
        "manufactured", help="Plane-wave convergence on the unit square"
    )
    manufactured_parser.add_argument("--p", type=int, default=1, help="Polynomial degree")
    manufactured_parser.add_argument("--k", type=float, default=2.0, help="Wavenumber")
    manufactured_parser.add_argument(
        "--h-list", type=float, nargs="+", default=DEFAULT_SQUARE_H_LIST, help="Mesh sizes"
    )
    manufactured_parser.add_argument(
        "--interpolate-only",
        action="store_true",
        help="Measure the nodal interpolant instead of the discrete solution",
    )

    mesh_parser = subparsers.add_parser(
        "mesh", parents=[problem, wavenumber], help="Generate or inspect a mesh"
    )
    mesh_parser.add_argument("--h", type=float, help="Target mesh size")
    mesh_parser.add_argument("--C", type=float, help="Mesh-law constant (default: from config)")
    mesh_parser.add_argument("--mesh-in", metavar="MSH", help="Inspect an existing Gmsh file")
    mesh_parser.add_argument("--out", metavar="MSH", help="Export as Gmsh 2.2 ASCII")

    mie_parser = subparsers.add_parser(
        "mie", parents=[problem, wavenumber], help="Evaluate the reference field on a grid"
    )
    mie_parser.add_argument("--extent", type=float, default=2.0, help="Half-width of the grid")
    mie_parser.add_argument("--n", type=int, default=41, help="Grid points per direction")
    mie_parser.add_argument("--out", help="Output file (default: stdout)")

    for name, help_text in (
        ("refine", "Fixed-k mesh refinement with observed rate"),
        ("crime", "Midpoint versus per-point sampling difference under refinement"),
    ):
        diag_parser = subparsers.add_parser(name, parents=[problem, wavenumber], help=help_text)
        diag_parser.add_argument(
            "--h-list", type=float, nargs="+", help="Mesh sizes (default: from config)"
        )

    return parser


def configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def build_spec(args: argparse.Namespace) -> ProblemSpec:
    kind = ProblemKind.from_name(args.problem)
    if getattr(args, "k", None) is not None:
        return ProblemSpec(kind=kind, wavenumber=args.k)
    frequency = getattr(args, "f", None)
    return ProblemSpec.from_frequency(kind, frequency if frequency is not None else 1.0)


def resolve_h(args: argparse.Namespace, spec: ProblemSpec, runner: StudyRunner) -> float:
    if args.h is not None:
        return float(args.h)
    C = args.C if args.C is not None else runner.config.mesh_constant(args.p)
    return runner.target_h(spec.wavenumber, C)


def make_runner(args: argparse.Namespace, spec: ProblemSpec) -> StudyRunner:
    return StudyRunner(
        spec,
        args.p,
        args.q,
        Sampling.from_name(args.sampling),
        args.weighted_norm,
        StudyConfig(args.config),
    )


async def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)
    configure_logging(args)

    try:
        if args.command == "solve":
            await handle_solve_command(args)
        elif args.command == "study":
            await handle_study_command(args)
        elif args.command == "manufactured":
            await handle_manufactured_command(args)
        elif args.command == "mesh":
            await handle_mesh_command(args)
        elif args.command == "mie":
            await handle_mie_command(args)
        elif args.command == "refine":
            await handle_refine_command(args)
        elif args.command == "crime":
            await handle_crime_command(args)
        else:
            parser.print_help()
    except HelmholtzError as e:
        print(f"Error: {e}")
        return 1
    return 0


async def handle_solve_command(args: argparse.Namespace) -> None:
    """Handle the solve command."""
    spec = build_spec(args)
    runner = make_runner(args, spec)
    mesh: Optional[Mesh] = read_msh(args.mesh_in, spec) if args.mesh_in else None
    h_target = mesh.measured_h if mesh is not None else resolve_h(args, spec, runner)

    report, record = runner.run_single(spec, h_target, mesh=mesh, dump_matrix=args.dump_matrix)

    print(f"Problem: {spec.kind.value}  k={spec.wavenumber:.6g}  p={args.p}  q={args.q}")
    print("-" * 50)
    print(f"Mesh size (measured): {record.hmax:.6g}")
    print(f"Degrees of freedom:   {record.dofs}")
    print(f"Error elements:       {report.element_count} ({report.inner_element_count} inner)")
    print(f"Absolute error:       {report.err:.6e}")
    print(f"Reference norm:       {report.nor:.6e}")
    print(f"Relative error:       {report.relative:.6e}")
    print(f"Wall time:            {record.wall_seconds:.2f}s")
    if args.dump_matrix:
        print(f"Matrix saved to: {Path(args.dump_matrix).absolute()}")
    if args.out:
        write_records(args.out, [record])
        print(f"Record saved to: {Path(args.out).absolute()}")


async def handle_study_command(args: argparse.Namespace) -> None:
    """Handle the study command."""
    spec = build_spec(args)
    runner = make_runner(args, spec)
    C = args.C if args.C is not None else runner.config.mesh_constant(args.p)
    f_list = args.f_list or runner.config.frequencies

    print(f"Study: {spec.kind.value}  p={args.p}  q={args.q}  C={C:g}")
    print(f"Frequencies: {', '.join(f'{f:g}' for f in f_list)}")
    records = await runner.run_study(C, f_list, out=args.out, max_workers=args.workers)

    print(create_formatter(args.format).format_records(records))
    if args.out:
        print(f"Records saved to: {Path(args.out).absolute()}")


async def handle_manufactured_command(args: argparse.Namespace) -> None:
    """Handle the manufactured command."""
    result = manufactured_convergence(args.p, args.k, args.h_list, args.interpolate_only)
    mode = "interpolant" if args.interpolate_only else "discrete solution"
    print(f"Plane wave on the unit square: p={args.p}  k={args.k:g}  ({mode})")
    print("-" * 50)
    for h, relative in zip(result.hs, result.relative):
        print(f"h={h:.5f}  relative error={relative:.4e}")
    print(f"Observed rate: {result.rate:.3f}")


async def handle_mesh_command(args: argparse.Namespace) -> None:
    """Handle the mesh command."""
    spec = build_spec(args)
    if args.mesh_in:
        mesh = read_msh(args.mesh_in, spec)
    else:
        runner = make_runner(args, spec)
        mesh = generate_polar(spec, resolve_h(args, spec, runner), args.q)

    summary = mesh_quality_report(mesh).summary()
    print(f"Mesh: {mesh.num_vertices} vertices, {mesh.num_triangles} triangles, q={mesh.q}")
    print("-" * 50)
    for key, value in summary.items():
        print(f"{key:>16}: {value:.6g}")
    if args.out:
        write_msh(mesh, args.out)
        print(f"Mesh saved to: {Path(args.out).absolute()}")


async def handle_mie_command(args: argparse.Namespace) -> None:
    """Handle the mie command."""
    if args.n < 2:
        raise ParameterError(f"Grid needs at least 2 points per direction, got {args.n}")
    spec = build_spec(args)
    series = solve_for(spec, max(2.5, np.sqrt(2.0) * args.extent))
    ticks = np.linspace(-args.extent, args.extent, args.n)
    xx, yy = np.meshgrid(ticks, ticks, indexing="xy")
    points = np.stack([xx.ravel(), yy.ravel()], axis=1)
    r = np.hypot(points[:, 0], points[:, 1])

    values = np.full(points.shape[0], np.nan, dtype=complex)
    # the extended sound-soft series is singular only at the origin
    singular = np.zeros(r.shape, dtype=bool)
    if spec.kind is ProblemKind.SOUND_SOFT:
        singular = r == 0.0
    if (~singular).any():
        values[~singular] = series.evaluate(points[~singular])[0]

    lines = ["x y re im abs"]
    for (x, y), u in zip(points, values):
        lines.append(f"{float(x)!r} {float(y)!r} {float(u.real)!r} {float(u.imag)!r} {float(abs(u))!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"Field saved to: {Path(args.out).absolute()}")
    else:
        print(text, end="")


async def handle_refine_command(args: argparse.Namespace) -> None:
    """Handle the refine command."""
    spec = build_spec(args)
    config = StudyConfig(args.config)
    result = await asyncio.to_thread(
        refinement_study,
        spec,
        args.p,
        args.q,
        args.h_list or config.refinement_h,
        Sampling.from_name(args.sampling),
        args.weighted_norm,
        config,
    )
    _print_records(result.records)
    print(f"Observed rate: {result.rate:.3f}")


async def handle_crime_command(args: argparse.Namespace) -> None:
    """Handle the crime command."""
    spec = build_spec(args)
    h_list = args.h_list or StudyConfig(args.config).refinement_h
    result = await asyncio.to_thread(quadrature_crime, spec, args.p, args.q, h_list)
    print(f"Sampling difference: {spec.kind.value}  k={spec.wavenumber:.6g}  p={args.p}")
    print("-" * 50)
    for h, diff in zip(result.hs, result.differences):
        print(f"h={h:.5f}  difference={diff:.4e}")
    print(f"Observed rate: {result.rate:.3f}")


def _print_records(records: Sequence[StudyRecord]) -> None:
    print(create_formatter("summary").format_records(records))


def run() -> None:
    sys.exit(asyncio.run(main()))


if __name__ == "__main__":
    run()

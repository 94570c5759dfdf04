from pathlib import Path

import numpy as np
import pytest

from helmfem.core.models import BoundaryTag
from helmfem.element.basis import lattice
from helmfem.fem.dofmap import build_dofmap
from helmfem.mesh.generators import generate_polar
from helmfem.mesh.msh_io import read_msh

DATA = Path(__file__).parent / "data"


@pytest.fixture
def unit_square():
    return read_msh(DATA / "unit_square.msh")


@pytest.mark.parametrize("p, expected", [(1, 4), (2, 9), (3, 16), (4, 25)])
def test_unit_square_counts(unit_square, p, expected):
    assert build_dofmap(unit_square, p).num_dofs == expected


def test_vertex_dofs_come_first(unit_square):
    dofmap = build_dofmap(unit_square, 2)
    np.testing.assert_array_equal(dofmap.element_dofs[:, :3], unit_square.triangles)
    np.testing.assert_allclose(dofmap.coordinates[:4], unit_square.vertices)


def test_shared_edge_dofs_agree(penetrable):
    mesh = generate_polar(penetrable, 0.5, q=2)
    dofmap = build_dofmap(mesh, 3)
    x, _, _ = mesh.map_points(lattice(3))
    np.testing.assert_allclose(dofmap.coordinates[dofmap.element_dofs], x, atol=1e-12)


def test_every_dof_is_used(penetrable):
    mesh = generate_polar(penetrable, 0.5)
    dofmap = build_dofmap(mesh, 4)
    counts = np.bincount(dofmap.element_dofs.ravel(), minlength=dofmap.num_dofs)
    assert counts.min() >= 1
    assert dofmap.num_dofs == dofmap.element_dofs.max() + 1


def test_soundsoft_mask(soundsoft):
    mesh = generate_polar(soundsoft, 0.5, q=2)
    dofmap = build_dofmap(mesh, 2, soundsoft.dirichlet_tags())
    r = np.hypot(dofmap.coordinates[:, 0], dofmap.coordinates[:, 1])
    on_circle = (np.abs(r - 1.0) <= 1e-9) | (np.abs(r - 5.0) <= 1e-9)
    np.testing.assert_array_equal(dofmap.dirichlet_mask, on_circle)
    assert dofmap.free_dofs.size == dofmap.num_dofs - on_circle.sum()


def test_penetrable_masks_outer_circle_only(penetrable):
    mesh = generate_polar(penetrable, 0.5, q=2)
    dofmap = build_dofmap(mesh, 2, penetrable.dirichlet_tags())
    r = np.hypot(dofmap.coordinates[:, 0], dofmap.coordinates[:, 1])
    np.testing.assert_array_equal(dofmap.dirichlet_mask, np.abs(r - 5.0) <= 1e-9)


def test_no_tags_means_no_mask(unit_square):
    assert not build_dofmap(unit_square, 2).dirichlet_mask.any()
    assert build_dofmap(unit_square, 2, {BoundaryTag.OTHER}).dirichlet_mask.sum() == 8

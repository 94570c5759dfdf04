from pathlib import Path

import numpy as np
import pytest

from helmfem.core.errors import MeshConformityError, MeshFormatError, ParameterError
from helmfem.core.models import BoundaryTag, Region
from helmfem.mesh.generators import generate_polar, generate_square, ring_radii
from helmfem.mesh.mesh import build_mesh, element_map, measured_h, mesh_quality_report
from helmfem.mesh.msh_io import read_msh, write_msh

DATA = Path(__file__).parent / "data"

EDGE_MIDPOINTS = np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]])

QUAD_MSH = """$MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
1
1 3 2 1 1 1 2 3 4
$EndElements
"""

CROSSING_MSH = """$MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
3
1 0 0 0
2 2 0 0
3 0 2 0
$EndNodes
$Elements
1
1 2 2 1 1 1 2 3
$EndElements
"""


class TestElementMap:
    def test_identity_triangle(self):
        mesh = build_mesh(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 2]]))
        x, jac, det = element_map(mesh, 0, np.array([0.2, 0.3]))
        np.testing.assert_allclose(x, [0.2, 0.3])
        np.testing.assert_allclose(jac, np.eye(2))
        assert det == pytest.approx(1.0)
        assert measured_h(mesh) == pytest.approx(np.sqrt(2.0))

    def test_scaled_triangle(self):
        mesh = build_mesh(np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]), np.array([[0, 1, 2]]))
        _, _, det = mesh.map_points(np.array([[0.1, 0.1], [0.5, 0.2], [0.0, 1.0]]))
        np.testing.assert_allclose(det, 4.0)

    def test_clockwise_input_is_reoriented(self):
        mesh = build_mesh(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 2, 1]]))
        assert mesh.map_points(np.array([[0.3, 0.3]]))[2][0, 0] > 0

    def test_curved_edge_midpoints_on_circle(self, penetrable):
        mesh = generate_polar(penetrable, 0.5, q=2)
        outer = mesh.boundary_dof_edges([BoundaryTag.OUTER_CIRCLE])
        assert outer.size
        for tri, edge, _ in outer:
            x, _, _ = element_map(mesh, tri, EDGE_MIDPOINTS[edge])
            assert np.hypot(*x) == pytest.approx(5.0, abs=1e-12)


class TestPolarGenerator:
    def test_penetrable_covers_disk(self, penetrable):
        mesh = generate_polar(penetrable, 0.5)
        r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
        for radius in (1.0, 4.0, 5.0):
            assert np.any(np.isclose(r, radius, atol=1e-12))
        assert r.max() == pytest.approx(5.0)
        counts = np.bincount(mesh.region_tags, minlength=3)
        assert all(counts[region] > 0 for region in Region)

    def test_soundsoft_is_annulus(self, soundsoft):
        mesh = generate_polar(soundsoft, 0.5)
        r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
        assert r.min() >= 1.0 - 1e-12
        tags = set(mesh.boundary_edges[:, 2].tolist())
        assert tags == {BoundaryTag.INNER_CIRCLE, BoundaryTag.OUTER_CIRCLE}
        assert not np.any(mesh.region_tags == Region.INNER)

    def test_refinement_shrinks_h(self, penetrable):
        coarse = generate_polar(penetrable, 0.5)
        fine = generate_polar(penetrable, 0.25)
        assert fine.measured_h <= 0.6 * coarse.measured_h
        for mesh, h in ((coarse, 0.5), (fine, 0.25)):
            assert mesh.measured_h <= 1.5 * h

    def test_geometry_degree_reduces_area_error(self, penetrable):
        exact = 25.0 * np.pi
        straight = abs(generate_polar(penetrable, 0.5, q=1).area() - exact)
        curved = abs(generate_polar(penetrable, 0.5, q=2).area() - exact)
        assert curved < 1e-4 * exact
        assert curved < straight

    @pytest.mark.parametrize("h", [0.5, 0.25])
    def test_straight_edges_stay_close_to_circles(self, penetrable, h):
        mesh = generate_polar(penetrable, h, q=1)
        r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
        edges = mesh.topology.edges
        for radius in (1.0, 4.0, 5.0):
            on_circle = np.isclose(r, radius, atol=1e-12)
            chords = edges[on_circle[edges[:, 0]] & on_circle[edges[:, 1]]]
            assert chords.size > 0
            midpoints = 0.5 * (mesh.vertices[chords[:, 0]] + mesh.vertices[chords[:, 1]])
            sagitta = radius - np.hypot(midpoints[:, 0], midpoints[:, 1])
            assert np.all(sagitta >= 0)
            assert sagitta.max() <= mesh.measured_h**2 / (4.0 * radius)

    @pytest.mark.parametrize("kind", ["soundsoft", "penetrable"])
    def test_straight_area_is_sum_of_triangles(self, kind, request):
        spec = request.getfixturevalue(kind)
        mesh = generate_polar(spec, 0.25, q=1)
        corners = mesh.vertices[mesh.triangles]
        edge1 = corners[:, 1] - corners[:, 0]
        edge2 = corners[:, 2] - corners[:, 0]
        shoelace = 0.5 * np.abs(edge1[:, 0] * edge2[:, 1] - edge1[:, 1] * edge2[:, 0]).sum()
        assert mesh.area() == pytest.approx(shoelace, rel=1e-10)

    def test_straight_area_deficit_is_second_order(self, penetrable):
        mesh = generate_polar(penetrable, 0.25, q=1)
        deficit = 25.0 * np.pi - mesh.area()
        assert 0 < deficit <= mesh.measured_h**2

    @pytest.mark.parametrize("h", [0.0, 0.75])
    def test_rejects_h_out_of_range(self, penetrable, h):
        with pytest.raises(ParameterError):
            generate_polar(penetrable, h)

    def test_ring_radii_keep_breakpoints(self):
        radii = ring_radii((1.0, 4.0, 5.0), 0.4)
        for radius in (1.0, 4.0, 5.0):
            assert radius in radii
        assert np.all(np.diff(radii) <= 0.4 + 1e-12)


class TestQuality:
    def test_straight_mesh_has_constant_jacobian(self):
        report = mesh_quality_report(generate_square(4))
        np.testing.assert_allclose(report.det_ratio, 1.0)
        assert report.flagged.size == 0

    def test_equilateral_shape_ratio(self):
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])
        report = mesh_quality_report(build_mesh(vertices, np.array([[0, 1, 2]])))
        assert report.shape_ratio[0] == pytest.approx(2.0 * np.sqrt(3.0))

    def test_snapped_mesh_det_ratio(self, penetrable):
        report = mesh_quality_report(generate_polar(penetrable, 0.25, q=2))
        assert report.det_ratio.max() <= 1.5


class TestMshIO:
    def test_read_unit_square(self):
        mesh = read_msh(DATA / "unit_square.msh")
        assert mesh.num_triangles == 2
        assert mesh.num_vertices == 4
        assert mesh.area() == pytest.approx(1.0)
        assert set(mesh.boundary_edges[:, 2].tolist()) == {BoundaryTag.OTHER}

    def test_quadrilateral_is_rejected(self, tmp_path):
        path = tmp_path / "quad.msh"
        path.write_text(QUAD_MSH)
        with pytest.raises(MeshFormatError):
            read_msh(path)

    def test_interface_crossing_is_rejected(self, tmp_path, penetrable):
        path = tmp_path / "crossing.msh"
        path.write_text(CROSSING_MSH)
        with pytest.raises(MeshConformityError):
            read_msh(path, penetrable)

    def test_newer_version_is_rejected(self, tmp_path):
        path = tmp_path / "v4.msh"
        path.write_text(QUAD_MSH.replace("2.2 0 8", "4.1 0 8"))
        with pytest.raises(MeshFormatError):
            read_msh(path)

    @pytest.mark.parametrize("q", [1, 2])
    def test_export_then_import(self, tmp_path, penetrable, q):
        mesh = generate_polar(penetrable, 0.5, q=q)
        path = tmp_path / "disk.msh"
        write_msh(mesh, path)
        loaded = read_msh(path, penetrable)
        assert loaded.num_vertices == mesh.num_vertices
        np.testing.assert_array_equal(loaded.triangles, mesh.triangles)
        np.testing.assert_array_equal(loaded.region_tags, mesh.region_tags)
        np.testing.assert_allclose(loaded.geometry_nodes, mesh.geometry_nodes, atol=1e-15)


def test_square_generator():
    mesh = generate_square(3)
    assert mesh.num_triangles == 18
    assert mesh.area() == pytest.approx(1.0)
    assert mesh.measured_h == pytest.approx(np.sqrt(2.0) / 3.0)

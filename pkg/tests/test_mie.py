import numpy as np
import pytest

from helmfem.core.errors import DomainError
from helmfem.core.models import Branch, ProblemKind, ProblemSpec
from helmfem.reference.mie import (
    choose_truncation,
    eval_series,
    solve_for,
    solve_penetrable,
    solve_soundsoft,
    transmission_residuals,
)


def _circle(radius, count=64):
    theta = 2.0 * np.pi * np.arange(count) / count
    return np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1)


def _penetrable(k):
    return solve_penetrable(k, choose_truncation(k, 2.5))


def _five_point_residual(series, point, k_local, branch, step=1e-3):
    offsets = np.array([[0, 0], [step, 0], [-step, 0], [0, step], [0, -step]])
    u, _ = series.evaluate(point + offsets, branch)
    laplacian = (u[1:].sum() - 4.0 * u[0]) / step**2
    return abs(laplacian + k_local**2 * u[0])


class TestTruncation:
    def test_values(self):
        assert choose_truncation(1.0, 1.0) == 21
        assert choose_truncation(2.0 * np.pi, 2.0) == 38

    def test_small_wavenumber_floor(self):
        assert choose_truncation(1e-9, 1.0) == 17


class TestSoundSoft:
    def test_boundary_condition(self):
        series = solve_soundsoft(2.0 * np.pi, choose_truncation(2.0 * np.pi, 2.5))
        values, _ = series.evaluate(_circle(1.0))
        assert np.max(np.abs(values)) <= 1e-10

    def test_tail_decay(self):
        k = 2.0 * np.pi
        series = solve_soundsoft(k, choose_truncation(k, 2.5))
        coeffs = np.abs(series.outer_coeffs)
        assert coeffs[-1] <= 1e-12 * coeffs.max()

    def test_scattered_part_is_total_minus_incident(self):
        k = 2.0 * np.pi
        series = solve_soundsoft(k, choose_truncation(k, 10.0))
        pts = _circle(10.0, 16)
        total, _ = series.evaluate(pts)
        np.testing.assert_allclose(
            series.scattered(pts), total - np.exp(1j * k * pts[:, 0]), atol=1e-10
        )

    def test_origin_is_rejected(self):
        series = solve_soundsoft(1.0, 20)
        with pytest.raises(DomainError):
            series.evaluate(np.array([0.0, 0.0]))
        with pytest.raises(DomainError):
            series.evaluate(np.array([0.5, 0.0]), Branch.FORCE_INNER)

    def test_exterior_helmholtz_residual(self):
        k = 2.0 * np.pi
        series = solve_soundsoft(k, choose_truncation(k, 2.5))
        point = np.array([1.2, 0.9])
        assert _five_point_residual(series, point, k, Branch.AUTO, step=2.5e-4) <= 1e-4


class TestPenetrable:
    @pytest.mark.parametrize("k", [np.pi, 2.0 * np.pi, 8.0 * np.pi])
    def test_transmission_conditions(self, k):
        series = _penetrable(k)
        pts = _circle(1.0)
        u_in, g_in = series.evaluate(pts, Branch.FORCE_INNER)
        u_out, g_out = series.evaluate(pts, Branch.FORCE_OUTER)
        scale = max(np.max(np.abs(u_out)), 1.0)
        assert np.max(np.abs(u_in - u_out)) <= 1e-9 * scale
        dr_in = np.einsum("md,md->m", g_in, pts)
        dr_out = np.einsum("md,md->m", g_out, pts)
        assert np.max(np.abs(2.0 * dr_in - dr_out)) <= 1e-9 * k * scale

    def test_mode_residuals(self):
        residuals = transmission_residuals(_penetrable(2.0 * np.pi))
        assert residuals["value"].max() <= 1e-12
        assert residuals["flux"].max() <= 1e-11
        assert residuals["flux_swapped"].max() > 1e-3

    def test_interior_helmholtz_residual(self):
        k = 2.0 * np.pi
        series = _penetrable(k)
        point = np.array([0.3, 0.4])
        assert _five_point_residual(series, point, k / 2.0, Branch.AUTO) <= 1e-4

    def test_interior_series_extends_past_interface(self):
        value, grad = _penetrable(np.pi).evaluate(np.array([1.05, 0.0]), Branch.FORCE_INNER)
        assert np.isfinite(value)
        assert np.all(np.isfinite(grad))

    def test_origin_gradient(self):
        series = _penetrable(2.0 * np.pi)
        _, grad = series.evaluate(np.array([0.0, 0.0]))
        step = 1e-6
        ux = series.evaluate(np.array([[step, 0.0], [-step, 0.0]]))[0]
        uy = series.evaluate(np.array([[0.0, step], [0.0, -step]]))[0]
        fd = np.array([ux[0] - ux[1], uy[0] - uy[1]]) / (2 * step)
        np.testing.assert_allclose(grad, fd, atol=1e-6)

    def test_spec_dispatch(self):
        spec = ProblemSpec(kind=ProblemKind.PENETRABLE, wavenumber=np.pi)
        series = solve_for(spec)
        assert series.kind is ProblemKind.PENETRABLE
        assert series.interior_wavenumber == pytest.approx(np.pi / 2)
        assert series.truncation == choose_truncation(np.pi, 2.5)


def test_gradient_matches_finite_differences(rng):
    series = _penetrable(2.0 * np.pi)
    radii = rng.uniform(0.3, 2.0, 40)
    radii = radii[np.abs(radii - 1.0) > 0.01][:20]
    theta = rng.uniform(0.0, 2.0 * np.pi, radii.size)
    pts = np.stack([radii * np.cos(theta), radii * np.sin(theta)], axis=1)
    _, grads = eval_series(series, pts)
    step = 1e-6
    for point, grad in zip(pts, grads):
        fd = np.empty(2, dtype=complex)
        for d in range(2):
            shift = np.zeros(2)
            shift[d] = step
            plus, _ = series.evaluate(point + shift)
            minus, _ = series.evaluate(point - shift)
            fd[d] = (plus - minus) / (2 * step)
        assert np.linalg.norm(fd - grad) <= 1e-6 * np.linalg.norm(grad)


def test_amplitude_scales_field():
    series = solve_soundsoft(np.pi, 30)
    pts = _circle(1.7, 8)
    base, base_grad = series.evaluate(pts)
    scaled, scaled_grad = series.scaled(1j).evaluate(pts)
    np.testing.assert_allclose(scaled, 1j * base, rtol=1e-14)
    np.testing.assert_allclose(scaled_grad, 1j * base_grad, rtol=1e-14)


def test_scatterer_radius():
    series = solve_soundsoft(3.0, 40, radius=1.5)
    values, _ = series.evaluate(_circle(1.5))
    assert np.max(np.abs(values)) <= 1e-10


class TestSeriesInvariants:
    @pytest.fixture
    def points(self, rng):
        r = rng.uniform(1.0, 2.0, 24)
        theta = rng.uniform(0.0, 2.0 * np.pi, 24)
        return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)

    @pytest.mark.parametrize("solver", [solve_soundsoft, solve_penetrable])
    def test_doubling_truncation_leaves_field_unchanged(self, solver, points):
        k = np.pi
        truncation = choose_truncation(k, 2.5)
        base, _ = solver(k, truncation).evaluate(points)
        doubled, _ = solver(k, 2 * truncation).evaluate(points)
        assert np.max(np.abs(doubled - base)) <= 1e-12 * np.max(np.abs(base))

    def test_doubling_truncation_inside_penetrable_disk(self, points):
        k = np.pi
        inner = 0.45 * points
        truncation = choose_truncation(k, 2.5)
        base, _ = solve_penetrable(k, truncation).evaluate(inner)
        doubled, _ = solve_penetrable(k, 2 * truncation).evaluate(inner)
        assert np.max(np.abs(doubled - base)) <= 1e-12 * np.max(np.abs(base))

    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_field_is_even_in_angle(self, kind, points):
        series = solve_for(ProblemSpec(kind=kind, wavenumber=2.0 * np.pi))
        mirrored = points * np.array([1.0, -1.0])
        upper, _ = series.evaluate(points)
        lower, _ = series.evaluate(mirrored)
        np.testing.assert_allclose(lower, upper, rtol=0, atol=1e-12 * np.max(np.abs(upper)))

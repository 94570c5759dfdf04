"""Fourier-Bessel reference solutions for plane-wave scattering by a disk.

The incident wave exp(ik x_1) expands as sum_n eps_n i^n J_n(kr) cos(n theta)
with eps_0 = 1 and eps_n = 2 otherwise.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..core.errors import ComputationError, DomainError
from ..core.models import Branch, ProblemKind, ProblemSpec
from ..core.specfun import bessel_arrays, bessel_j_arrays

logger = logging.getLogger(__name__)

INNER_TENSOR = 2.0
INNER_MU = 0.5
_CHUNK = 4096
_SINGULAR_THRESHOLD = 1e-14


def choose_truncation(k: float, r_max: float) -> int:
    kr = k * r_max
    return int(math.ceil(kr + 4.0 * kr ** (1.0 / 3.0) + 16.0))


def _mode_weights(truncation: int) -> np.ndarray:
    n = np.arange(truncation + 1)
    powers = np.array([1.0, 1j, -1.0, -1j])[n % 4]
    eps = np.where(n == 0, 1.0, 2.0)
    return eps * powers


@dataclass(frozen=True)
class MieSeries:
    kind: ProblemKind
    k: float
    truncation: int
    outer_coeffs: np.ndarray
    inner_coeffs: Optional[np.ndarray] = None
    interior_wavenumber: Optional[float] = None
    amplitude: complex = 1.0
    scatterer_radius: float = 1.0

    def scaled(self, factor: complex) -> "MieSeries":
        """Same field with the incident amplitude multiplied by ``factor``."""
        return replace(self, amplitude=self.amplitude * factor)

    def evaluate(
        self, x: np.ndarray, branch: Branch = Branch.AUTO
    ) -> Tuple[Union[complex, np.ndarray], np.ndarray]:
        """Total field and Cartesian gradient at one point (2,) or many (M, 2)."""
        single = np.ndim(x) == 1
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.hypot(pts[:, 0], pts[:, 1])
        use_inner = self._inner_mask(r, branch)
        if np.any(~use_inner & (r == 0)):
            raise DomainError("Hankel series evaluated at the origin")

        values = np.empty(pts.shape[0], dtype=complex)
        grads = np.empty((pts.shape[0], 2), dtype=complex)
        for start in range(0, pts.shape[0], _CHUNK):
            sl = slice(start, start + _CHUNK)
            chunk, inner = pts[sl], use_inner[sl]
            if inner.any():
                v, g = self._inner_field(chunk[inner])
                values[sl][inner] = v
                grads[sl][inner] = g
            if (~inner).any():
                v, g = self._outer_field(chunk[~inner])
                values[sl][~inner] = v
                grads[sl][~inner] = g
        values *= self.amplitude
        grads *= self.amplitude
        if single:
            return complex(values[0]), grads[0]
        return values, grads

    def scattered(self, x: np.ndarray) -> np.ndarray:
        """Outgoing Hankel part of the exterior field."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.hypot(pts[:, 0], pts[:, 1])
        if np.any(r == 0):
            raise DomainError("Hankel series evaluated at the origin")
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        j, _, y, _ = bessel_arrays(self.truncation, self.k * r)
        cosines = np.cos(np.outer(np.arange(self.truncation + 1), theta))
        coeffs = _mode_weights(self.truncation) * self.outer_coeffs
        return self.amplitude * np.einsum("n,nm,nm->m", coeffs, j + 1j * y, cosines)

    def _inner_mask(self, r: np.ndarray, branch: Branch) -> np.ndarray:
        if branch is Branch.FORCE_OUTER:
            return np.zeros(r.shape, dtype=bool)
        if self.inner_coeffs is None:
            if branch is Branch.FORCE_INNER:
                raise DomainError("Sound-soft series has no interior expansion")
            return np.zeros(r.shape, dtype=bool)
        if branch is Branch.FORCE_INNER:
            return np.ones(r.shape, dtype=bool)
        return r < self.scatterer_radius

    def _angular(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        r = np.hypot(pts[:, 0], pts[:, 1])
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        n = np.arange(self.truncation + 1)
        return r, theta, np.cos(np.outer(n, theta)), np.sin(np.outer(n, theta))

    @staticmethod
    def _to_cartesian(theta: np.ndarray, d_r: np.ndarray, d_t: np.ndarray) -> np.ndarray:
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([c * d_r - s * d_t, s * d_r + c * d_t], axis=1)

    def _outer_field(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        r, theta, cosines, sines = self._angular(pts)
        j, jp, y, yp = bessel_arrays(self.truncation, self.k * r)
        d = self.outer_coeffs[:, None]
        radial = j + d * (j + 1j * y)
        radial_p = jp + d * (jp + 1j * yp)
        w = _mode_weights(self.truncation)
        n = np.arange(self.truncation + 1)
        value = np.einsum("n,nm,nm->m", w, radial, cosines)
        d_r = self.k * np.einsum("n,nm,nm->m", w, radial_p, cosines)
        d_t = -np.einsum("n,nm,nm->m", w * n, radial, sines) / r
        return value, self._to_cartesian(theta, d_r, d_t)

    def _inner_field(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        assert self.inner_coeffs is not None and self.interior_wavenumber is not None
        kin = self.interior_wavenumber
        r, theta, cosines, sines = self._angular(pts)
        j, jp = bessel_j_arrays(self.truncation, kin * r)
        w = _mode_weights(self.truncation) * self.inner_coeffs
        n = np.arange(self.truncation + 1)
        value = np.einsum("n,nm,nm->m", w, j, cosines)
        d_r = kin * np.einsum("n,nm,nm->m", w, jp, cosines)
        at_origin = r == 0
        safe_r = np.where(at_origin, 1.0, r)
        d_t = -np.einsum("n,nm,nm->m", w * n, j, sines) / safe_r
        grads = self._to_cartesian(theta, d_r, d_t)
        if at_origin.any():
            # only the n = 1 mode has a nonzero gradient at the origin
            slope = 0.5 * kin * w[1] if self.truncation >= 1 else 0.0
            grads[at_origin] = np.array([slope, 0.0])
        return value, grads


def eval_series(
    series: MieSeries, x: np.ndarray, branch: Branch = Branch.AUTO
) -> Tuple[Union[complex, np.ndarray], np.ndarray]:
    return series.evaluate(x, branch)


def solve_soundsoft(k: float, truncation: int, radius: float = 1.0) -> MieSeries:
    if k <= 0:
        raise DomainError(f"Wavenumber must be positive, got {k}")
    j, _, y, _ = bessel_arrays(truncation, k * radius)
    outer = -j[:, 0] / (j[:, 0] + 1j * y[:, 0])
    logger.debug("Sound-soft series: k=%.4f, N=%d, |d_N|=%.2e", k, truncation, abs(outer[-1]))
    return MieSeries(
        kind=ProblemKind.SOUND_SOFT,
        k=k,
        truncation=truncation,
        outer_coeffs=outer,
        scatterer_radius=radius,
    )


def solve_penetrable(k: float, truncation: int, radius: float = 1.0) -> MieSeries:
    """Transmission problem with A = 2, mu = 1/2 inside the disk (flux A grad u . n continuous)."""
    if k <= 0:
        raise DomainError(f"Wavenumber must be positive, got {k}")
    kin = k * math.sqrt(INNER_MU / INNER_TENSOR)
    jo, jpo, yo, ypo = (a[:, 0] for a in bessel_arrays(truncation, k * radius))
    ji, jpi = (a[:, 0] for a in bessel_j_arrays(truncation, kin * radius))
    h, hp = jo + 1j * yo, jpo + 1j * ypo

    # c J_n(kin a) - d H_n(k a) = J_n(k a)
    # 2 c kin J_n'(kin a) - d k H_n'(k a) = k J_n'(k a)
    flux_in = INNER_TENSOR * kin * jpi
    det = -k * ji * hp + flux_in * h
    scale = np.abs(k * ji * hp) + np.abs(flux_in * h)
    singular = np.abs(det) < _SINGULAR_THRESHOLD * scale
    if singular.any():
        mode = int(np.argmax(singular))
        raise ComputationError(f"Singular transmission system for mode {mode}", mode=mode)
    inner = k * (h * jpo - jo * hp) / det
    outer = (k * ji * jpo - flux_in * jo) / det
    logger.debug("Penetrable series: k=%.4f, N=%d, |d_N|=%.2e", k, truncation, abs(outer[-1]))
    return MieSeries(
        kind=ProblemKind.PENETRABLE,
        k=k,
        truncation=truncation,
        outer_coeffs=outer,
        inner_coeffs=inner,
        interior_wavenumber=kin,
        scatterer_radius=radius,
    )


def solve_for(spec: ProblemSpec, r_max: float = 2.5) -> MieSeries:
    """Reference series for a problem, truncated for radii up to r_max."""
    truncation = choose_truncation(spec.wavenumber, r_max)
    if spec.kind is ProblemKind.SOUND_SOFT:
        return solve_soundsoft(spec.wavenumber, truncation, spec.scatterer_radius)
    return solve_penetrable(spec.wavenumber, truncation, spec.scatterer_radius)


def transmission_residuals(series: MieSeries) -> Dict[str, np.ndarray]:
    """Per-mode interface residuals of a penetrable series.

    ``flux`` uses A grad u . n continuity (factor 2 on the interior side);
    ``flux_swapped`` is the alternative with the factor on the exterior side.
    """
    if series.inner_coeffs is None or series.interior_wavenumber is None:
        raise DomainError("Residuals are only defined for penetrable series")
    a, k, kin = series.scatterer_radius, series.k, series.interior_wavenumber
    jo, jpo, yo, ypo = (v[:, 0] for v in bessel_arrays(series.truncation, k * a))
    ji, jpi = (v[:, 0] for v in bessel_j_arrays(series.truncation, kin * a))
    c, d = series.inner_coeffs, series.outer_coeffs
    u_out = jo + d * (jo + 1j * yo)
    du_out = k * (jpo + d * (jpo + 1j * ypo))
    u_in = c * ji
    du_in = kin * c * jpi
    return {
        "value": np.abs(u_in - u_out),
        "flux": np.abs(INNER_TENSOR * du_in - du_out),
        "flux_swapped": np.abs(INNER_TENSOR * du_out - du_in),
    }

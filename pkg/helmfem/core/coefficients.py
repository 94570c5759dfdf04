"""Coefficient fields of the PML-truncated scattering problems.

All functions accept a single point of shape (2,) or a stack of shape
(M, 2) and return matching scalars or arrays.
"""

import math
from abc import ABC, abstractmethod
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .errors import DomainError
from .models import PmlProfile, ProblemKind, ProblemSpec, Region
from .specfun import erf

ArrayLike = Union[float, np.ndarray]

_OUTER_TOLERANCE = 1e-10


def _radii(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    return np.hypot(pts[..., 0], pts[..., 1])


def _scalar_or_array(values: np.ndarray, single: bool) -> ArrayLike:
    if single:
        return values.reshape(-1)[0].item()
    return values


def beta(r: ArrayLike, pml: PmlProfile) -> ArrayLike:
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise DomainError("beta is defined for r >= 0")
    depth = np.maximum(rr - pml.start_radius, 0.0)
    out = np.asarray(1.0 + 1j * pml.strength * depth**pml.exponent, dtype=complex)
    return complex(out) if np.ndim(r) == 0 else out


def frak_b(r: ArrayLike, pml: PmlProfile) -> ArrayLike:
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0):
        raise DomainError("frak_b is defined for r > 0")
    depth = np.maximum(rr - pml.start_radius, 0.0)
    out = np.asarray(
        1.0 + 1j * (pml.strength / ((pml.exponent + 1) * rr)) * depth ** (pml.exponent + 1),
        dtype=complex,
    )
    return complex(out) if np.ndim(r) == 0 else out


def region_of(x: np.ndarray, spec: ProblemSpec) -> Union[Region, np.ndarray]:
    """Classify points by radius; points on a circle go to the inner region."""
    pts = np.asarray(x, dtype=float)
    r = _radii(pts)
    if np.any(r > spec.outer_radius * (1.0 + _OUTER_TOLERANCE)):
        raise DomainError(f"Point outside the computational disk of radius {spec.outer_radius}")
    tags = np.where(r <= spec.pml.start_radius, int(Region.PHYSICAL), int(Region.PML))
    if spec.kind is ProblemKind.PENETRABLE:
        tags = np.where(r <= spec.scatterer_radius, int(Region.INNER), tags)
    if pts.ndim == 1:
        return Region(int(tags))
    return tags


def _regions_for(pts: np.ndarray, spec: ProblemSpec, region: Optional[ArrayLike]) -> np.ndarray:
    if region is None:
        if spec.kind is ProblemKind.SOUND_SOFT:
            inside = _radii(pts) < spec.scatterer_radius * (1.0 - _OUTER_TOLERANCE)
            if inside.any():
                raise DomainError(
                    f"Point inside the sound-soft obstacle of radius {spec.scatterer_radius}"
                )
        return np.atleast_1d(np.asarray(region_of(pts, spec), dtype=int))
    return np.broadcast_to(np.asarray(region, dtype=int), (pts.shape[0],))


def mu_field(x: np.ndarray, spec: ProblemSpec, region: Optional[ArrayLike] = None) -> ArrayLike:
    """mu at x; an explicit region skips the domain check and uses that region's formula."""
    single = np.ndim(x) == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    regions = _regions_for(pts, spec, region)
    out = np.ones(pts.shape[0], dtype=complex)
    out[regions == Region.INNER] = 0.5
    in_pml = regions == Region.PML
    if in_pml.any():
        r = _radii(pts[in_pml])
        out[in_pml] = np.asarray(frak_b(r, spec.pml)) * np.asarray(beta(r, spec.pml))
    return _scalar_or_array(out, single)


def a_field(x: np.ndarray, spec: ProblemSpec, region: Optional[ArrayLike] = None) -> np.ndarray:
    """Symmetric 2x2 tensor A at x, shape (2, 2) or (M, 2, 2)."""
    single = np.ndim(x) == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    regions = _regions_for(pts, spec, region)
    out = np.zeros((pts.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = 1.0
    out[:, 1, 1] = 1.0
    inner = regions == Region.INNER
    out[inner] *= 2.0
    in_pml = regions == Region.PML
    if in_pml.any():
        p = pts[in_pml]
        r = _radii(p)
        b = np.asarray(beta(r, spec.pml))
        fb = np.asarray(frak_b(r, spec.pml))
        er = p / r[:, None]
        et = np.stack([-er[:, 1], er[:, 0]], axis=1)
        radial = (fb / b)[:, None, None] * np.einsum("mi,mj->mij", er, er)
        angular = (b / fb)[:, None, None] * np.einsum("mi,mj->mij", et, et)
        out[in_pml] = radial + angular
    return out[0] if single else out


def cutoff_chi(r: ArrayLike, spec: ProblemSpec) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """chi, chi' and chi'' of the erf cutoff as functions of the radius."""
    sigma = spec.cutoff_width
    t = (np.asarray(r, dtype=float) - spec.cutoff_center) / sigma
    gauss = np.exp(-t * t) / (sigma * math.sqrt(math.pi))
    chi = 0.5 * (1.0 - np.asarray(erf(t)))
    dchi = -gauss
    d2chi = 2.0 * t * gauss / sigma
    if np.ndim(r) == 0:
        return float(chi), float(dchi), float(d2chi)
    return chi, dchi, d2chi


def rhs_f(x: np.ndarray, spec: ProblemSpec) -> ArrayLike:
    """(-Laplace(chi) - 2ik d_1 chi) exp(ik x_1)."""
    single = np.ndim(x) == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    r = _radii(pts)
    _, dchi, d2chi = cutoff_chi(r, spec)
    dchi = np.asarray(dchi)
    d2chi = np.asarray(d2chi)
    safe_r = np.where(r > 0, r, 1.0)
    laplacian = np.where(r > 0, d2chi + dchi / safe_r, 2.0 * d2chi)
    d1chi = np.where(r > 0, dchi * pts[:, 0] / safe_r, 0.0)
    k = spec.wavenumber
    out = (-laplacian - 2j * k * d1chi) * np.exp(1j * k * pts[:, 0])
    return _scalar_or_array(out, single)


def incident_wave(x: np.ndarray, k: float) -> ArrayLike:
    pts = np.asarray(x, dtype=float)
    return np.exp(1j * k * pts[..., 0])


class Medium(ABC):
    """Coefficient provider consumed by the assembler."""

    wavenumber: float

    @abstractmethod
    def mu(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        """mu at points (M, 2) given per-point region tags."""
        pass

    @abstractmethod
    def tensor(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        """A at points, shape (M, 2, 2)."""
        pass

    @abstractmethod
    def source(self, points: np.ndarray) -> np.ndarray:
        """Right-hand side f at points."""
        pass


class ScattererMedium(Medium):
    """Coefficients of the sound-soft or penetrable disk problem."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.wavenumber = spec.wavenumber

    def mu(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        return np.asarray(mu_field(points, self.spec, regions))

    def tensor(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        return a_field(points, self.spec, regions)

    def source(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(rhs_f(points, self.spec))


class HomogeneousMedium(Medium):
    """Constant mu and A with an optional source; used for verification problems."""

    def __init__(
        self,
        wavenumber: float,
        mu: complex = 1.0,
        a: Union[complex, np.ndarray] = 1.0,
        source: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ):
        self.wavenumber = wavenumber
        self._mu = complex(mu)
        tensor = np.asarray(a, dtype=complex)
        self._a = tensor * np.eye(2) if tensor.ndim == 0 else tensor
        self._source = source

    def mu(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        return np.full(points.shape[0], self._mu, dtype=complex)

    def tensor(self, points: np.ndarray, regions: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self._a, (points.shape[0], 2, 2)).copy()

    def source(self, points: np.ndarray) -> np.ndarray:
        if self._source is None:
            return np.zeros(points.shape[0], dtype=complex)
        return np.asarray(self._source(points), dtype=complex)

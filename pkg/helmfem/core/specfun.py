"""Real-argument Bessel and Hankel functions of integer order, and erf.

J_n comes from Miller's backward recurrence normalized with
J_0 + 2*sum(J_2m) = 1.  Y_0 and Y_1 are the Neumann series over the same
J values, after which Y_n follows by forward recurrence.  Every routine
is vectorized over the argument.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]

EULER_GAMMA = 0.57721566490153286061
_RESCALE = 1e200
_ERF_SERIES_TERMS = 100
_ERFC_FRACTION_DEPTH = 60


@dataclass(frozen=True)
class BesselTable:
    """J_n, J'_n, Y_n, Y'_n for n = 0..order_max at one argument."""

    order_max: int
    argument: float
    j: np.ndarray
    jp: np.ndarray
    y: np.ndarray
    yp: np.ndarray

    def hankel(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.j + 1j * self.y, self.jp + 1j * self.yp


def _miller_start(order_max: int, xmax: float) -> int:
    margin = max(20, int(math.ceil(10.0 * xmax ** (1.0 / 3.0))))
    return max(order_max, int(math.ceil(xmax))) + margin


def _miller(order_max: int, x: np.ndarray) -> np.ndarray:
    """Normalized J_0..J_start for strictly positive x, shape (start + 1, M)."""
    start = _miller_start(order_max, float(np.max(x)))
    vals = np.zeros((start + 2, x.size))
    vals[start] = 1.0
    for n in range(start, 0, -1):
        vals[n - 1] = (2.0 * n / x) * vals[n] - vals[n + 1]
        big = np.abs(vals[n - 1]) > _RESCALE
        if big.any():
            vals[n - 1 :, big] /= _RESCALE
    norm = vals[0] + 2.0 * vals[2 : start + 1 : 2].sum(axis=0)
    return vals[: start + 1] / norm


def _derivatives(f: np.ndarray, order_max: int) -> np.ndarray:
    """f'_n from f_0..f_{order_max+1} via the standard three-term identities."""
    fp = np.empty((order_max + 1,) + f.shape[1:], dtype=f.dtype)
    fp[0] = -f[1]
    if order_max >= 1:
        fp[1:] = 0.5 * (f[0:order_max] - f[2 : order_max + 2])
    return fp


def _neumann_y01(j: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    log_term = np.log(0.5 * x) + EULER_GAMMA
    top = j.shape[0] - 1
    kk = np.arange(1, top // 2 + 1)
    signs = np.where(kk % 2 == 0, 1.0, -1.0)[:, None]
    s0 = (signs * j[2 * kk] / kk[:, None]).sum(axis=0)
    y0 = (2.0 / math.pi) * log_term * j[0] - (4.0 / math.pi) * s0

    kk1 = np.arange(1, (top - 1) // 2 + 1)
    signs1 = np.where(kk1 % 2 == 0, 1.0, -1.0)[:, None]
    s1 = (signs1 * (j[2 * kk1 - 1] - j[2 * kk1 + 1]) / kk1[:, None]).sum(axis=0)
    y1 = (2.0 / math.pi) * (log_term * j[1] - j[0] / x) + (2.0 / math.pi) * s1
    return y0, y1


def bessel_arrays(
    order_max: int, x: ArrayLike
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """J, J', Y, Y' of orders 0..order_max at every x > 0; arrays of shape (order_max+1, M)."""
    if order_max < 0:
        raise DomainError(f"order_max must be nonnegative, got {order_max}")
    xs = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if xs.size == 0:
        empty = np.zeros((order_max + 1, 0))
        return empty, empty, empty, empty
    if np.any(xs <= 0):
        raise DomainError("Bessel Y_n is singular for x <= 0")

    jall = _miller(order_max + 1, xs)
    y0, y1 = _neumann_y01(jall, xs)
    y = np.empty((order_max + 2, xs.size))
    y[0] = y0
    y[1] = y1
    for n in range(1, order_max + 1):
        y[n + 1] = (2.0 * n / xs) * y[n] - y[n - 1]

    j = jall[: order_max + 2]
    jp, yp = _derivatives(j, order_max), _derivatives(y, order_max)
    return j[: order_max + 1], jp, y[: order_max + 1], yp


def bessel_j_arrays(order_max: int, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """J and J' of orders 0..order_max for x >= 0 (the origin included)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if np.any(xs < 0):
        raise DomainError("bessel_j_arrays expects nonnegative arguments")
    j = np.zeros((order_max + 2, xs.size))
    positive = xs > 0
    if positive.any():
        j[:, positive] = _miller(order_max + 1, xs[positive])[: order_max + 2]
    j[0, ~positive] = 1.0
    return j[: order_max + 1], _derivatives(j, order_max)


def bessel_table(order_max: int, x: float) -> BesselTable:
    if x <= 0:
        raise DomainError(f"Bessel table requires x > 0, got {x}")
    j, jp, y, yp = bessel_arrays(order_max, x)
    return BesselTable(
        order_max=order_max, argument=float(x), j=j[:, 0], jp=jp[:, 0], y=y[:, 0], yp=yp[:, 0]
    )


def hankel1(n: int, x: float) -> Tuple[complex, complex]:
    """H^(1)_n(x) and its derivative."""
    if x <= 0:
        raise DomainError(f"Hankel function requires x > 0, got {x}")
    table = bessel_table(n, x)
    return complex(table.j[n], table.y[n]), complex(table.jp[n], table.yp[n])


def _erf_series(a: np.ndarray) -> np.ndarray:
    term = a.copy()
    total = a.copy()
    two_x2 = 2.0 * a * a
    for n in range(1, _ERF_SERIES_TERMS):
        term = term * two_x2 / (2 * n + 1)
        total = total + term
    return (2.0 / math.sqrt(math.pi)) * np.exp(-a * a) * total


def _erfc_fraction(a: np.ndarray) -> np.ndarray:
    tail = a.copy()
    for m in range(_ERFC_FRACTION_DEPTH, 0, -1):
        tail = a + (0.5 * m) / tail
    return np.exp(-a * a) / (math.sqrt(math.pi) * tail)


def erf(x: ArrayLike) -> ArrayLike:
    """Error function; odd symmetry holds exactly."""
    arr = np.asarray(x, dtype=float)
    a = np.abs(np.atleast_1d(arr))
    out = np.empty_like(a)
    small = a < 3.0
    if small.any():
        out[small] = _erf_series(a[small])
    if (~small).any():
        out[~small] = 1.0 - _erfc_fraction(a[~small])
    out = np.copysign(out, np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)

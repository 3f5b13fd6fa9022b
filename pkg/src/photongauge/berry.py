"""Berry-gauge potential and curvature of the photon in momentum space.

The gauge potential of gauge ``I`` is

    A(k, I) = (I.k) / (|k| |I x k|) * v(k, I),

its curl is the gauge-independent monopole field ``B = -w / k^2``, and a
change of gauge shifts it by the gradient of the frame rotation angle:
``A(k, I') = A(k, I) + grad phi(k; I, I')``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DiracStringError, ZeroWaveVectorError
from .fields import MomentumGrid, _readonly, grid_frames
from .geometry import (
    as_gauge,
    as_wavevector,
    frame_vectors,
    gauge_key,
    rotation_angle,
    rotation_angles,
    wrap_angle,
)

DEFAULT_RELATIVE_STEP = 1e-4


def potential_A(k, I) -> np.ndarray:
    """Berry-gauge potential at ``k`` (single vector or stack ``(..., 3)``)."""
    k = as_wavevector(k)
    I = as_gauge(I)
    _, v, _ = frame_vectors(k, I)
    kmag = np.linalg.norm(k, axis=-1)
    cmag = np.linalg.norm(np.cross(I, k), axis=-1)
    coef = (k @ I) / (kmag * cmag)
    return coef[..., None] * v


def curvature_B(k) -> np.ndarray:
    """Monopole curvature ``-k / |k|^3``."""
    k = as_wavevector(k)
    kmag = np.linalg.norm(k, axis=-1)
    if np.any(kmag == 0.0):
        raise ZeroWaveVectorError("curvature is singular at k = 0")
    return -k / kmag[..., None] ** 3


def _step(k: np.ndarray, h) -> float:
    if h is None:
        return DEFAULT_RELATIVE_STEP * float(np.linalg.norm(k))
    h = float(h)
    if not h > 0.0:
        raise ValueError("finite-difference step must be positive")
    return h


def _check_ball(k: np.ndarray, I: np.ndarray, radius: float) -> None:
    # distance from k to the string line through the origin along I
    if np.linalg.norm(np.cross(I, k)) <= radius:
        raise DiracStringError(f"stencil ball of radius {radius:g} around {k.tolist()} meets the string")


def numeric_curl(I, k, h=None) -> np.ndarray:
    """Second-order central-difference curl of :func:`potential_A` at ``k``.

    ``h`` defaults to ``1e-4 * |k|``.
    """
    I = as_gauge(I)
    k = as_wavevector(k)
    h = _step(k, h)
    _check_ball(k, I, 2.0 * h)
    eye = np.eye(3)
    # jac[a, b] = d A_b / d k_a
    points = np.concatenate((k + h * eye, k - h * eye))
    A = potential_A(points, I)
    jac = (A[:3] - A[3:]) / (2.0 * h)
    return np.array([
        jac[1, 2] - jac[2, 1],
        jac[2, 0] - jac[0, 2],
        jac[0, 1] - jac[1, 0],
    ])


def monopole_flux(k_radius: float, n_theta: int = 64, n_phi: int = 64) -> float:
    """Flux of :func:`curvature_B` through the sphere ``|k| = k_radius``.

    Gauss-Legendre nodes in ``cos(theta)`` times the trapezoid rule in ``phi``.
    """
    if not k_radius > 0.0:
        raise ValueError("sphere radius must be positive")
    if n_theta < 8 or n_phi < 8:
        raise ValueError("at least 8 nodes in each angle are required")
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    sin_t = np.sqrt(1.0 - x**2)
    normal = np.stack(
        (np.outer(sin_t, np.cos(phi)), np.outer(sin_t, np.sin(phi)), np.broadcast_to(x[:, None], (n_theta, n_phi))),
        axis=-1,
    )
    B = curvature_B(k_radius * normal)
    integrand = np.sum(B * normal, axis=-1) * k_radius**2
    return float(np.sum(wx[:, None] * integrand) * (2.0 * np.pi / n_phi))


def gauge_potential_shift(k, I, Iprime, h=None) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of ``A(k, I') - A(k, I) = grad phi(k; I, I')``.

    Returns ``(lhs, rhs)`` where ``rhs`` is the central-difference gradient of
    the rotation angle, each difference taken on the principal branch.
    """
    k = as_wavevector(k)
    I, Iprime = as_gauge(I), as_gauge(Iprime)
    h = _step(k, h)
    _check_ball(k, I, 2.0 * h)
    _check_ball(k, Iprime, 2.0 * h)
    lhs = potential_A(k, Iprime) - potential_A(k, I)
    rhs = np.empty(3)
    for a, e in enumerate(np.eye(3)):
        dphi = rotation_angle(k + h * e, I, Iprime) - rotation_angle(k - h * e, I, Iprime)
        rhs[a] = wrap_angle(dphi) / (2.0 * h)
    return lhs, rhs


def rotation_angle_gradient(k, I, Iprime, relative_step: float = DEFAULT_RELATIVE_STEP) -> np.ndarray:
    """Central-difference ``grad phi(k; I, I')`` for a stack of wavevectors.

    The step at each point is ``relative_step * |k|``.
    """
    k = as_wavevector(k)
    h = relative_step * np.linalg.norm(k, axis=-1)[..., None]
    grad = np.empty(k.shape)
    for a, e in enumerate(np.eye(3)):
        dphi = rotation_angles(k + h * e, I, Iprime) - rotation_angles(k - h * e, I, Iprime)
        grad[..., a] = wrap_angle(dphi) / (2.0 * h[..., 0])
    return grad


@lru_cache(maxsize=6)
def _potential_cached(grid: MomentumGrid, gauge: tuple) -> np.ndarray:
    _, v, _ = grid_frames(grid, gauge)
    I = np.array(gauge)
    k, kmag = grid.k, grid.kmag
    cmag = np.linalg.norm(np.cross(I, k), axis=-1)
    coef = np.where(grid.mask, (k @ I) / np.where(grid.mask, kmag * cmag, 1.0), 0.0)
    return _readonly(coef[..., None] * v)


def potential_on_grid(grid: MomentumGrid, gauge) -> np.ndarray:
    """:func:`potential_A` at every grid node, shape ``(nz, ny, nx, 3)`` (cached)."""
    return _potential_cached(grid, gauge_key(gauge))

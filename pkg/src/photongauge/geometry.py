"""Local frames {u, v, w} in momentum space and the rotation between gauges.

A constant unit vector ``I`` (the gauge vector) fixes the transverse axes at
every wavevector ``k``::

    v = I x k / |I x k|,   u = v x k / |k|,   w = k / |k|

The construction is undefined on the Dirac string ``w = +-I``; points within
``STRING_TOLERANCE`` (sine of the angle to the string) are refused.

All functions accept a single 3-vector or a stack of shape ``(..., 3)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiracStringError, GaugeNormError, ZeroWaveVectorError

STRING_TOLERANCE = 1e-6
UNIT_TOLERANCE = 1e-12


def as_wavevector(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape[-1:] != (3,):
        raise ValueError(f"wavevector must have a trailing axis of length 3, got shape {k.shape}")
    return k


def as_gauge(I) -> np.ndarray:
    """Validate a gauge vector and return it as a float array of shape (3,)."""
    I = np.asarray(I, dtype=float)
    if I.shape != (3,):
        raise ValueError(f"gauge vector must have shape (3,), got {I.shape}")
    if not np.all(np.isfinite(I)) or abs(np.linalg.norm(I) - 1.0) > UNIT_TOLERANCE:
        raise GaugeNormError(f"gauge vector {I.tolist()} is not a unit vector")
    return I


def gauge_key(I) -> tuple[float, float, float]:
    """Hashable form of a validated gauge vector."""
    I = as_gauge(I)
    return (float(I[0]), float(I[1]), float(I[2]))


@dataclass(frozen=True)
class Triad:
    """Right-handed orthonormal frame at one momentum point."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def frame_matrix(self) -> np.ndarray:
        """The 3x2 matrix whose columns are u and v."""
        return np.column_stack((self.u, self.v))


def string_distance(k, I) -> np.ndarray | float:
    """Sine of the angle between ``k`` and the string axis of gauge ``I``.

    Returns a value in [0, 1]; raises ``ZeroWaveVectorError`` if any ``k`` is zero.
    """
    k = as_wavevector(k)
    I = np.asarray(I, dtype=float)
    kmag = np.linalg.norm(k, axis=-1)
    if np.any(kmag == 0.0):
        raise ZeroWaveVectorError("string distance is undefined at k = 0")
    d = np.linalg.norm(np.cross(I, k), axis=-1) / (np.linalg.norm(I) * kmag)
    d = np.clip(d, 0.0, 1.0)
    return float(d) if d.ndim == 0 else d


def frame_vectors(k, I, where=None, tol: float = STRING_TOLERANCE):
    """Vectorised triad construction.

    Parameters
    ----------
    k : array_like, shape (..., 3)
        Wavevectors.
    I : array_like, shape (3,)
        Unit gauge vector.
    where : array_like of bool, optional
        Points to construct; the others are returned as zero vectors and
        are not checked. Defaults to all points.
    tol : float
        Minimal admissible string distance.

    Returns
    -------
    u, v, w : ndarray, shape (..., 3)
    """
    k = as_wavevector(k)
    I = as_gauge(I)
    if where is None:
        where = np.ones(k.shape[:-1], dtype=bool)
    where = np.asarray(where, dtype=bool)

    kmag = np.linalg.norm(k, axis=-1)
    if np.any(kmag[where] == 0.0):
        raise ZeroWaveVectorError("frame is undefined at k = 0")
    cross = np.cross(I, k)
    cmag = np.linalg.norm(cross, axis=-1)
    safe_k = np.where(where, kmag, 1.0)
    dist = np.where(where, cmag / safe_k, 1.0)
    if np.any(dist <= tol):
        bad = k[where & (dist <= tol)]
        raise DiracStringError(
            f"{len(bad)} point(s) within string tolerance {tol:g} of gauge {I.tolist()}, "
            f"e.g. k = {bad[0].tolist()}"
        )
    safe_c = np.where(where, cmag, 1.0)
    w = np.where(where[..., None], k / safe_k[..., None], 0.0)
    v = np.where(where[..., None], cross / safe_c[..., None], 0.0)
    u = np.cross(v, w)
    return u, v, w


def build_triad(k, I) -> Triad:
    """Frame {u, v, w} at a single wavevector ``k`` in gauge ``I``."""
    k = as_wavevector(k)
    if k.shape != (3,):
        raise ValueError("build_triad takes a single wavevector; use frame_vectors for stacks")
    u, v, w = frame_vectors(k, I)
    return Triad(u, v, w)


def wrap_angle(phi):
    """Map angles onto the principal branch (-pi, pi]."""
    phi = np.asarray(phi, dtype=float)
    wrapped = np.pi - np.mod(np.pi - phi, 2.0 * np.pi)
    return float(wrapped) if wrapped.ndim == 0 else wrapped


def rotation_angles(k, I, Iprime, where=None) -> np.ndarray:
    """Angle of the rotation about ``k`` that carries frame ``I`` into frame ``I'``.

    With ``u' = u cos(phi) + v sin(phi)`` the angle is ``atan2(u'.v, u'.u)``,
    i.e. the frame matrices obey ``(u' v') = (u v) exp(-i sigma3 phi)``.
    """
    u, v, _ = frame_vectors(k, I, where=where)
    up, _, _ = frame_vectors(k, Iprime, where=where)
    phi = np.arctan2(np.sum(up * v, axis=-1), np.sum(up * u, axis=-1))
    return wrap_angle(phi)


def rotation_angle(k, I, Iprime) -> float:
    """Gauge rotation angle at a single wavevector, in (-pi, pi]."""
    k = as_wavevector(k)
    if k.shape != (3,):
        raise ValueError("rotation_angle takes a single wavevector")
    return float(rotation_angles(k, I, Iprime))

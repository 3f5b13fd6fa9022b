"""Momentum-space wavefunctions on a uniform grid.

Two representations are supported:

* :class:`VectorField` -- the three-component, gauge-independent wavefunction
  ``f(k)`` defined in the laboratory frame;
* :class:`SpinorField` -- the two-component wavefunction ``f~(k)`` defined in
  the local frame {u, v, w} of a gauge vector ``I``.

They are related pointwise by ``f = W f~`` and ``f~ = W^T f`` with ``W`` the
real 3x2 frame matrix ``(u v)``.

Layout
------
Values are stored as arrays of shape ``(nz, ny, nx, ncomp)`` in C order, so
the flattened point index is ``ix + nx * (iy + ny * iz)`` (x fastest). Grid
axis 0 (k_x) is array axis 2, grid axis 2 (k_z) is array axis 0.

Grid nodes sit at cell centres, ``k_i = kmin + (i + 1/2) h``, and integrals
are midpoint sums with the flat measure ``d^3k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache

import numpy as np

from .errors import GaugeMismatchError, GridMismatchError, RepresentationError
from .geometry import frame_vectors, gauge_key, rotation_angles

MIN_POINTS = 8


def array_axis(axis: int) -> int:
    """Array axis holding Cartesian grid axis ``axis`` (0=x, 1=y, 2=z)."""
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be 0, 1 or 2, got {axis!r}")
    return 2 - axis


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform Cartesian grid in k-space.

    Parameters
    ----------
    extents : ((kx_min, kx_max), (ky_min, ky_max), (kz_min, kz_max))
    points : (nx, ny, nz)
    """

    extents: tuple
    points: tuple

    def __post_init__(self):
        extents = tuple((float(lo), float(hi)) for lo, hi in self.extents)
        points = tuple(int(n) for n in self.points)
        if len(extents) != 3 or len(points) != 3:
            raise ValueError("a momentum grid needs three extents and three point counts")
        for (lo, hi), n in zip(extents, points):
            if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
                raise ValueError(f"invalid extent [{lo}, {hi}]")
            if n < MIN_POINTS:
                raise ValueError(f"at least {MIN_POINTS} points per axis are required, got {n}")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "points", points)

    @classmethod
    def centered(cls, center, half_widths, points) -> "MomentumGrid":
        """Grid spanning ``center +- half_widths`` with ``points`` nodes per axis."""
        center = np.broadcast_to(np.asarray(center, dtype=float), (3,))
        half = np.broadcast_to(np.asarray(half_widths, dtype=float), (3,))
        n = np.broadcast_to(np.asarray(points, dtype=int), (3,))
        return cls(tuple((c - hw, c + hw) for c, hw in zip(center, half)), tuple(n))

    @property
    def shape(self) -> tuple[int, int, int]:
        nx, ny, nz = self.points
        return (nz, ny, nx)

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def spacing(self) -> tuple[float, float, float]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.extents, self.points))

    @property
    def cell_volume(self) -> float:
        hx, hy, hz = self.spacing
        return hx * hy * hz

    def nodes(self, axis: int) -> np.ndarray:
        lo, _ = self.extents[axis]
        return lo + (np.arange(self.points[axis]) + 0.5) * self.spacing[axis]

    @cached_property
    def k(self) -> np.ndarray:
        """Wavevectors at every node, shape ``(nz, ny, nx, 3)``."""
        kz, ky, kx = np.meshgrid(self.nodes(2), self.nodes(1), self.nodes(0), indexing="ij")
        return _readonly(np.stack((kx, ky, kz), axis=-1))

    @cached_property
    def kmag(self) -> np.ndarray:
        return _readonly(np.linalg.norm(self.k, axis=-1))

    @cached_property
    def w(self) -> np.ndarray:
        """Unit wavevectors (zero at a sampled origin)."""
        safe = np.where(self.mask, self.kmag, 1.0)[..., None]
        return _readonly(np.where(self.mask[..., None], self.k / safe, 0.0))

    @cached_property
    def mask(self) -> np.ndarray:
        """True at nodes with k != 0; the origin (if sampled) carries no frame."""
        return _readonly(self.kmag > 0.0)

    def metadata(self) -> dict:
        return {
            "extents": [list(e) for e in self.extents],
            "points": list(self.points),
            "spacing": list(self.spacing),
            "cell_volume": self.cell_volume,
        }


@lru_cache(maxsize=6)
def _frames_cached(grid: MomentumGrid, gauge: tuple) -> tuple:
    u, v, w = frame_vectors(grid.k, np.array(gauge), where=grid.mask)
    return _readonly(u), _readonly(v), _readonly(w)


def grid_frames(grid: MomentumGrid, gauge) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frame vectors u, v, w at every grid node (read-only, cached per grid and gauge).

    Raises ``DiracStringError`` if any unmasked node lies on the string of ``gauge``.
    """
    return _frames_cached(grid, gauge_key(gauge))


class _Field:
    """Shared arithmetic for the two field representations."""

    ncomp: int

    def _init_values(self):
        values = np.array(self.values, dtype=complex)
        expected = self.grid.shape + (self.ncomp,)
        if values.shape != expected:
            raise ValueError(f"values must have shape {expected}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "time", float(self.time))

    def _compatible(self, other) -> None:
        if type(other) is not type(self):
            raise RepresentationError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.grid != self.grid:
            raise GridMismatchError("fields live on different grids")
        if getattr(self, "gauge", None) != getattr(other, "gauge", None):
            raise GaugeMismatchError(f"gauges differ: {self.gauge} vs {other.gauge}")

    def with_values(self, values, **changes):
        return replace(self, values=values, **changes)

    def __add__(self, other):
        self._compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self.with_values(scalar * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def __truediv__(self, scalar):
        return self.with_values(self.values / scalar)

    def norm(self) -> float:
        return float(np.sqrt(inner_product(self, self).real))

    def normalized(self):
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalise the zero field")
        return self / n

    def flat_values(self) -> np.ndarray:
        """Values as ``(npoints, ncomp)`` with x varying fastest."""
        return self.values.reshape(-1, self.ncomp)


@dataclass(frozen=True, eq=False)
class VectorField(_Field):
    """Three-component wavefunction in the laboratory frame."""

    grid: MomentumGrid
    values: np.ndarray
    time: float = 0.0
    ncomp = 3

    def __post_init__(self):
        self._init_values()

    @classmethod
    def zeros(cls, grid: MomentumGrid, time: float = 0.0) -> "VectorField":
        return cls(grid, np.zeros(grid.shape + (3,), dtype=complex), time)


@dataclass(frozen=True, eq=False)
class SpinorField(_Field):
    """Two-component wavefunction in the local frame of gauge ``gauge``.

    The grid/gauge pairing is validated on construction.
    """

    grid: MomentumGrid
    values: np.ndarray
    gauge: tuple = field(default=(0.0, 0.0, 1.0))
    time: float = 0.0
    ncomp = 2

    def __post_init__(self):
        object.__setattr__(self, "gauge", gauge_key(self.gauge))
        grid_frames(self.grid, self.gauge)
        self._init_values()

    @classmethod
    def zeros(cls, grid: MomentumGrid, gauge, time: float = 0.0) -> "SpinorField":
        return cls(grid, np.zeros(grid.shape + (2,), dtype=complex), gauge, time)


def project_to_spinor(F: VectorField, I) -> SpinorField:
    """Two-component wavefunction ``f~ = W^T f`` of ``F`` in gauge ``I``."""
    if not isinstance(F, VectorField):
        raise RepresentationError("project_to_spinor expects a VectorField")
    u, v, _ = grid_frames(F.grid, I)
    f1 = np.einsum("...i,...i->...", u, F.values)
    f2 = np.einsum("...i,...i->...", v, F.values)
    return SpinorField(F.grid, np.stack((f1, f2), axis=-1), I, F.time)


def embed_to_vector(G: SpinorField) -> VectorField:
    """Transverse vector wavefunction ``f = u f~_1 + v f~_2``."""
    if not isinstance(G, SpinorField):
        raise RepresentationError("embed_to_vector expects a SpinorField")
    u, v, _ = grid_frames(G.grid, G.gauge)
    f = u * G.values[..., 0:1] + v * G.values[..., 1:2]
    return VectorField(G.grid, f, G.time)


def inner_product(F1, F2) -> complex:
    """Midpoint-rule inner product ``sum conj(F1) . F2 d^3k``.

    The sum is a plain ``numpy.sum`` over a fixed layout, so it is
    deterministic for a given build of numpy.
    """
    if type(F1) is not type(F2):
        raise RepresentationError("inner product needs two fields of the same representation")
    if F1.grid != F2.grid:
        raise GridMismatchError("fields live on different grids")
    if isinstance(F1, SpinorField) and F1.gauge != F2.gauge:
        raise GaugeMismatchError(f"gauges differ: {F1.gauge} vs {F2.gauge}")
    return complex(np.sum(np.conj(F1.values) * F2.values) * F1.grid.cell_volume)


def transversality_residual(F: VectorField) -> float:
    """Largest ``|f.w| / |f|`` over points carrying non-negligible amplitude."""
    amp = np.linalg.norm(F.values, axis=-1)
    peak = amp.max()
    if peak == 0.0:
        return 0.0
    keep = (amp > 1e-12 * peak) & F.grid.mask
    longitudinal = np.abs(np.einsum("...i,...i->...", F.values, F.grid.w))
    return float(np.max(longitudinal[keep] / amp[keep]))


def gauge_transport(G: SpinorField, Iprime) -> SpinorField:
    """Re-express ``G`` in gauge ``I'``: ``f~' = exp(i sigma3 phi) f~`` pointwise."""
    phi = rotation_angles(G.grid.k, G.gauge, Iprime, where=G.grid.mask)
    c, s = np.cos(phi), np.sin(phi)
    f1, f2 = G.values[..., 0], G.values[..., 1]
    out = np.stack((c * f1 + s * f2, -s * f1 + c * f2), axis=-1)
    return SpinorField(G.grid, out, Iprime, G.time)


def evolve_free(F, dt: float, c: float = 1.0):
    """Free evolution over ``dt``: multiply by ``exp(-i c |k| dt)``."""
    dt = float(dt)
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    phase = np.exp(-1j * c * F.grid.kmag * dt)[..., None]
    return F.with_values(F.values * phase, time=F.time + dt)

"""Physical test states: helicity spinors, narrow wavepackets and paraxial vortex beams."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridCoverageError, StringClearanceError
from .fields import MomentumGrid, SpinorField
from .geometry import STRING_TOLERANCE, as_gauge, as_wavevector, string_distance

WIDTHS_COVERED = 10.0
SUPPORT_WIDTHS = 3.0
MIN_STRING_ANGLE = np.deg2rad(20.0)
MAX_DIVERGENCE = 0.2
MAX_CHARGE = 6
DECAY_TOLERANCE = 1e-14


def make_helicity_spinor(sigma: int) -> np.ndarray:
    """Eigenvector ``(1, i sigma)/sqrt(2)`` of sigma3 with eigenvalue ``sigma``."""
    if sigma not in (1, -1):
        raise ValueError(f"helicity must be +1 or -1, got {sigma!r}")
    return np.array([1.0, 1j * sigma]) / np.sqrt(2.0)


@dataclass(frozen=True)
class BeamSpec:
    """Parameters of a test state.

    ``sigma`` selects a pure helicity; ``weights`` (amplitudes of helicity +1
    and -1) overrides it with a superposition. ``r0`` adds the phase
    ``exp(-i k.r0)``, shifting the canonical position by ``r0``.
    ``delta_par`` defaults to ``delta_perp``.
    """

    kind: str
    k0: tuple
    delta_perp: float
    gauge: tuple = (0.0, 0.0, 1.0)
    sigma: int = 1
    weights: tuple | None = None
    l: int = 0
    delta_par: float | None = None
    r0: tuple = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        if self.kind not in ("wavepacket", "paraxial_vortex"):
            raise ValueError(f"unknown beam kind {self.kind!r}")
        k0 = as_wavevector(self.k0)
        if k0.shape != (3,) or not np.linalg.norm(k0) > 0:
            raise ValueError("carrier wavevector k0 must be a nonzero 3-vector")
        object.__setattr__(self, "k0", tuple(float(x) for x in k0))
        object.__setattr__(self, "gauge", tuple(float(x) for x in as_gauge(self.gauge)))
        object.__setattr__(self, "r0", tuple(float(x) for x in np.broadcast_to(np.asarray(self.r0, float), (3,))))
        if self.delta_par is None:
            object.__setattr__(self, "delta_par", float(self.delta_perp))
        if not (self.delta_perp > 0 and self.delta_par > 0):
            raise ValueError("beam widths must be positive")
        if self.weights is None:
            make_helicity_spinor(self.sigma)
        elif len(self.weights) != 2 or not np.any(np.abs(self.weights) > 0):
            raise ValueError("helicity weights must be two amplitudes, not both zero")
        if self.kind == "paraxial_vortex":
            if abs(self.l) > MAX_CHARGE or int(self.l) != self.l:
                raise ValueError(f"vortex charge must be an integer with |l| <= {MAX_CHARGE}")
            if self.divergence >= MAX_DIVERGENCE:
                raise ValueError(f"divergence {self.divergence:.3g} is not paraxial (< {MAX_DIVERGENCE})")

    @property
    def k0_vector(self) -> np.ndarray:
        return np.array(self.k0)

    @property
    def k0_norm(self) -> float:
        return float(np.linalg.norm(self.k0))

    @property
    def divergence(self) -> float:
        return self.delta_perp / self.k0_norm

    def polarization(self) -> np.ndarray:
        """Normalised two-component polarisation spinor."""
        if self.weights is None:
            return make_helicity_spinor(self.sigma)
        cp, cm = (complex(w) for w in self.weights)
        alpha = cp * make_helicity_spinor(1) + cm * make_helicity_spinor(-1)
        return alpha / np.linalg.norm(alpha)

    def widths(self) -> np.ndarray:
        """Envelope width along each Cartesian axis, used for grid sizing."""
        if self.kind == "paraxial_vortex":
            return np.array([self.delta_perp, self.delta_perp, self.delta_par])
        return np.full(3, max(self.delta_perp, self.delta_par))

    def center(self) -> np.ndarray:
        if self.kind == "paraxial_vortex":
            return np.array([0.0, 0.0, self.k0_norm])
        return self.k0_vector


def default_grid(spec: BeamSpec, points: int = 64, widths: float = WIDTHS_COVERED) -> MomentumGrid:
    """Grid centred on the beam covering ``widths`` envelope widths on each side."""
    return MomentumGrid.centered(spec.center(), widths * spec.widths(), points)


def _angle_to_string(direction: np.ndarray, I: np.ndarray) -> float:
    c = abs(float(direction @ I)) / np.linalg.norm(direction)
    return float(np.arccos(min(1.0, c)))


def _support_radius(spec: BeamSpec) -> float:
    return float(np.arcsin(min(1.0, SUPPORT_WIDTHS * spec.widths().max() / spec.k0_norm)))


def _check_coverage(spec: BeamSpec, grid: MomentumGrid) -> None:
    lo = spec.center() - WIDTHS_COVERED * spec.widths()
    hi = spec.center() + WIDTHS_COVERED * spec.widths()
    tol = 1e-9 * spec.widths()
    for a, (kmin, kmax) in enumerate(grid.extents):
        if kmin > lo[a] + tol[a] or kmax < hi[a] - tol[a]:
            raise GridCoverageError(
                f"grid axis {'xyz'[a]} spans [{kmin:g}, {kmax:g}] but the beam needs "
                f"[{lo[a]:g}, {hi[a]:g}] ({WIDTHS_COVERED:g} widths)"
            )


def _finish(spec: BeamSpec, grid: MomentumGrid, envelope: np.ndarray) -> SpinorField:
    envelope = envelope * np.exp(-1j * (grid.k @ np.array(spec.r0)))
    amp = np.abs(envelope)
    faces = [np.take(amp, i, axis=a).max() for a in range(3) for i in (0, -1)]
    if max(faces) > DECAY_TOLERANCE * amp.max():
        raise GridCoverageError(f"beam has not decayed to {DECAY_TOLERANCE:.0e} of its peak at the grid edge")
    values = envelope[..., None] * spec.polarization()
    return SpinorField(grid, values, spec.gauge).normalized()


def make_wavepacket(spec: BeamSpec, grid: MomentumGrid | None = None, points: int = 64) -> SpinorField:
    """Gaussian packet around ``k0`` approximating a helicity-momentum eigenstate.

    The envelope is ``exp(-q_par^2/(2 delta_par^2) - q_perp^2/(2 delta_perp^2))``
    with ``q = k - k0`` split along and across ``k0``; the field is unit-normalised.

    Raises
    ------
    StringClearanceError
        If the ``3``-width support comes within 20 degrees of the Dirac string.
    GridCoverageError
        If ``grid`` does not span 10 widths around ``k0`` or the packet has
        not decayed at its edges.
    """
    if spec.kind != "wavepacket":
        raise ValueError("make_wavepacket needs a BeamSpec of kind 'wavepacket'")
    I = np.array(spec.gauge)
    clearance = _angle_to_string(spec.k0_vector, I) - _support_radius(spec)
    if clearance < MIN_STRING_ANGLE:
        raise StringClearanceError(
            f"packet support passes {np.rad2deg(clearance):.1f} deg from the string of gauge {spec.gauge} "
            f"(need {np.rad2deg(MIN_STRING_ANGLE):.0f})"
        )
    grid = default_grid(spec, points) if grid is None else grid
    _check_coverage(spec, grid)
    q = grid.k - spec.k0_vector
    axis = spec.k0_vector / spec.k0_norm
    q_par = q @ axis
    q_perp2 = np.sum(q * q, axis=-1) - q_par**2
    envelope = np.exp(-0.5 * q_par**2 / spec.delta_par**2 - 0.5 * q_perp2 / spec.delta_perp**2)
    return _finish(spec, grid, envelope)


def make_paraxial_vortex(spec: BeamSpec, grid: MomentumGrid | None = None, points: int = 64) -> SpinorField:
    """Vortex beam along +z with azimuthal phase ``exp(i l phi_k)``.

    Profile ``(k_perp/delta_perp)^|l| exp(-k_perp^2/(2 delta_perp^2))
    exp(-(k_z - |k0|)^2/(2 delta_par^2))``. ``k0`` only supplies the carrier
    magnitude; the propagation axis is the grid's z axis.

    A gauge along +-z puts the string on the beam axis. That is accepted for
    ``l != 0`` (the amplitude vanishes on the axis) and refused for ``l = 0``.
    """
    if spec.kind != "paraxial_vortex":
        raise ValueError("make_paraxial_vortex needs a BeamSpec of kind 'paraxial_vortex'")
    I = np.array(spec.gauge)
    zhat = np.array([0.0, 0.0, 1.0])
    on_axis = string_distance(zhat, I) <= STRING_TOLERANCE
    if on_axis:
        if spec.l == 0:
            raise StringClearanceError("an l = 0 beam has amplitude on its axis, which is the string of this gauge")
    else:
        clearance = _angle_to_string(zhat, I) - _support_radius(spec)
        if clearance < MIN_STRING_ANGLE:
            raise StringClearanceError(
                f"beam support passes {np.rad2deg(clearance):.1f} deg from the string of gauge {spec.gauge}"
            )
    grid = default_grid(spec, points) if grid is None else grid
    _check_coverage(spec, grid)
    kx, ky, kz = grid.k[..., 0], grid.k[..., 1], grid.k[..., 2]
    l = int(spec.l)
    # (k_perp e^{+-i phi})^|l| is a polynomial, smooth through the axis
    transverse = ((kx + 1j * np.sign(l) * ky) / spec.delta_perp) ** abs(l)
    envelope = transverse * np.exp(
        -0.5 * (kx**2 + ky**2) / spec.delta_perp**2 - 0.5 * (kz - spec.k0_norm) ** 2 / spec.delta_par**2
    )
    return _finish(spec, grid, envelope)


def standard_test_packet(sigma: int = 1, gauge=(0.0, 0.0, 1.0), points: int = 64,
                         k0=(1.0, 1.0, 1.0), relative_width: float = 0.05,
                         r0=(3.0, -2.0, 1.0), widths: float = WIDTHS_COVERED) -> SpinorField:
    """Packet used for commutator checks: carrier ``k0``, width
    ``relative_width * |k0|`` and canonical position ``r0 / |k0|``."""
    k0 = np.asarray(k0, dtype=float)
    spec = BeamSpec("wavepacket", tuple(k0), relative_width * np.linalg.norm(k0), gauge=gauge, sigma=sigma,
                    r0=tuple(np.asarray(r0, float) / np.linalg.norm(k0)))
    return make_wavepacket(spec, grid=default_grid(spec, points, widths))

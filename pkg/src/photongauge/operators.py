"""Operator actions on discretised photon wavefunctions.

Spinor (gauge) representation, for a field ``G`` in gauge ``I``:

=============  ===========================================  ==========
name           action                                       function
=============  ===========================================  ==========
``p``          ``hbar k``                                   apply_momentum
``omega``      ``c |k|``                                    apply_hamiltonian
``xi``         ``i d/dk`` (canonical position)              apply_canonical_position
``b``          ``sigma3 A(k, I)`` (reference point)         apply_reference_point
``x``          ``xi + b`` (laboratory position)             apply_lab_position
``s``          ``hbar sigma3 w``                            apply_spin
``lambda``     ``-p x xi`` (canonical OAM)                  apply_canonical_oam
``m``          ``hbar sigma3 (I.k)/|I x k| u`` (= b x p)    apply_intrinsic_oam
``l``          ``lambda + m``                               apply_total_oam
=============  ===========================================  ==========

Vector representation: ``X = i d/dk`` (apply_vector_position),
``L = -P x X`` (apply_vector_oam) and ``S = hbar Sigma`` with
``(Sigma_k)_ij = -i eps_ijk`` (apply_vector_spin).

Conventions: ``sigma3 = [[0, -i], [i, 0]]``; ``hbar = c = 1`` unless passed.
Every action returns a new field; none mutates its input.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .berry import potential_on_grid
from .differentiation import DEFAULT_METHOD, derivative
from .errors import BoundaryDecayError, RepresentationError
from .fields import SpinorField, VectorField, array_axis, grid_frames, inner_product

SIGMA3 = np.array([[0.0, -1j], [1j, 0.0]])

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0

# (SPIN_MATRICES[k])_ij = -i eps_ijk
SPIN_MATRICES = -1j * np.moveaxis(LEVI_CIVITA, 2, 0)

DECAY_TOLERANCE = 1e-14


def _cyclic(axis: int) -> tuple[int, int]:
    return (axis + 1) % 3, (axis + 2) % 3


def _sigma3_values(values: np.ndarray) -> np.ndarray:
    return np.stack((-1j * values[..., 1], 1j * values[..., 0]), axis=-1)


def _require_spinor(G) -> None:
    if not isinstance(G, SpinorField):
        raise RepresentationError(f"expected a SpinorField, got {type(G).__name__}")


def _require_vector(F) -> None:
    if not isinstance(F, VectorField):
        raise RepresentationError(f"expected a VectorField, got {type(F).__name__}")


def check_boundary_decay(F, axis: int, tol: float = DECAY_TOLERANCE) -> None:
    """Raise ``BoundaryDecayError`` unless ``F`` is below ``tol * peak`` on the
    two grid faces normal to ``axis``."""
    amp = np.abs(F.values)
    peak = amp.max()
    if peak == 0.0:
        return
    ax = array_axis(axis)
    edge = max(np.take(amp, 0, axis=ax).max(), np.take(amp, -1, axis=ax).max())
    if edge > tol * peak:
        raise BoundaryDecayError(
            f"field reaches {edge / peak:.2e} of its peak on the k_{'xyz'[axis]} boundary "
            f"(limit {tol:.0e}); enlarge the grid"
        )


def _d(F, axis: int, method: str) -> np.ndarray:
    check_boundary_decay(F, axis)
    return derivative(F.values, array_axis(axis), F.grid.spacing[axis], method)


def apply_momentum(G, axis: int, hbar: float = 1.0):
    """Component ``axis`` of the momentum ``hbar k`` (either representation)."""
    k = G.grid.k[..., axis]
    return G.with_values(hbar * k[..., None] * G.values)


def apply_hamiltonian(G, c: float = 1.0):
    """Multiply by the angular frequency ``c |k|`` (either representation)."""
    return G.with_values(c * G.grid.kmag[..., None] * G.values)


def apply_canonical_position(G: SpinorField, axis: int, method: str = DEFAULT_METHOD) -> SpinorField:
    """``xi_axis = i d/dk_axis``.

    Raises ``BoundaryDecayError`` if ``G`` has not decayed at the grid edge.
    """
    _require_spinor(G)
    return G.with_values(1j * _d(G, axis, method))


def apply_reference_point(G: SpinorField, axis: int) -> SpinorField:
    """``b_axis = sigma3 A_axis(k, I)`` in the field's own gauge."""
    _require_spinor(G)
    A = potential_on_grid(G.grid, G.gauge)[..., axis]
    return G.with_values(A[..., None] * _sigma3_values(G.values))


def apply_lab_position(G: SpinorField, axis: int, method: str = DEFAULT_METHOD) -> SpinorField:
    return apply_canonical_position(G, axis, method) + apply_reference_point(G, axis)


def apply_spin(G: SpinorField, axis: int, hbar: float = 1.0) -> SpinorField:
    """``s_axis = hbar sigma3 w_axis``."""
    _require_spinor(G)
    w = G.grid.w[..., axis]
    return G.with_values(hbar * w[..., None] * _sigma3_values(G.values))


def apply_canonical_oam(G: SpinorField, axis: int, hbar: float = 1.0, method: str = DEFAULT_METHOD) -> SpinorField:
    """``lambda_a = -i hbar (k_b d_c - k_c d_b)`` with (a, b, c) cyclic.

    Each term pairs distinct indices, so the momentum factor commutes with
    the derivative; it is applied after differentiating.
    """
    _require_spinor(G)
    b, c = _cyclic(axis)
    k = G.grid.k
    out = k[..., b, None] * _d(G, c, method) - k[..., c, None] * _d(G, b, method)
    return G.with_values(-1j * hbar * out)


def intrinsic_oam_profile(grid, gauge) -> np.ndarray:
    """Vector function ``(I.k)/|I x k| u`` on the grid; ``m = hbar sigma3`` times it."""
    u, _, _ = grid_frames(grid, gauge)
    I = np.asarray(gauge, dtype=float)
    k = grid.k
    cmag = np.linalg.norm(np.cross(I, k), axis=-1)
    coef = np.where(grid.mask, (k @ I) / np.where(grid.mask, cmag, 1.0), 0.0)
    return coef[..., None] * u


def apply_intrinsic_oam(G: SpinorField, axis: int, hbar: float = 1.0) -> SpinorField:
    _require_spinor(G)
    M = intrinsic_oam_profile(G.grid, G.gauge)[..., axis]
    return G.with_values(hbar * M[..., None] * _sigma3_values(G.values))


def apply_total_oam(G: SpinorField, axis: int, hbar: float = 1.0, method: str = DEFAULT_METHOD) -> SpinorField:
    return apply_canonical_oam(G, axis, hbar, method) + apply_intrinsic_oam(G, axis, hbar)


def apply_vector_position(F: VectorField, axis: int, method: str = DEFAULT_METHOD) -> VectorField:
    """``X_axis = i d/dk_axis`` applied componentwise (the result is generally not transverse)."""
    _require_vector(F)
    return F.with_values(1j * _d(F, axis, method))


def apply_vector_oam(F: VectorField, axis: int, hbar: float = 1.0, method: str = DEFAULT_METHOD) -> VectorField:
    """``L = -P x X`` componentwise."""
    _require_vector(F)
    b, c = _cyclic(axis)
    k = F.grid.k
    out = k[..., b, None] * _d(F, c, method) - k[..., c, None] * _d(F, b, method)
    return F.with_values(-1j * hbar * out)


def apply_vector_spin(F: VectorField, axis: int, hbar: float = 1.0) -> VectorField:
    """``S_axis = hbar Sigma_axis`` acting on the polarisation index."""
    _require_vector(F)
    return F.with_values(hbar * F.values @ SPIN_MATRICES[axis].T)


@dataclass(frozen=True)
class OperatorAction:
    """A named linear map from fields to fields.

    Actions can be added, subtracted and scaled by numbers, which is how
    commutator references such as ``i hbar eps_ijk lambda_k`` are built.
    """

    name: str
    representation: str
    action: Callable

    def __call__(self, G):
        return self.action(G)

    def __add__(self, other: "OperatorAction") -> "OperatorAction":
        return OperatorAction(f"({self.name} + {other.name})", self.representation,
                              lambda G: self.action(G) + other.action(G))

    def __sub__(self, other: "OperatorAction") -> "OperatorAction":
        return OperatorAction(f"({self.name} - {other.name})", self.representation,
                              lambda G: self.action(G) - other.action(G))

    def __mul__(self, scalar) -> "OperatorAction":
        if not np.isscalar(scalar):
            return NotImplemented
        return OperatorAction(f"{scalar}*{self.name}", self.representation,
                              lambda G: scalar * self.action(G))

    __rmul__ = __mul__


_SPINOR_ACTIONS = {
    "p": apply_momentum,
    "xi": apply_canonical_position,
    "b": apply_reference_point,
    "x": apply_lab_position,
    "s": apply_spin,
    "lambda": apply_canonical_oam,
    "m": apply_intrinsic_oam,
    "l": apply_total_oam,
}
_VECTOR_ACTIONS = {
    "P": apply_momentum,
    "X": apply_vector_position,
    "L": apply_vector_oam,
    "S": apply_vector_spin,
}
_ACCEPTS = {
    apply_momentum: {"hbar"},
    apply_canonical_position: {"method"},
    apply_reference_point: set(),
    apply_lab_position: {"method"},
    apply_spin: {"hbar"},
    apply_canonical_oam: {"hbar", "method"},
    apply_intrinsic_oam: {"hbar"},
    apply_total_oam: {"hbar", "method"},
    apply_vector_position: {"method"},
    apply_vector_oam: {"hbar", "method"},
    apply_vector_spin: {"hbar"},
}


def operator(name: str, axis: int | None = None, *, hbar: float = 1.0, c: float = 1.0,
             method: str = DEFAULT_METHOD) -> OperatorAction:
    """Build an :class:`OperatorAction` by symbol.

    Spinor symbols: ``p xi b x s lambda m l`` (need ``axis``), ``omega``,
    ``identity``, ``sigma3``. Vector symbols: ``P X L S`` (need ``axis``),
    ``Omega``, ``Identity``.
    """
    if name in ("omega", "Omega"):
        rep = "spinor" if name == "omega" else "vector"
        return OperatorAction(name, rep, lambda G: apply_hamiltonian(G, c=c))
    if name in ("identity", "Identity"):
        return OperatorAction(name, "spinor" if name == "identity" else "vector", lambda G: G)
    if name == "sigma3":
        return OperatorAction(name, "spinor", lambda G: G.with_values(_sigma3_values(G.values)))
    if name in _SPINOR_ACTIONS:
        fn, rep = _SPINOR_ACTIONS[name], "spinor"
    elif name in _VECTOR_ACTIONS:
        fn, rep = _VECTOR_ACTIONS[name], "vector"
    else:
        raise KeyError(f"unknown operator {name!r}")
    if axis not in (0, 1, 2):
        raise ValueError(f"operator {name!r} needs an axis in 0..2")
    params = {key: val for key, val in (("hbar", hbar), ("method", method)) if key in _ACCEPTS[fn]}
    return OperatorAction(f"{name}_{'xyz'[axis]}", rep, lambda G: fn(G, axis, **params))


def multiplier(name: str, function: Callable, with_sigma3: bool = False) -> OperatorAction:
    """Pointwise multiplication by ``function(grid)`` (optionally times sigma3)."""

    def act(G):
        f = np.asarray(function(G.grid))[..., None]
        vals = _sigma3_values(G.values) if with_sigma3 else G.values
        return G.with_values(f * vals)

    return OperatorAction(name, "spinor", act)


@dataclass(frozen=True)
class ExpectationReport:
    """Expectation value of an operator together with its error against a reference."""

    name: str
    value: complex | np.ndarray
    reference: complex | np.ndarray | None
    abs_err: float | None
    rel_err: float | None
    imag_ratio: float
    grid: dict
    gauge: tuple | None

    @property
    def real(self):
        return np.real(self.value)

    def to_record(self) -> dict:
        def enc(x):
            if x is None:
                return None
            x = np.asarray(x)
            if np.iscomplexobj(x) and np.all(x.imag == 0):
                x = x.real
            if np.iscomplexobj(x):
                return {"re": np.real(x).tolist(), "im": np.imag(x).tolist()}
            return x.tolist()

        return {
            "name": self.name,
            "value": enc(self.value),
            "reference": enc(self.reference),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "imag_ratio": self.imag_ratio,
            "grid": self.grid,
            "gauge": list(self.gauge) if self.gauge is not None else None,
        }


def _expect(op: OperatorAction, G, norm2: float) -> complex:
    return inner_product(G, op(G)) / norm2


def expectation(op: OperatorAction | Sequence[OperatorAction], G, reference=None) -> ExpectationReport:
    """``<G|op|G> / <G|G>``; a sequence of three operators yields a vector value.

    ``imag_ratio`` is ``|Im| / |value|`` and should be ~0 for Hermitian operators.
    """
    norm2 = inner_product(G, G).real
    if norm2 <= 0.0:
        raise ValueError("expectation values need a nonzero field")
    if isinstance(op, OperatorAction):
        value = _expect(op, G, norm2)
        name = op.name
    else:
        value = np.array([_expect(o, G, norm2) for o in op])
        name = "(" + ", ".join(o.name for o in op) + ")"
    mag = float(np.linalg.norm(value))
    imag_ratio = float(np.linalg.norm(np.imag(value)) / mag) if mag > 0 else 0.0
    abs_err = rel_err = None
    if reference is not None:
        ref = np.asarray(reference)
        abs_err = float(np.linalg.norm(np.real(value) - ref))
        ref_mag = float(np.linalg.norm(ref))
        rel_err = abs_err / ref_mag if ref_mag > 0 else None
    return ExpectationReport(name, value, reference, abs_err, rel_err, imag_ratio,
                             G.grid.metadata(), getattr(G, "gauge", None))


def commutator(op1: OperatorAction, op2: OperatorAction, G):
    """``[op1, op2] G``."""
    return op1(op2(G)) - op2(op1(G))


def commutator_residual(op1: OperatorAction, op2: OperatorAction, G,
                        reference: OperatorAction | None = None) -> float:
    """``|| [op1, op2] G - reference G || / || G ||`` (reference defaults to zero)."""
    r = commutator(op1, op2, G)
    if reference is not None:
        r = r - reference(G)
    return r.norm() / G.norm()

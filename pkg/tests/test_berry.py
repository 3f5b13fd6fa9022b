import numpy as np
import pytest
import scipy.integrate
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from photongauge.berry import (
    curvature_B,
    gauge_potential_shift,
    monopole_flux,
    numeric_curl,
    potential_A,
    potential_on_grid,
    rotation_angle_gradient,
)
from photongauge.errors import DiracStringError, ZeroWaveVectorError
from photongauge.fields import MomentumGrid

Z, X = (0.0, 0.0, 1.0), (1.0, 0.0, 0.0)


def symbolic_potential(I):
    """A(k, I) as a sympy expression in (kx, ky, kz)."""
    k = sp.Matrix(sp.symbols("kx ky kz", real=True))
    I = sp.Matrix(I)
    cross = I.cross(k)
    cmag = sp.sqrt(cross.dot(cross))
    kmag = sp.sqrt(k.dot(k))
    return k, I.dot(k) / (kmag * cmag) * cross / cmag


def test_potential_vanishes_on_equator():
    np.testing.assert_allclose(potential_A((1, 0, 0), Z), 0.0, atol=1e-16)


def test_potential_at_45_degrees():
    k = (np.sin(np.pi / 4), 0.0, np.cos(np.pi / 4))
    np.testing.assert_allclose(potential_A(k, Z), (0, 1, 0), atol=1e-15)


def test_potential_at_60_degrees_radius_two():
    k = 2 * np.array([np.sin(np.pi / 3), 0.0, np.cos(np.pi / 3)])
    # cot(pi/3) / 2
    np.testing.assert_allclose(potential_A(k, Z), (0, 0.28867513459481287, 0), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, np.pi - 0.05), st.floats(0, 2 * np.pi), st.floats(0.1, 10))
def test_potential_is_monopole_azimuthal_field(theta, phi, r):
    k = r * np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    phi_hat = np.array([-np.sin(phi), np.cos(phi), 0.0])
    np.testing.assert_allclose(potential_A(k, Z), phi_hat / (r * np.tan(theta)), atol=1e-12 / r)


def test_potential_stack_matches_points():
    rng = np.random.default_rng(0)
    k = rng.normal(size=(5, 4, 3))
    A = potential_A(k, X)
    assert A.shape == (5, 4, 3)
    np.testing.assert_allclose(A[2, 1], potential_A(k[2, 1], X))


def test_potential_bounded_weight_near_string():
    for eps in 10.0 ** -np.arange(1, 6):
        k = np.array([eps, 0.0, 1.0])
        cmag = np.linalg.norm(np.cross(Z, k))
        assert np.linalg.norm(potential_A(k, Z)) * cmag == pytest.approx(1 / np.linalg.norm(k), rel=1e-12)


def test_potential_on_string_refused():
    with pytest.raises(DiracStringError):
        potential_A((0, 0, 2), Z)


@pytest.mark.parametrize("k, expected", [((0, 0, 2), (0, 0, -0.25)), ((1, 0, 0), (-1, 0, 0))])
def test_curvature_values(k, expected):
    np.testing.assert_allclose(curvature_B(k), expected, atol=1e-16)


def test_curvature_zero_refused():
    with pytest.raises(ZeroWaveVectorError):
        curvature_B((0, 0, 0))


@pytest.mark.parametrize("I", [(0, 0, 1), (1, 0, 0), (sp.Rational(1, 3), sp.Rational(2, 3), sp.Rational(2, 3))])
def test_symbolic_curl_is_monopole(I):
    k, A = symbolic_potential(I)
    x, y, z = k
    curl = sp.Matrix([
        sp.diff(A[2], y) - sp.diff(A[1], z),
        sp.diff(A[0], z) - sp.diff(A[2], x),
        sp.diff(A[1], x) - sp.diff(A[0], y),
    ])
    target = -k / sp.sqrt(k.dot(k)) ** 3
    # evaluate at rational points rather than relying on full simplification
    for pt in ((1, 2, 3), (-2, 1, sp.Rational(1, 2)), (3, -1, -2)):
        subs = dict(zip(k, pt))
        diff = (curl - target).subs(subs)
        assert max(abs(float(sp.N(d, 30))) for d in diff) < 1e-25


def test_numeric_curl_matches_curvature():
    k = np.array([1.0, 1.0, 0.5])
    c = numeric_curl(Z, k, 1e-4)
    assert np.linalg.norm(c - curvature_B(k)) / np.linalg.norm(curvature_B(k)) < 1e-6


def test_numeric_curl_second_order():
    k = np.array([1.0, 1.0, 0.5])
    d1 = np.linalg.norm(numeric_curl(Z, k, 1e-2) - curvature_B(k))
    d2 = np.linalg.norm(numeric_curl(Z, k, 5e-3) - curvature_B(k))
    assert d1 / d2 == pytest.approx(4.0, abs=0.1)


def test_numeric_curl_gauge_independent():
    k = np.array([1.0, 1.0, 1.0])
    assert np.linalg.norm(numeric_curl(Z, k) - numeric_curl(X, k)) < 2e-6 * np.linalg.norm(curvature_B(k))


def test_numeric_curl_refuses_stencil_across_string():
    with pytest.raises(DiracStringError):
        numeric_curl(Z, (1e-5, 0.0, 1.0), h=1e-4)


@pytest.mark.parametrize("radius", [0.5, 1.0, 4.0, 7.3])
def test_flux_is_minus_four_pi(radius):
    assert monopole_flux(radius) == pytest.approx(-4 * np.pi, abs=1e-10)


def test_flux_coarse_grid():
    assert monopole_flux(1.0, 16, 16) == pytest.approx(-4 * np.pi, abs=1e-10)


def test_flux_oracle_adaptive_quadrature():
    def integrand(phi, theta):
        n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return curvature_B(2.0 * n) @ n * 4.0 * np.sin(theta)

    ref, _ = scipy.integrate.dblquad(integrand, 0, np.pi, 0, 2 * np.pi, epsabs=1e-13)
    assert monopole_flux(2.0) == pytest.approx(ref, abs=1e-10)


def test_monopole_strength():
    assert monopole_flux(1.0) / (-2 * np.pi) == pytest.approx(2.0, abs=1e-12)


def test_potential_shift_trivial():
    lhs, rhs = gauge_potential_shift((1, 0.5, 0.7), Z, Z)
    np.testing.assert_allclose(lhs, 0.0, atol=1e-15)
    np.testing.assert_allclose(rhs, 0.0, atol=1e-15)


def test_potential_shift_reference_point():
    lhs, rhs = gauge_potential_shift((1, 0.5, 0.7), Z, X, h=1e-4)
    assert np.linalg.norm(lhs - rhs) < 1e-6


def test_potential_shift_second_order():
    k = (1, 0.5, 0.7)
    d = [np.linalg.norm(np.subtract(*gauge_potential_shift(k, Z, X, h))) for h in (1e-2, 5e-3)]
    assert d[0] / d[1] == pytest.approx(4.0, abs=0.2)


@st.composite
def unit_vectors(draw):
    v = np.array(draw(st.tuples(*[st.floats(-1, 1)] * 3)))
    assume(np.linalg.norm(v) > 0.1)
    return v / np.linalg.norm(v)


@settings(max_examples=60, deadline=None)
@given(unit_vectors(), unit_vectors(), unit_vectors(), st.floats(0.5, 3))
def test_potential_shift_random(w, I, Ip, r):
    for g in (I, Ip):
        assume(np.linalg.norm(np.cross(g, w)) > 0.3)
    lhs, rhs = gauge_potential_shift(r * w, I, Ip)
    assert np.linalg.norm(lhs - rhs) < 1e-6 * max(1.0, np.linalg.norm(lhs))


def test_rotation_angle_gradient_matches_scalar_gradient():
    rng = np.random.default_rng(7)
    k = rng.normal(size=(10, 3)) + (0, 2, 0)
    grad = rotation_angle_gradient(k, Z, X)
    for kk, g in zip(k, grad):
        _, rhs = gauge_potential_shift(kk, Z, X)
        np.testing.assert_allclose(g, rhs, rtol=1e-8, atol=1e-10)


def test_potential_on_grid_matches_pointwise():
    grid = MomentumGrid.centered((1.0, 0.5, 0.7), 0.3, 8)
    np.testing.assert_allclose(potential_on_grid(grid, Z), potential_A(grid.k, Z), atol=1e-15)
    assert potential_on_grid(grid, Z) is potential_on_grid(grid, Z)

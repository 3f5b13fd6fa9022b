"""Named verification experiments.

Each ``run_*`` function takes an :class:`~photongauge.config.ExperimentConfig`
and returns a :class:`~photongauge.report.RunReport` whose records compare a
computed number with the value the theory predicts.
"""
from __future__ import annotations

import time

import numpy as np

from .beams import BeamSpec, default_grid, make_paraxial_vortex, make_wavepacket, standard_test_packet
from .berry import curvature_B, gauge_potential_shift, monopole_flux, numeric_curl, rotation_angle_gradient
from .config import ExperimentConfig
from .errors import StringClearanceError
from .fields import VectorField, embed_to_vector, gauge_transport, project_to_spinor
from .geometry import frame_vectors, string_distance
from .operators import (
    SIGMA3,
    SPIN_MATRICES,
    apply_vector_oam,
    apply_vector_position,
    apply_vector_spin,
    commutator,
    commutator_residual,
    expectation,
    inner_product,
    multiplier,
    operator,
)
from .report import DEFAULT_TOLERANCES, RunReport, make_check

__all__ = [
    "DEFAULT_TOLERANCES",
    "EXPERIMENTS",
    "run_all",
    "run_barycenter",
    "run_berry_flux",
    "run_commutators",
    "run_gauge_shift",
    "run_oam_spectrum",
    "run_spin_check",
]

PAIRS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))  # (i, j, k) with eps_ijk = +1
AXES = "xyz"


class _Recorder:
    def __init__(self, experiment: str, config: ExperimentConfig):
        self.experiment = experiment
        self.config = config
        self.records = []
        self.start = time.perf_counter()

    def add(self, check, relation, family, computed, reference, kind="abs", tolerance=None, **params):
        tol = self.config.tolerance(family) if tolerance is None else tolerance
        self.records.append(make_check(self.experiment, check, relation, family, computed, reference,
                                       tol, kind, **params))

    def report(self) -> RunReport:
        return RunReport(self.experiment, self.records, self.config.echo(), self.config.seed,
                         self.config.tier, duration_s=time.perf_counter() - self.start)


def _vec(ops_name, config, **kw):
    return [operator(ops_name, a, hbar=config.hbar, **kw) for a in range(3)]


def _random_directions(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_points_off_strings(rng, n: int, gauges, min_angle_deg: float, radius=(0.5, 2.0)) -> np.ndarray:
    """``n`` wavevectors at least ``min_angle_deg`` from the string of every gauge."""
    threshold = np.sin(np.deg2rad(min_angle_deg))
    out = []
    while len(out) < n:
        k = _random_directions(rng, 1)[0] * rng.uniform(*radius)
        if all(string_distance(k, g) >= threshold for g in gauges):
            out.append(k)
    return np.array(out)


def run_berry_flux(config: ExperimentConfig) -> RunReport:
    """Monopole flux through spheres and the numerical curl of the gauge potential."""
    rec = _Recorder("berry-flux", config)
    bf = config.berry_flux
    flux_rel = "flux of B = -w/k^2 through |k| = R equals -4 pi"
    for r in bf.radii:
        flux = monopole_flux(r, bf.n_theta, bf.n_phi)
        rec.add(f"flux R={r:g} {bf.n_theta}x{bf.n_phi}", flux_rel, "monopole_flux", flux, -4 * np.pi)
    coarse = monopole_flux(1.0, bf.coarse_nodes, bf.coarse_nodes)
    rec.add(f"flux R=1 {bf.coarse_nodes}x{bf.coarse_nodes}", flux_rel, "monopole_flux", coarse, -4 * np.pi)
    rec.add("monopole strength", "flux / (-2 pi) = 2 (unit monopole)", "monopole_flux",
            monopole_flux(1.0, bf.n_theta, bf.n_phi) / (-2 * np.pi), 2.0)

    rng = np.random.default_rng(config.seed)
    points = random_points_off_strings(rng, bf.n_random, bf.gauges, bf.min_string_angle_deg)
    B = curvature_B(points)
    Bmag = np.linalg.norm(B, axis=1)
    curls = {}
    for g in bf.gauges:
        curls[g] = np.array([numeric_curl(g, k) for k in points])
        worst = np.max(np.linalg.norm(curls[g] - B, axis=1) / Bmag)
        rec.add(f"curl A = B, gauge {list(g)}, worst of {bf.n_random}", "curl_k A(k, I) = -w/k^2", "curl",
                worst, 0.0)
    gauges = list(bf.gauges)
    for g1, g2 in zip(gauges, gauges[1:]):
        worst = np.max(np.linalg.norm(curls[g1] - curls[g2], axis=1) / Bmag)
        rec.add(f"curl gauge independence {list(g1)} vs {list(g2)}", "curl A(k, I) = curl A(k, I')",
                "curl_gauge_independence", worst, 0.0)

    kc = np.array(bf.convergence_point)
    h = 1e-2 * np.linalg.norm(kc)
    for g in gauges:
        d1 = np.linalg.norm(numeric_curl(g, kc, h) - curvature_B(kc))
        d2 = np.linalg.norm(numeric_curl(g, kc, h / 2) - curvature_B(kc))
        rec.add(f"curl step-halving ratio, gauge {list(g)}", "central differences converge as h^2",
                "convergence_order", d1 / d2, 4.0, h=h)
    return rec.report()


def _curvature_on_grid(grid):
    return curvature_B(np.where(grid.mask[..., None], grid.k, 1.0)) * grid.mask[..., None]


def _packet(config: ExperimentConfig, sigma: int):
    pk = config.packet
    return standard_test_packet(sigma=sigma, gauge=pk.gauge, points=config.points, k0=pk.k0,
                                relative_width=pk.relative_width, r0=pk.r0, widths=config.grid.widths)


def run_commutators(config: ExperimentConfig) -> RunReport:
    """Commutation relations of every operator on the standard test packet."""
    rec = _Recorder("commutators", config)
    hbar, c = config.hbar, config.c
    p, xi, b, x = (_vec(n, config) for n in ("p", "xi", "b", "x"))
    s, lam, m, l = (_vec(n, config) for n in ("s", "lambda", "m", "l"))
    omega = operator("omega", c=c)
    ident = operator("identity")

    def curvature(k, with_sigma3=True):
        return multiplier(f"B_{AXES[k]}", lambda g: _curvature_on_grid(g)[..., k], with_sigma3=with_sigma3)

    for sigma in (1, -1):
        G = _packet(config, sigma)
        tag = f"sigma={sigma:+d}"
        for i, j, k in PAIRS:
            ij = f"{AXES[i]}{AXES[j]}"
            rec.add(f"[xi_i, xi_j] {ij} {tag}", "[xi_i, xi_j] = 0", "canonical_commutators",
                    commutator_residual(xi[i], xi[j], G), 0.0)
            rec.add(f"[p_i, p_j] {ij} {tag}", "[p_i, p_j] = 0", "exact_commutators",
                    commutator_residual(p[i], p[j], G), 0.0)
            rec.add(f"[b_i, b_j] {ij} {tag}", "[b_i, b_j] = 0", "exact_commutators",
                    commutator_residual(b[i], b[j], G), 0.0)
            rec.add(f"[s_i, s_j] {ij} {tag}", "[s_i, s_j] = 0", "exact_commutators",
                    commutator_residual(s[i], s[j], G), 0.0)
            rec.add(f"[m_i, m_j] {ij} {tag}", "[m_i, m_j] = 0", "exact_commutators",
                    commutator_residual(m[i], m[j], G), 0.0)
            rec.add(f"[x_i, x_j] {ij} {tag}", "[x_i, x_j] = i sigma3 eps_ijk B_k", "lab_position_commutator",
                    commutator_residual(x[i], x[j], G, 1j * curvature(k)), 0.0)
            rec.add(f"[lambda_i, lambda_j] {ij} {tag}", "[lambda_i, lambda_j] = i hbar eps_ijk lambda_k",
                    "oam_algebra", commutator_residual(lam[i], lam[j], G, 1j * hbar * lam[k]), 0.0)
            rec.add(f"[l_i, l_j] {ij} {tag}", "[l_i, l_j] = i hbar eps_ijk (l_k - s_k)", "total_oam_anomaly",
                    commutator_residual(l[i], l[j], G, 1j * hbar * (l[k] - s[k])), 0.0)
        for i in range(3):
            for j in range(3):
                ref = 1j * hbar * ident if i == j else None
                rec.add(f"[xi_i, p_j] {AXES[i]}{AXES[j]} {tag}", "[xi_i, p_j] = i hbar delta_ij",
                        "canonical_commutators", commutator_residual(xi[i], p[j], G, ref), 0.0)
        for a in range(3):
            for name, ops in (("lambda", lam), ("m", m), ("l", l), ("b", b)):
                rec.add(f"[{name}_{AXES[a]}, omega] {tag}", f"[{name}_i, omega] = 0", "constants_of_motion",
                        commutator_residual(ops[a], omega, G), 0.0)

        # -i [x_x, x_y] acts as sigma B_z on a pure-helicity packet
        num = -1j * inner_product(G, commutator(x[0], x[1], G))
        den = inner_product(G, curvature(2, with_sigma3=False)(G))
        rec.add(f"helicity sign of [x_x, x_y] {tag}", "-i <[x_x, x_y]> / <B_z> = sigma", "helicity_sign",
                (num / den).real, float(sigma))

        F = embed_to_vector(G)
        norm = G.norm()
        for a in range(3):
            pairs = (
                ("W^T X W = xi + b", apply_vector_position(F, a), x[a](G)),
                ("W^T L W = lambda + m", apply_vector_oam(F, a, hbar=hbar), l[a](G)),
                ("W^T S W = s", apply_vector_spin(F, a, hbar=hbar), s[a](G)),
            )
            for relation, vec_result, spinor_result in pairs:
                diff = project_to_spinor(vec_result, G.gauge) - spinor_result
                rec.add(f"{relation.split(' =')[0]} component {AXES[a]} {tag}", relation,
                        "representation_identity", diff.norm() / norm, 0.0)
    return rec.report()


def run_oam_spectrum(config: ExperimentConfig) -> RunReport:
    """Angular-momentum expectation values of paraxial vortex beams."""
    rec = _Recorder("oam-spectrum", config)
    os_ = config.oam_spectrum
    hbar = config.hbar
    lam_z = operator("lambda", 2, hbar=hbar)
    l_z = operator("l", 2, hbar=hbar)
    s_z = operator("s", 2, hbar=hbar)
    m_vec = _vec("m", config)
    sigma3 = operator("sigma3")
    cos_theta = multiplier("cos theta", lambda g: g.w[..., 2])

    def beam(gauge, l, sigma, divergence):
        spec = BeamSpec("paraxial_vortex", (0.0, 0.0, os_.k0), divergence * os_.k0, gauge=gauge,
                        sigma=sigma, l=l)
        return make_paraxial_vortex(spec, grid=default_grid(spec, config.points, config.grid.widths))

    for label, gauge in (("perpendicular", os_.gauge_perpendicular), ("parallel", os_.gauge_parallel)):
        for l in os_.charges:
            for sigma in (1, -1):
                tag = f"I {label}, l={l:+d}, sigma={sigma:+d}"
                try:
                    G = beam(gauge, l, sigma, os_.divergence)
                except StringClearanceError:
                    rec.add(f"refused: {tag}", "l = 0 beam with the string on its axis is refused", "refusal",
                            1.0, 1.0)
                    continue
                lam = expectation(lam_z, G).value.real
                lz = expectation(l_z, G).value.real
                sz = expectation(s_z, G).value.real
                mv = expectation(m_vec, G).value.real
                cos = expectation(cos_theta, G).value.real
                rec.add(f"<lambda_z> {tag}", "<lambda_z> = l hbar for exp(i l phi)", "canonical_oam_eigenvalue",
                        lam, l * hbar)
                rec.add(f"<sigma3> {tag}", "<sigma3> = sigma", "helicity_purity",
                        expectation(sigma3, G).value.real, float(sigma))
                rec.add(f"<s_z> {tag}", "<s_z> = sigma hbar <cos theta>", "quadrature_identity",
                        sz, sigma * hbar * cos)
                if label == "perpendicular":
                    rec.add(f"|<m>| {tag}", "m ~ 0 when I is perpendicular to the axis",
                            "intrinsic_oam_perpendicular", mv, np.zeros(3))
                    tol = config.tolerance("total_oam_paraxial") * hbar * max(1, abs(l))
                    rec.add(f"<l_z> {tag}", "<l_z> ~ <lambda_z> = l hbar", "total_oam_paraxial",
                            lz, l * hbar, tolerance=tol)
                else:
                    rec.add(f"<m_z> {tag}", "<m_z> = -sigma hbar <cos theta> for I along the axis",
                            "intrinsic_oam_parallel", mv[2], -sigma * hbar * cos)
                    rec.add(f"<l_z> - <lambda_z> {tag}", "<l_z> - <lambda_z> = -sigma hbar <cos theta>",
                            "intrinsic_oam_parallel", lz - lam, -sigma * hbar * cos)
                    tol = config.tolerance("total_oam_paraxial") * hbar * max(1, abs(l - sigma))
                    rec.add(f"<l_z> {tag}", "<l_z> ~ (l - sigma) hbar for I along the axis",
                            "total_oam_paraxial", lz, (l - sigma) * hbar, tolerance=tol)

    for l in os_.scaling_charges:
        mags = []
        for div in (os_.divergence, os_.divergence / 2):
            G = beam(os_.gauge_perpendicular, l, 1, div)
            mags.append(np.linalg.norm(expectation(m_vec, G).value.real))
        rec.add(f"|<m>| divergence-halving ratio, l={l:+d}", "|<m>| scales as divergence^2",
                "convergence_order", mags[0] / mags[1], 4.0, m_full=mags[0], m_half=mags[1])
    return rec.report()


def barycenter_formula(k0, I, sigma: int) -> np.ndarray:
    """Closed-form barycenter ``sigma (I.k0) / (k0 |I x k0|^2) (I x k0)``."""
    k0 = np.asarray(k0, dtype=float)
    I = np.asarray(I, dtype=float)
    cross = np.cross(I, k0)
    return sigma * (I @ k0) / (np.linalg.norm(k0) * (cross @ cross)) * cross


def run_barycenter(config: ExperimentConfig) -> RunReport:
    """Laboratory-position expectation of narrow helicity packets."""
    rec = _Recorder("barycenter", config)
    bc = config.barycenter
    x_ops = _vec("x", config)
    xi_ops = _vec("xi", config)
    phi = np.deg2rad(bc.azimuth_deg)

    def measure(k0, sigma, width, aspect):
        spec = BeamSpec("wavepacket", tuple(k0), width, delta_par=aspect * width, gauge=bc.gauge, sigma=sigma)
        G = make_wavepacket(spec, grid=default_grid(spec, config.points, config.grid.widths))
        return expectation(x_ops, G).value.real, expectation(xi_ops, G).value.real

    for theta_deg in bc.theta_deg:
        th = np.deg2rad(theta_deg)
        k0 = bc.k0 * np.array([np.sin(th) * np.cos(phi), np.sin(th) * np.sin(phi), np.cos(th)])
        width = bc.relative_width * bc.k0
        for sigma in (1, -1):
            tag = f"theta0={theta_deg:g}, sigma={sigma:+d}"
            ref = barycenter_formula(k0, bc.gauge, sigma)
            x, xi = measure(k0, sigma, width, bc.aspect)
            x_half, _ = measure(k0, sigma, width / 2, bc.aspect)
            rec.add(f"<x> {tag}", "<x> = sigma (I.k0)/(k0 |I x k0|^2) I x k0", "barycenter", x, ref, kind="rel")
            rec.add(f"<xi> {tag}", "<xi> = 0", "canonical_position", xi, np.zeros(3))
            e1, e2 = np.linalg.norm(x - ref), np.linalg.norm(x_half - ref)
            rec.add(f"<x> width-halving ratio {tag}", "barycenter error scales as width^2",
                    "convergence_order", e1 / e2, 4.0, err_full=e1, err_half=e2)
            if sigma == 1:
                x_iso, _ = measure(k0, sigma, width, 1.0)
                rec.add(f"<x> isotropic packet {tag}", "<x> = sigma (I.k0)/(k0 |I x k0|^2) I x k0",
                        "barycenter", x_iso, ref, kind="rel")
    return rec.report()


def run_gauge_shift(config: ExperimentConfig) -> RunReport:
    """Gauge transformations of wavefunctions, potentials and barycenters."""
    rec = _Recorder("gauge-shift", config)
    gs = config.gauge_shift
    I, Ip = np.array(gs.gauge), np.array(gs.gauge_prime)
    k0 = np.array(gs.k0)
    width = gs.relative_width * np.linalg.norm(k0)
    x_ops, b_ops, s_ops, l_ops = (_vec(n, config) for n in ("x", "b", "s", "l"))

    _, grad_phi = gauge_potential_shift(k0, I, Ip)
    for sigma in (1, -1):
        spec = BeamSpec("wavepacket", tuple(k0), width, gauge=tuple(I), sigma=sigma)
        grid = default_grid(spec, config.points, config.grid.widths)
        G = make_wavepacket(spec, grid=grid)
        Gp = make_wavepacket(BeamSpec("wavepacket", tuple(k0), width, gauge=tuple(Ip), sigma=sigma), grid=grid)
        shift = expectation(x_ops, Gp).value.real - expectation(x_ops, G).value.real
        rec.add(f"barycenter shift sigma={sigma:+d}", "<x>_I' - <x>_I = sigma grad phi(k0)",
                "gauge_shift_barycenter", shift, sigma * grad_phi, kind="rel")

    rng = np.random.default_rng(config.seed)
    raw = rng.normal(size=grid.shape + (3,)) + 1j * rng.normal(size=grid.shape + (3,))
    w = grid.w
    F = VectorField(grid, raw - np.einsum("...i,...i->...", raw, w)[..., None] * w)
    direct = project_to_spinor(F, Ip)
    transported = gauge_transport(project_to_spinor(F, I), Ip)
    err = np.max(np.abs(direct.values - transported.values)) / np.max(np.abs(direct.values))
    rec.add("W'^T f = exp(i sigma3 phi) W^T f", "f~' = exp(i sigma3 phi) f~", "gauge_representation", err, 0.0)

    lhs, rhs = gauge_potential_shift(k0, I, Ip)
    rec.add("A' - A = grad phi at k0", "A(k, I') = A(k, I) + grad phi", "gauge_potential_shift",
            np.linalg.norm(lhs - rhs), 0.0)
    h = 1e-2 * np.linalg.norm(k0)
    d1 = np.linalg.norm(np.subtract(*gauge_potential_shift(k0, I, Ip, h)))
    d2 = np.linalg.norm(np.subtract(*gauge_potential_shift(k0, I, Ip, h / 2)))
    rec.add("A' - A - grad phi step-halving ratio", "central differences converge as h^2", "convergence_order",
            d1 / d2, 4.0, h=h)

    G = make_wavepacket(BeamSpec("wavepacket", tuple(k0), width, gauge=tuple(I), sigma=1), grid=grid)
    Gt = gauge_transport(G, Ip)
    for name, ops in (("x", x_ops), ("s", s_ops), ("l", l_ops)):
        before = expectation(ops, G).value.real
        after = expectation(ops, Gt).value.real
        rec.add(f"<{name}> invariant under gauge transport", f"<{name}> is gauge independent",
                "gauge_covariance", after, before)
    grad_grid = rotation_angle_gradient(grid.k, I, Ip)
    sigma_grad = [multiplier(f"grad phi_{AXES[a]}", lambda g, a=a: grad_grid[..., a], with_sigma3=True)
                  for a in range(3)]
    db = expectation(b_ops, Gt).value.real - expectation(b_ops, G).value.real
    rec.add("<b'> - <b> for a transported packet", "b' = b + sigma3 grad phi", "gauge_potential_shift",
            db, expectation(sigma_grad, G).value.real)
    return rec.report()


def spin_matrix_defect(k, I) -> float:
    """``max |W^T (Sigma.w) W - sigma3|`` at one point."""
    u, v, w = frame_vectors(k, I)
    W = np.column_stack((u, v))
    sigma_w = np.tensordot(w, SPIN_MATRICES, axes=1)
    return float(np.max(np.abs(W.T @ sigma_w @ W - SIGMA3)))


def run_spin_check(config: ExperimentConfig) -> RunReport:
    """Reduction of the spin operator to the helicity along w."""
    rec = _Recorder("spin-check", config)
    sc = config.spin_check
    hbar = config.hbar
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    done = 0
    while done < sc.n_random:
        k = rng.normal(size=3)
        I = _random_directions(rng, 1)[0]
        I = I / np.linalg.norm(I)
        if string_distance(k, I) < 1e-3:
            continue
        worst = max(worst, spin_matrix_defect(k, I))
        done += 1
    rec.add(f"W^T (Sigma.w) W = sigma3, worst of {sc.n_random}", "sigma3 = W^T (Sigma.w) W", "spin_matrix",
            worst, 0.0)

    s_ops = _vec("s", config)
    w_avg = [multiplier(f"w_{AXES[a]}", lambda g, a=a: g.w[..., a]) for a in range(3)]
    other = np.cross(sc.gauge, (0.0, 0.0, 1.0))
    other = other / np.linalg.norm(other)
    for sigma in (1, -1):
        spec = BeamSpec("wavepacket", (0.0, 0.0, 1.0), sc.divergence, gauge=sc.gauge, sigma=sigma)
        G = make_wavepacket(spec, grid=default_grid(spec, config.points, config.grid.widths))
        s = expectation(s_ops, G).value.real
        tag = f"sigma={sigma:+d}"
        rec.add(f"<s> paraxial packet along z {tag}", "<s> = (0, 0, sigma hbar) for a paraxial packet",
                "spin_expectation", s, np.array([0.0, 0.0, sigma * hbar]))
        rec.add(f"<s> = sigma hbar <w> {tag}", "s = hbar sigma3 w", "quadrature_identity",
                s, sigma * hbar * expectation(w_avg, G).value.real)
        rec.add(f"<sigma3> {tag}", "<sigma3> = sigma", "helicity_purity",
                expectation(operator("sigma3"), G).value.real, float(sigma))
        rec.add(f"<s> gauge independence {tag}", "spin is independent of the gauge", "gauge_covariance",
                expectation(s_ops, gauge_transport(G, other)).value.real, s)
    return rec.report()


EXPERIMENTS = {
    "berry-flux": run_berry_flux,
    "commutators": run_commutators,
    "oam-spectrum": run_oam_spectrum,
    "barycenter": run_barycenter,
    "gauge-shift": run_gauge_shift,
    "spin-check": run_spin_check,
}


def run_all(config: ExperimentConfig) -> RunReport:
    """Every experiment in sequence; the returned report carries the parts in ``parts``."""
    start = time.perf_counter()
    parts = [run(config) for run in EXPERIMENTS.values()]
    records = [r for part in parts for r in part.records]
    return RunReport("all", records, config.echo(), config.seed, config.tier,
                     duration_s=time.perf_counter() - start, parts=parts)

"""One test per acceptance criterion; each prints a PASS/FAIL line in the terminal summary."""

import math
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, random_state

from attenuant import attenuator as att
from attenuant import beamsplitter as bs
from attenuant import entropy as ent
from attenuant import majorization as maj
from attenuant import phase_space as ps
from attenuant import schemes as sch
from attenuant.fock import DensityMatrix, ModeDims, fock_dm, partial_trace
from attenuant.linalg import hermitian_eigs

LAMBDAS = np.round(np.linspace(0.0, 1.0, 11), 12)


def report(num: int, ok: bool, text: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {text}")
    assert ok, text


def _u1(lam):
    s, c = math.sqrt(lam), math.sqrt(1 - lam)
    return np.array([[s, -c], [c, s]])


def _u2(lam):
    r = math.sqrt(2 * lam * (1 - lam))
    return np.array([[lam, -r, 1 - lam], [r, 2 * lam - 1, -r], [1 - lam, r, lam]])


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    reports = maj.sweep_majorization(200, maj.GRID_POINTS)
    return reports, time.perf_counter() - t0


def test_criterion_01_beamsplitter_fixtures():
    t0 = time.perf_counter()
    fix = 0.0
    rows = 0.0
    for lam in LAMBDAS:
        fix = max(fix, np.max(np.abs(bs.bs_block(1, lam).mat - _u1(lam))), np.max(np.abs(bs.bs_block(2, lam).mat - _u2(lam))))
        for n in range(31):
            c0 = bs.bs_block(n, lam).mat[:, 0]
            c1 = bs.bs_block(n + 1, lam).mat[:, 1]
            rows = max(rows, max(abs(c0[l] - bs.coeff_0n(n, lam, l)) for l in range(n + 1)))
            rows = max(rows, max(abs(c1[l] - bs.coeff_1n(n, lam, l)) for l in range(n + 2)))
    dt = time.perf_counter() - t0
    ok = fix <= 1e-12 and rows <= 1e-10 and dt < 1.0
    report(1, ok, f"blocks N=1,2 residual {fix:.2e} (<=1e-12), closed-form columns {rows:.2e} (<=1e-10), {dt:.2f}s (<1s)")


def test_criterion_02_single_photon_environment():
    t0 = time.perf_counter()
    val = sch.scheme1_icoh(1 / 3, 0.5).icoh
    eta_best, best = sch.scheme1_max(0.5)
    closed = max(
        np.max(np.abs(sch.scheme1_state(eta, 0.5).mat - sch.scheme1_closed_ab(eta))) for eta in np.linspace(0.0, 1.0, 21)
    )
    dt = time.perf_counter() - t0
    ok = abs(val - 0.07392) <= 5e-5 and abs(best - 0.0748) <= 1e-3 and closed <= 1e-10 and dt < 5.0
    report(
        2,
        ok,
        f"I_coh(eta=1/3) = {val:.6f} (0.07392 +- 5e-5), max {best:.6f} at eta={eta_best:.4f} (0.0748 +- 1e-3), "
        f"closed-form residual {closed:.2e}, {dt:.2f}s (<5s)",
    )


def test_criterion_03_superposition_environment():
    t0 = time.perf_counter()
    val = sch.scheme2_icoh(54).icoh
    dt = time.perf_counter() - t0
    report(3, abs(val - 0.3530) <= 1e-3 and dt < 60.0, f"n=54 value {val:.6f} (0.3530 +- 1e-3), {dt:.2f}s (<60s)")


def test_criterion_04_main_scheme_consistency():
    gap = spec_q = diag_p = 0.0
    for n in range(2, 7):
        for lam in np.round(np.arange(1, 10) / 10, 12):
            r = sch.main_scheme_icoh(n, float(lam), simulate=True)
            gap = max(gap, abs(r.icoh - r.meta["simulated"]))
            omega = sch.main_scheme_state(n, float(lam))
            q = np.sort(maj.q_dist(n, lam).weights)
            eig = hermitian_eigs(omega.mat)[-len(q):]
            spec_q = max(spec_q, np.max(np.abs(eig - q)))
            db = np.real(np.diag(partial_trace(omega, [1]).mat))
            p = maj.p_dist(n, lam).weights
            diag_p = max(diag_p, np.max(np.abs(db[: len(p)] - p)), np.max(np.abs(db[len(p):]), initial=0.0))
    ok = gap <= 1e-9 and spec_q <= 1e-10 and diag_p <= 1e-10
    report(4, ok, f"closed form vs simulation {gap:.2e} (<=1e-9), spectrum vs q {spec_q:.2e}, diagonal vs p {diag_p:.2e} (<=1e-10)")


def test_criterion_05_majorization_sweep(sweep):
    reports, dt = sweep
    names = ("majorization", "q_sorted", "p_pattern", "max_entries", "elementwise", "low_entries")
    bad = {k: len(reports[k].violations) for k in names if reports[k].violations}
    pts = reports["majorization"].points
    ok = not bad and pts == 199 * maj.GRID_POINTS and dt < 120.0
    report(5, ok, f"{pts} points n=2..200, violations {bad or 0}, ordering certificates {len(names) - 1} pass, {dt:.1f}s (<120s)")


def test_criterion_06_bound_chain(sweep):
    reports, _ = sweep
    chain = reports["bound_chain"]
    floor_dev = max(abs(maj.bound_chain(n, 1.0 / n).k_gap - maj.k_gap_floor(n)) for n in range(3, 201))
    two_dev = max(abs(maj.bound_chain(2, 0.5 - e).k_gap - (e / 4 + 3 * e**3)) for e in np.linspace(0.005, 0.16, 32))
    ok = chain.passed and reports["k_gap_floor"].passed and floor_dev <= 1e-12 and two_dev <= 1e-12
    report(
        6,
        ok,
        f"chain holds at {chain.points - len(chain.violations)}/{chain.points} points, "
        f"gap at 1/n deviation {floor_dev:.2e}, n=2 gap deviation {two_dev:.2e} (<=1e-12)",
    )


def test_criterion_07_constants():
    target = 32 / (6561 * math.log(2))
    certified = min((2 / math.log(2)) * maj.k_gap_floor(n) ** 2 for n in range(3, 201))
    asym = (2 / math.log(2)) * maj.k_gap_floor(10**6) ** 2
    direct = min(
        sch.main_scheme_icoh(n, float(lam), simulate=False).icoh for n in range(3, 201) for lam in maj.lambda_grid(n, 20)
    )
    g_half = ent.g(0.5)
    cert = ent.afw_interval()
    ok = (
        certified >= target - 1e-12
        and abs(asym - 0.0244) <= 1e-3
        and abs(asym - maj.ASYMPTOTIC_CERTIFIED) <= 1e-3
        and 0.0066 <= direct <= 0.66
        and abs(g_half - 1.377444) <= 1e-5
        and cert.combined >= 1e-6
    )
    report(
        7,
        ok,
        f"n>=3 floor {certified:.6f} (>= {target:.6f}), asymptote {asym:.6f} (0.0244 +- 1e-3), "
        f"direct min {direct:.4f} (order 0.066), g(1/2) {g_half:.6f}, near-1/2 constant {cert.combined:.3e} (>=1e-6)",
    )


def test_criterion_08_channel_algebra(rng):
    sigma, omega = random_state(rng, 4), random_state(rng, 3)
    comp = max(att.compose_check(l, sigma, m, omega) for l, m in [(0.3, 0.7), (0.6, 0.6), (0.9, 0.2), (0.5, 0.5)])
    cov = max(
        ps.verify_covariance(lam, sigma, z, rho)
        for lam, z in [(0.5, 0.3), (0.3, 0.4 - 0.2j), (0.8, -0.25j)]
        for rho in att.default_probes()
    )
    stab = 0.0
    for nu in (0.1, 0.5, 1.0):
        for eta in (0.2, 0.5, 0.8):
            spec = att.thermal_attenuator(eta, nu)
            assert spec.tail_mass <= 1e-12
            stab = max(stab, att.max_abs_diff(att.apply(spec, spec.env), spec.env))
    wc = 0.0
    for n in range(6):
        spec = att.ChannelSpec(0.5, fock_dm(n))
        for rho in att.default_probes():
            wc = max(wc, att.max_abs_diff(att.weak_complementary(spec, rho), att.complementary_identity_rhs(spec, rho)))
    # the bound is exactly zero at lam = 0, N = 0, so allow a few ulps of the entropies involved
    lim = -math.inf
    ulps = 8 * np.finfo(float).eps * max(1.0, ent.g(20.0))
    for lam in np.linspace(0.0, 0.5, 26):
        for n_mean in (0.0, 0.25, 1.0, 4.0, 20.0):
            for nu in (0.0, 0.3, 1.0, 5.0):
                for frac in (0.0, 0.3, 0.7, 1.0):
                    lim = max(lim, ent.lim_bounds(float(lam), n_mean, nu, frac * ent.g(nu))[0])
    ok = comp <= 1e-8 and cov <= 1e-7 and stab <= 1e-8 and wc <= 1e-10 and lim <= ulps
    report(
        8,
        ok,
        f"composition {comp:.2e} (<=1e-8), covariance {cov:.2e} (<=1e-7), thermal stability {stab:.2e} (<=1e-8), "
        f"weak complementary {wc:.2e} (<=1e-10), largest lower bound for lam<=1/2 {lim:.2e} (<=0 up to {ulps:.1e} rounding)",
    )


def test_criterion_09_cascade():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in (2, 3):
        for _ in range(3):
            lams = tuple(rng.uniform(0.15, 0.95, size=k))
            a = rng.normal(size=6) + 1j * rng.normal(size=6)
            sigma = DensityMatrix(ModeDims((6,)), np.outer(a, a.conj()) / np.vdot(a, a).real)
            spec = att.CascadeSpec(lams, att.build_omega(sigma, lams))
            single = att.ChannelSpec(math.prod(lams), sigma)
            for rho in att.default_probes():
                worst = max(worst, att.max_abs_diff(att.cascade_apply(spec, rho), att.apply(single, rho)))
    dt = time.perf_counter() - t0
    report(9, worst <= 1e-7 and dt < 30.0, f"k=2,3 residual {worst:.2e} (<=1e-7), {dt:.2f}s (<30s)")


def test_criterion_10_ppt_witness():
    vals = [sch.ppt_check(float(l)) for l in np.round(np.linspace(0.01, 0.99, 99), 12)]
    report(10, max(vals) < 0, f"largest minimum eigenvalue over 99 points {max(vals):.3e} (<0)")

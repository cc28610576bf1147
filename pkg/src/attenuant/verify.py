"""Self-contained verification suites behind ``attenuant verify``.

Each suite returns a :class:`SuiteResult` holding a pass flag, the worst
residual seen (or smallest margin, where a margin is what is tracked), the
number of grid points and the offending parameters of any failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from attenuant import attenuator as att
from attenuant import beamsplitter as bs
from attenuant import entropy as ent
from attenuant import majorization as maj
from attenuant import phase_space as ps
from attenuant import schemes as sch
from attenuant.fock import DensityMatrix, ModeDims, fock_dm, thermal_state


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    worst: float = 0.0
    grid_size: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def check(self, residual: float, tol: float, where) -> None:
        """Record a residual that must stay at or below ``tol``."""
        self.grid_size += 1
        self.worst = max(self.worst, float(residual))
        if not residual <= tol:
            self.passed = False
            self.failures.append({"where": where, "value": float(residual)})

    def require(self, ok: bool, where, value: float | None = None) -> None:
        self.grid_size += 1
        if not ok:
            self.passed = False
            self.failures.append({"where": where, "value": value})

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst": self.worst,
            "grid_size": self.grid_size,
            "failures": self.failures[:20],
            "n_failures": len(self.failures),
            "details": self.details,
        }


LAMBDAS = tuple(np.round(np.linspace(0.0, 1.0, 11), 12))


def suite_unitarity(n_block: int = 60) -> SuiteResult:
    res = SuiteResult("unitarity")
    for lam in LAMBDAS:
        for N in range(n_block):
            res.check(bs.bs_block(N, lam).unitarity_error(), bs.UNITARITY_TOL, {"N": N, "lam": lam})
    return res


def _fixture_u1(lam: float) -> np.ndarray:
    s, c = math.sqrt(lam), math.sqrt(1 - lam)
    return np.array([[s, -c], [c, s]])


def _fixture_u2(lam: float) -> np.ndarray:
    r = math.sqrt(2 * lam * (1 - lam))
    return np.array([[lam, -r, 1 - lam], [r, 2 * lam - 1, -r], [1 - lam, r, lam]])


def suite_beamsplitter(n_max: int = 30) -> SuiteResult:
    res = SuiteResult("beamsplitter")
    for lam in LAMBDAS:
        res.check(np.max(np.abs(bs.bs_block(1, lam).mat - _fixture_u1(lam))), 1e-12, {"N": 1, "lam": lam})
        res.check(np.max(np.abs(bs.bs_block(2, lam).mat - _fixture_u2(lam))), 1e-12, {"N": 2, "lam": lam})
        for n in range(n_max + 1):
            col0 = bs.bs_block(n, lam).mat[:, 0]
            col1 = bs.bs_block(n + 1, lam).mat[:, 1]
            r0 = max(abs(col0[l] - bs.coeff_0n(n, lam, l)) for l in range(n + 1))
            r1 = max(abs(col1[l] - bs.coeff_1n(n, lam, l)) for l in range(n + 2))
            res.check(max(r0, r1), 1e-10, {"n": n, "lam": lam})
    return res


def suite_majorization(n_max: int = 200, points: int = maj.GRID_POINTS) -> SuiteResult:
    res = SuiteResult("majorization")
    reports = maj.sweep_majorization(n_max, points)
    for name, rep in reports.items():
        res.grid_size += rep.points
        res.details[name] = {"points": rep.points, "violations": len(rep.violations)}
        if rep.worst != math.inf:
            res.details[name]["worst_margin"] = rep.worst
        for n, lam in rep.violations[:20]:
            res.passed = False
            res.failures.append({"where": {"check": name, "n": n, "lam": float(lam)}})
    res.worst = reports["majorization"].worst
    for n in range(3, n_max + 1):
        res.check(abs(maj.bound_chain(n, 1.0 / n).k_gap - maj.k_gap_floor(n)), 1e-12, {"check": "k_gap_at_1/n", "n": n})
    for eps in np.linspace(0.005, 0.16, 32):
        res.check(abs(maj.bound_chain(2, 0.5 - eps).k_gap - maj.k_gap_two(eps)), 1e-12, {"check": "k_gap_n2", "eps": float(eps)})
    return res


def _probe_env() -> DensityMatrix:
    v = np.array([1.0, 0.4j, -0.3, 0.2 + 0.1j])
    v = v / np.linalg.norm(v)
    return DensityMatrix(ModeDims((4,)), 0.7 * np.outer(v, v.conj()) + 0.3 * np.diag([0.4, 0.3, 0.2, 0.1]))


def suite_channel() -> SuiteResult:
    res = SuiteResult("channel")
    sigma, omega = _probe_env(), thermal_state(0.3, 4)
    for lam, mu in [(0.3, 0.7), (0.6, 0.6), (0.9, 0.2), (0.5, 0.5)]:
        res.check(att.compose_check(lam, sigma, mu, omega), 1e-8, {"check": "compose", "lam": lam, "mu": mu})
    for n in range(6):
        spec = att.ChannelSpec(0.5, fock_dm(n))
        for k, rho in enumerate(att.default_probes()):
            wc = att.weak_complementary(spec, rho)
            res.check(att.max_abs_diff(wc, att.complementary_identity_rhs(spec, rho)), 1e-10, {"check": "weak_complementary", "n": n, "probe": k})
    for nu in (0.1, 0.5, 1.0):
        tau = thermal_state(nu)
        for eta in (0.2, 0.5, 0.8):
            out = att.apply(att.ChannelSpec(eta, tau), tau)
            res.check(att.max_abs_diff(out, tau), 1e-8, {"check": "thermal_stability", "nu": nu, "eta": eta})
    for lam, z in [(0.5, 0.3), (0.3, 0.4 - 0.2j), (0.8, -0.25j)]:
        for k, rho in enumerate(att.default_probes()):
            res.check(ps.verify_covariance(lam, sigma, z, rho), 1e-7, {"check": "covariance", "lam": lam, "probe": k})
    rho = att.default_probes()[3]
    for lam in (0.2, 0.5, 0.7):
        out = att.apply(att.ChannelSpec(lam, sigma), rho)
        for alpha in np.linspace(-1.5, 1.5, 7):
            for beta in (0.0, 0.8, -1.1):
                a = complex(alpha, beta)
                if abs(a) > 1.5:
                    continue
                rhs = ps.char_fn(rho, math.sqrt(lam) * a) * ps.char_fn(sigma, math.sqrt(1 - lam) * a)
                res.check(abs(ps.char_fn(out, a) - rhs), 1e-6, {"check": "char_fn", "lam": lam, "alpha": str(a)})
    return res


def suite_cascade(seed: int = 7, trials: int = 3) -> SuiteResult:
    res = SuiteResult("cascade")
    rng = np.random.default_rng(seed)
    for k in (2, 3):
        for t in range(trials):
            lams = tuple(rng.uniform(0.15, 0.95, size=k))
            a = rng.normal(size=6) + 1j * rng.normal(size=6)
            sigma = DensityMatrix(ModeDims((6,)), np.outer(a, a.conj()) / np.vdot(a, a).real)
            spec = att.CascadeSpec(lams, att.build_omega(sigma, lams))
            single = att.ChannelSpec(math.prod(lams), sigma)
            for j, rho in enumerate(att.default_probes()):
                r = att.max_abs_diff(att.cascade_apply(spec, rho), att.apply(single, rho))
                res.check(r, 1e-7, {"k": k, "trial": t, "probe": j})
    return res


def suite_entropy(seed: int = 11) -> SuiteResult:
    res = SuiteResult("entropy")
    res.check(abs(ent.g(0.5) - 1.377444), 1e-5, {"check": "g(1/2)"})
    for x in np.linspace(0.1, 10, 100):
        res.check(abs(ent.g_inverse(ent.g(x)) - x), 1e-10, {"check": "g_inverse", "x": float(x)})
    grid = np.linspace(0.0, 0.5, 11)
    for lam in grid:
        for n_mean in (0.0, 0.5, 2.0, 10.0):
            for nu in (0.0, 0.5, 3.0):
                for s in (0.0, 0.5, 2.0):
                    # entropy cannot exceed that of the thermal state of the same energy
                    s_eff = min(s, ent.g(nu))
                    lower, _ = ent.lim_bounds(float(lam), n_mean, nu, s_eff)
                    res.check(lower, 1e-12, {"check": "lim_lower", "lam": float(lam), "N": n_mean, "nu": nu, "S": s_eff})
    rng = np.random.default_rng(seed)
    for _ in range(2000):
        u, v = rng.dirichlet(np.ones(6)), rng.dirichlet(np.ones(6))
        margin = ent.kl_divergence(u, v) - ent.total_variation(u, v) ** 2 / (2 * ent.LN2)
        res.require(margin >= -1e-12, {"check": "pinsker"}, margin)
    cert = ent.afw_interval()
    res.details["afw"] = {"eps": cert.eps, "certified_c": cert.certified_c, "combined": cert.combined}
    res.require(cert.combined >= 1e-6, {"check": "afw_certificate"}, cert.combined)
    return res


def suite_schemes() -> SuiteResult:
    res = SuiteResult("schemes")
    r1 = sch.scheme1_icoh(1.0 / 3.0, 0.5)
    res.check(abs(r1.icoh - 0.07392), 5e-5, {"check": "scheme1"})
    res.check(r1.meta["closed_form_residual"], 1e-10, {"check": "scheme1_closed_form"})
    r2 = sch.scheme2_icoh(54)
    res.check(abs(r2.icoh - 0.3530), 1e-3, {"check": "scheme2"})
    for n in range(2, 7):
        for lam in np.round(np.arange(1, 10) / 10, 12):
            r = sch.main_scheme_icoh(n, float(lam), simulate=True)
            res.check(abs(r.icoh - r.meta["simulated"]), 1e-9, {"check": "main_scheme", "n": n, "lam": float(lam)})
    for lam in np.round(np.linspace(0.01, 0.99, 99), 12):
        v = sch.ppt_check(float(lam))
        res.require(v < 0, {"check": "ppt", "lam": float(lam)}, v)
    res.details.update({"scheme1": r1.icoh, "scheme2_n54": r2.icoh})
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "unitarity": suite_unitarity,
    "beamsplitter": suite_beamsplitter,
    "majorization": suite_majorization,
    "channel": suite_channel,
    "cascade": suite_cascade,
    "entropy": suite_entropy,
    "schemes": suite_schemes,
}

"""Concrete transmission schemes and the capacity floor assembled from them.

Every scheme sends one half of a pure state ``Psi_AB`` through the attenuator
and reports the coherent information ``S(B) - S(AB)`` of the output. Because
the input and environment are both pure, the output of ``A``, ``B`` and the
environment ``E`` together is pure, and ``S(AB) = S(E)``. That identity is
used wherever it shrinks the matrices handed to the eigensolver.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from attenuant.attenuator import ChannelSpec, apply_bipartite
from attenuant.beamsplitter import _check_lambda, bs_apply_tensor
from attenuant.entropy import (
    afw_interval,
    coherent_info,
    pure_loss_capacity,
    shannon,
    vn_entropy,
)
from attenuant.fock import DensityMatrix, DimensionError, ModeDims, fock_dm, reduced_from_tensor
from attenuant.linalg import hermitian_eigs
from attenuant.majorization import bound_chain, p_dist, q_dist

DEFAULT_EPS = 0.05
INPUT_ENERGY = 0.5
CONSISTENCY_TOL = 1e-9
SIMULATE_MAX_N = 6


class ConsistencyError(AssertionError):
    """Two independent evaluations of the same quantity disagree."""


class FloorFailure(AssertionError):
    """A branch of the capacity floor produced a non-positive certificate."""


@dataclass(frozen=True)
class SchemeResult:
    scheme_id: str
    params: dict
    icoh: float
    energy: float
    meta: dict = field(default_factory=dict, compare=False)


def _pure_output(psi_ab: np.ndarray, env_ket: np.ndarray, lam: float, out_cutoff: int | None = None) -> np.ndarray:
    """Amplitude tensor over ``(A, B, E)`` after the beam splitter acts on ``B`` and ``E``."""
    joint = np.einsum("ab,e->abe", psi_ab, env_ket)
    return bs_apply_tensor(joint, lam, axes=(1, 2), out_cutoff=out_cutoff)


def _icoh_from_pure(zeta: np.ndarray) -> tuple[float, float, float]:
    """``(I_coh, S(B), S(E))`` of a pure tripartite amplitude tensor."""
    s_b = vn_entropy(reduced_from_tensor(zeta, [1]))
    s_e = vn_entropy(reduced_from_tensor(zeta, [2]))
    return s_b - s_e, s_b, s_e


# -- scheme 1: superposition environment at low energy -----------------------------


def xi_ket(eta: float) -> np.ndarray:
    return np.array([math.sqrt(eta), -math.sqrt(1.0 - eta)])


def psi_eta(eta: float) -> np.ndarray:
    """Amplitudes ``psi[a, b]`` of the two-qubit input for the scheme with parameter ``eta``."""
    return np.array([[math.sqrt(eta * (1.0 - eta)), 1.0 - eta], [math.sqrt(eta), 0.0]])


def scheme1_state(eta: float, lam: float) -> DensityMatrix:
    """Output on ``A (x) B`` with ``B`` restricted to levels 0..2 (nothing higher is populated)."""
    zeta = _pure_output(psi_eta(eta), xi_ket(eta), _check_lambda(lam), out_cutoff=3)
    return DensityMatrix(ModeDims((2, 3)), reduced_from_tensor(zeta, [0, 1]))


def scheme1_closed_ab(eta: float) -> np.ndarray:
    """Closed-form output on ``A (x) B`` at ``lam = 1/2``; basis index ``3 a + b``."""
    e, f = eta, 1.0 - eta
    r2 = math.sqrt(2.0)
    m = np.zeros((6, 6))
    m[0, 0] = 0.5 * (1 + e - 3 * e**2 + e**3)
    m[0, 2] = -(f**2) * e / r2
    m[0, 3] = e * math.sqrt(f)
    m[0, 4] = -f * e**1.5 / r2
    m[2, 2] = 0.5 * f**3
    m[2, 3] = -(f**1.5) * e / r2
    m[2, 4] = 0.5 * f**2 * math.sqrt(e)
    m[3, 3] = 0.5 * e * (1 + e)
    m[3, 4] = -(e**1.5) * math.sqrt(f) / r2
    m[4, 4] = 0.5 * f * e
    return m + np.triu(m, 1).T


def scheme1_closed_b(eta: float) -> np.ndarray:
    e, f = eta, 1.0 - eta
    r2 = math.sqrt(2.0)
    m = np.array(
        [
            [0.5 * (1 + 2 * e - 2 * e**2 + e**3), -(e**1.5) * math.sqrt(f) / r2, -(f**2) * e / r2],
            [0.0, 0.5 * f * e, 0.0],
            [0.0, 0.0, 0.5 * f**3],
        ]
    )
    return m + np.triu(m, 1).T


def scheme1_icoh(eta: float, lam: float) -> SchemeResult:
    lam = _check_lambda(lam)
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    params = {"eta": eta, "lam": lam}
    energy = (1.0 - eta) ** 2
    if eta in (0.0, 1.0):
        return SchemeResult("xi", params, 0.0, energy, {"degenerate": True})
    zeta = _pure_output(psi_eta(eta), xi_ket(eta), lam, out_cutoff=3)
    icoh, s_b, s_e = _icoh_from_pure(zeta)
    meta = {"S_B": s_b, "S_AB": s_e, "cutoff_B": 3}
    if lam == 0.5:
        rho_ab = reduced_from_tensor(zeta, [0, 1])
        meta["closed_form_residual"] = max(
            float(np.max(np.abs(rho_ab - scheme1_closed_ab(eta)))),
            float(np.max(np.abs(reduced_from_tensor(zeta, [1]) - scheme1_closed_b(eta)))),
        )
    return SchemeResult("xi", params, icoh, energy, meta)


def scheme1_max(lam: float = 0.5, points: int = 2001) -> tuple[float, float]:
    """``(eta*, max I_coh)`` from a uniform grid refined by golden-section search."""
    etas = np.linspace(0.0, 1.0, points)
    vals = np.array([scheme1_icoh(e, lam).icoh for e in etas])
    k = int(np.argmax(vals))
    h = 1.0 / (points - 1)
    lo, hi = max(etas[k] - h, 1e-9), min(etas[k] + h, 1.0 - 1e-9)
    if not (k == 0 or k == points - 1):
        res = minimize_scalar(lambda e: -scheme1_icoh(e, lam).icoh, bracket=(lo, etas[k], hi), method="golden", tol=1e-10)
        if -res.fun > vals[k] and lo <= res.x <= hi:
            return float(res.x), float(-res.fun)
    return float(etas[k]), float(vals[k])


# -- scheme 2: high-energy superposition environment --------------------------------


def scheme2_required_cutoff(n: int) -> int:
    """Levels needed on ``B`` and ``E``: at most ``2n`` photons are ever shared between them."""
    return 2 * n + 1


def scheme2_env_ket(n: int, phase: int = -1) -> np.ndarray:
    """``(|n-1> + phase |n>)/sqrt 2`` padded to ``n + 1`` levels.

    The default ``phase = -1`` is the positive-rate member of the pair in this
    package's mixing convention. Flipping the sign of the mixing angle is the
    same as conjugating the environment by parity, which flips ``phase``; with
    ``phase = +1`` the coherent information is exactly the negative.
    """
    if phase not in (1, -1):
        raise ValueError("phase must be +1 or -1")
    env = np.zeros(n + 1)
    env[n - 1] = 1.0 / math.sqrt(2.0)
    env[n] = phase / math.sqrt(2.0)
    return env


def scheme2_icoh(n: int, cutoff: int | None = None, phase: int = -1) -> SchemeResult:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    need = scheme2_required_cutoff(n)
    if cutoff is None:
        cutoff = need
    if cutoff < need:
        raise DimensionError(f"cutoff {cutoff} is below the required {need} for n={n}")
    psi = np.zeros((2, n + 1))
    psi[0, [n - 1, n]] = 0.5
    psi[1, [n - 3, n - 2]] = 0.5
    zeta = _pure_output(psi, scheme2_env_ket(n, phase), 0.5, out_cutoff=cutoff)
    icoh, s_b, s_e = _icoh_from_pure(zeta)
    energy = float(np.sum(np.abs(psi) ** 2 * np.arange(n + 1)))
    return SchemeResult("xi_prime", {"n": n, "lam": 0.5, "phase": phase}, icoh, energy, {"S_B": s_b, "S_AB": s_e, "cutoff": cutoff})


# -- main scheme: Fock environment ---------------------------------------------------


def main_scheme_state(n: int, lam: float) -> DensityMatrix:
    """Output on ``A (x) B`` for input ``(|01> + |10>)/sqrt 2`` and environment ``|n>``."""
    psi = np.zeros((2, 2))
    psi[0, 1] = psi[1, 0] = 1.0 / math.sqrt(2.0)
    rho = DensityMatrix(ModeDims((2, 2)), np.outer(psi.reshape(-1), psi.reshape(-1)))
    return apply_bipartite(ChannelSpec(lam, fock_dm(n)), rho, 1)


def main_scheme_icoh(n: int, lam: float, simulate: bool | None = None) -> SchemeResult:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    hp, hq = shannon(p_dist(n, lam)), shannon(q_dist(n, lam))
    icoh = hp - hq
    meta: dict = {}
    if simulate is None:
        simulate = n <= SIMULATE_MAX_N
    if simulate:
        direct = coherent_info(main_scheme_state(n, lam), [0])
        meta["simulated"] = direct
        if abs(direct - icoh) > CONSISTENCY_TOL:
            raise ConsistencyError(f"closed form {icoh!r} vs simulation {direct!r} at n={n}, lam={lam}")
    return SchemeResult("fock", {"n": n, "lam": float(lam)}, icoh, INPUT_ENERGY, meta)


# -- environment selector and capacity floor -----------------------------------------


@dataclass(frozen=True)
class SigmaChoice:
    branch: str  # "vacuum" | "xi_one_third" | "fock_n"
    n: int | None
    eps: float

    def state(self) -> DensityMatrix:
        if self.branch == "vacuum":
            return fock_dm(0)
        if self.branch == "xi_one_third":
            v = xi_ket(1.0 / 3.0)
            return DensityMatrix(ModeDims((2,)), np.outer(v, v))
        return fock_dm(self.n)


def _check_eps(eps: float) -> float:
    if not 0.0 < eps < 1.0 / 6.0:
        raise ValueError(f"eps must lie in (0, 1/6), got {eps}")
    return float(eps)


def fock_index(lam: float) -> int:
    """``n`` with ``1/(n+1) < lam <= 1/n``; exact reciprocals map to their own ``n``."""
    return int(math.floor((1.0 / lam) * (1.0 + 1e-12)))


def sigma_selector(lam: float, eps: float = DEFAULT_EPS) -> SigmaChoice:
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must lie in (0, 1], got {lam}")
    eps = _check_eps(eps)
    if lam >= 0.5 + eps:
        return SigmaChoice("vacuum", None, eps)
    if lam >= 0.5 - eps:
        return SigmaChoice("xi_one_third", None, eps)
    if lam >= 1.0 / 3.0:
        return SigmaChoice("fock_n", 2, eps)
    return SigmaChoice("fock_n", max(fock_index(lam), 3), eps)


@lru_cache(maxsize=1)
def default_afw_certificate():
    return afw_interval()


@dataclass(frozen=True)
class FloorResult:
    lam: float
    branch: str
    n: int | None
    value: float
    method: str


def capacity_floor(lam: float, eps: float = DEFAULT_EPS) -> FloorResult:
    """Certified lower bound on the capacity at input energy 1/2 with the selected environment.

    Near ``lam = 1/2`` the continuity certificate covers only a narrow window. Outside
    it the exactly evaluated coherent information of the same scheme is used, which
    is itself a valid single-letter lower bound at that ``lam``.
    """
    choice = sigma_selector(lam, eps)
    if choice.branch == "vacuum":
        value, method = pure_loss_capacity(lam, INPUT_ENERGY), "pure_loss"
    elif choice.branch == "xi_one_third":
        cert = default_afw_certificate()
        if not cert.empty and cert.lam_lo <= lam <= cert.lam_hi:
            value, method = cert.certified_c, "continuity_certificate"
        else:
            value, method = scheme1_icoh(1.0 / 3.0, lam).icoh, "coherent_info"
    else:
        value, method = bound_chain(choice.n, lam).certified, "bound_chain"
    if not value > 0.0:
        raise FloorFailure(f"non-positive floor {value!r} at lam={lam} ({choice.branch})")
    return FloorResult(float(lam), choice.branch, choice.n, float(value), method)


# -- entanglement witness -------------------------------------------------------------


def transmitted_bell_state(lam: float) -> np.ndarray:
    """Two-qubit output when half of ``(|01> + |10>)/sqrt 2`` crosses a pure-loss channel."""
    lam = _check_lambda(lam)
    m = np.zeros((4, 4))
    m[0, 0] = (1.0 - lam) / 2.0
    m[1, 1] = lam / 2.0
    m[2, 2] = 0.5
    m[1, 2] = m[2, 1] = math.sqrt(lam) / 2.0
    return m


def partial_transpose_b(mat: np.ndarray, da: int = 2, db: int = 2) -> np.ndarray:
    return mat.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)


def ppt_check(lam: float) -> float:
    """Smallest eigenvalue of the partial transpose; negative means entangled."""
    return float(hermitian_eigs(partial_transpose_b(transmitted_bell_state(lam)))[0])


# -- figure tables ----------------------------------------------------------------------


FIGURE_IDS = ("icoh_main", "icoh_xi", "icoh_xi_prime")


def thread_count() -> int:
    env = os.environ.get("ATTENUANT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def ordered_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """``map`` that may run on threads but always returns results in input order."""
    workers = thread_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _with_point(grid: np.ndarray, x: float) -> np.ndarray:
    return np.unique(np.append(grid, x))


def figure_data(figure_id: str, grid: dict | None = None, workers: int | None = None) -> list[tuple[str, float, float]]:
    """Rows ``(curve_id, x, y)`` for one figure, in deterministic grid order.

    ``grid`` keys: ``icoh_main`` takes ``n`` (iterable) and ``points``; ``icoh_xi``
    takes ``lam`` and ``points``; ``icoh_xi_prime`` takes ``n`` (iterable).
    """
    grid = dict(grid or {})
    if figure_id == "icoh_main":
        ns = list(grid.get("n", (2, 5, 10, 20)))
        lams = np.linspace(0.0, 1.0, int(grid.get("points", 201)))[1:-1]
        tasks = [(n, float(l)) for n in ns for l in lams]
        ys = ordered_map(lambda t: main_scheme_icoh(t[0], t[1], simulate=False).icoh, tasks, workers)
        return [(f"n={n}", l, y) for (n, l), y in zip(tasks, ys)]
    if figure_id == "icoh_xi":
        lam = float(grid.get("lam", 0.5))
        etas = _with_point(np.linspace(0.0, 1.0, int(grid.get("points", 201))), 1.0 / 3.0)
        ys = ordered_map(lambda e: scheme1_icoh(float(e), lam).icoh, list(etas), workers)
        return [(f"lambda={lam:g}", float(e), y) for e, y in zip(etas, ys)]
    if figure_id == "icoh_xi_prime":
        ns = list(grid.get("n", range(3, 36)))
        ys = ordered_map(lambda n: scheme2_icoh(n).icoh, ns, workers)
        return [("lambda=0.5", float(n), y) for n, y in zip(ns, ys)]
    raise ValueError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")


def floor_sweep(lams: Iterable[float], eps: float = DEFAULT_EPS, workers: int | None = None) -> list[FloorResult]:
    return ordered_map(lambda l: capacity_floor(float(l), eps), list(lams), workers)

"""Entropies, the bosonic entropy function and capacity bounds. All in bits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from attenuant.fock import DensityMatrix, partial_trace
from attenuant.linalg import hermitian_eigs

SUM_TOL = 1e-12
CLAMP_TOL = 1e-14
EIG_CLAMP = 1e-10
LN2 = math.log(2.0)


@dataclass(frozen=True)
class ProbDist:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).copy()
        if w.ndim != 1:
            raise ValueError("weights must be a vector")
        if np.any(w < -CLAMP_TOL):
            raise ValueError(f"negative weight {w.min():.3e}")
        w[w < 0] = 0.0
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    def ascending(self) -> np.ndarray:
        return np.sort(self.weights, kind="stable")


def _weights(p) -> np.ndarray:
    w = getattr(p, "weights", p)
    return np.asarray(w, dtype=float)


def _same_length(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(len(u), len(v))
    return np.pad(u, (0, n - len(u))), np.pad(v, (0, n - len(v)))


def shannon(p) -> float:
    w = _weights(p)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def kl_divergence(u, v) -> float:
    """``D(u || v)`` in bits; ``math.inf`` when ``u`` is not supported inside ``v``."""
    u, v = _same_length(_weights(u), _weights(v))
    live = u > 0
    if np.any(v[live] <= 0):
        return math.inf
    return float(np.sum(u[live] * np.log2(u[live] / v[live])))


def total_variation(u, v) -> float:
    """Unnormalised l1 distance ``sum |u - v|``."""
    u, v = _same_length(_weights(u), _weights(v))
    return float(np.sum(np.abs(u - v)))


def clamped_spectrum(mat: np.ndarray) -> np.ndarray:
    w = hermitian_eigs(mat)
    if w.size and w[0] < -EIG_CLAMP:
        raise ValueError(f"state has negative eigenvalue {w[0]:.3e}")
    return np.clip(w, 0.0, None)


def vn_entropy(rho: DensityMatrix | np.ndarray) -> float:
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    return shannon(clamped_spectrum(mat))


def coherent_info(rho_ab: DensityMatrix, a_modes: Sequence[int]) -> float:
    """``S(B) - S(AB)`` where ``B`` is every mode not listed in ``a_modes``."""
    a_modes = sorted(set(a_modes))
    b_modes = [m for m in range(rho_ab.dims.n_modes) if m not in a_modes]
    if not a_modes or not b_modes:
        raise ValueError("both sides of the bipartition must be nonempty")
    return vn_entropy(partial_trace(rho_ab, b_modes)) - vn_entropy(rho_ab)


# -- bosonic entropy and capacity formulas ------------------------------------


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def g(x: float) -> float:
    """Entropy of a thermal state with mean photon number ``x``."""
    if x < 0:
        raise ValueError(f"g needs x >= 0, got {x}")
    return _xlog2x(x + 1.0) - _xlog2x(x)


def g_inverse(y: float, tol: float = 1e-15) -> float:
    if y < 0:
        raise ValueError(f"g_inverse needs y >= 0, got {y}")
    if y == 0:
        return 0.0
    # g(x) >= log2(1 + x), so the root lies below 2^y - 1
    hi = max(2.0**y - 1.0, 1.0)
    return brentq(lambda x: g(x) - y, 0.0, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=400)


def pure_loss_capacity(lam: float, n_mean: float) -> float:
    return max(g(lam * n_mean) - g((1.0 - lam) * n_mean), 0.0)


def universal_cap_upper(m: int, n_mean: float) -> float:
    return m * g(n_mean / m)


def lim_bounds(lam: float, n_mean: float, nu_sigma: float, s_sigma: float) -> tuple[float, float]:
    """Lower and upper capacity bounds in terms of the environment's energy and entropy."""
    lower = g((1.0 - lam) * g_inverse(s_sigma) + lam * n_mean) - s_sigma - g(lam * nu_sigma + (1.0 - lam) * n_mean)
    upper = g(lam * n_mean + (1.0 - lam) * nu_sigma) - math.log2(lam + (1.0 - lam) * 2.0**s_sigma)
    return lower, upper


def depolarizing_upper(lam: float, d: int) -> float:
    return max((1.0 - 2.0 * lam) * math.log2(d), 0.0)


# -- continuity certificate near lambda = 1/2 ---------------------------------


def binary_entropy(x: float) -> float:
    return -_xlog2x(x) - _xlog2x(1.0 - x)


def conditional_entropy_continuity(t: float, dim_a: int = 2) -> float:
    """Tight uniform bound on ``|H(A|B)_rho - H(A|B)_sigma|`` at trace distance ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"trace distance must lie in [0, 1], got {t}")
    return 2.0 * t * math.log2(dim_a) + (1.0 + t) * binary_entropy(t / (1.0 + t))


def trace_distance_bound(lam: float) -> float:
    """Upper bound on the trace distance between the scheme-1 outputs at ``lam`` and 1/2.

    The global state of input, output and environment is pure, and only the
    photon-number blocks ``N <= 2`` of the beam splitter are populated, where the
    generator has operator norm at most 2. Hence the two global kets differ by
    at most ``2 |theta(lam) - pi/4|`` in norm, which bounds the trace distance of
    any reduction.
    """
    return min(1.0, 2.0 * abs(math.acos(math.sqrt(lam)) - math.pi / 4))


def fock_branch_floor(eps: float) -> float:
    """Certified coherent information for the |2> environment at ``lam <= 1/2 - eps``."""
    return eps**2 / (8.0 * LN2)


@dataclass(frozen=True)
class AfwCertificate:
    eps: float
    lam_lo: float
    lam_hi: float
    certified_c: float
    combined: float
    icoh_half: float

    @property
    def empty(self) -> bool:
        return self.certified_c <= 0.0


DEFAULT_EPS_GRID = tuple(np.linspace(1e-4, 2e-2, 400))


def afw_interval(
    c_target: float = 0.0,
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    icoh_half: float | Callable[[], float] | None = None,
) -> AfwCertificate:
    """Certified coherent-information floor on ``[1/2 - eps, 1/2 + eps]``.

    For every ``eps`` on the grid, ``certified_c = I(1/2) - AFW(T)`` with ``T`` the
    worst trace-distance bound on the interval. The chosen ``eps`` maximises
    ``combined = min(certified_c, eps^2 / (8 ln 2))``, the constant shared with the
    neighbouring |2>-environment branch, among candidates whose ``combined``
    reaches ``c_target``. No admissible ``eps`` gives an empty certificate.
    """
    if icoh_half is None:
        from attenuant.schemes import scheme1_icoh

        icoh_half = scheme1_icoh(1.0 / 3.0, 0.5).icoh
    elif callable(icoh_half):
        icoh_half = icoh_half()
    best = None
    for eps in sorted(float(e) for e in eps_grid):
        if not 0.0 <= eps < 0.5:
            raise ValueError(f"eps must lie in [0, 1/2), got {eps}")
        t = max(trace_distance_bound(0.5 - eps), trace_distance_bound(0.5 + eps))
        c1 = icoh_half - conditional_entropy_continuity(t)
        combined = min(c1, fock_branch_floor(eps))
        if c1 <= 0.0 or combined < c_target:
            continue
        if best is None or combined > best.combined:
            best = AfwCertificate(eps, 0.5 - eps, 0.5 + eps, c1, combined, icoh_half)
    if best is None:
        return AfwCertificate(0.0, 0.5, 0.5, 0.0, 0.0, icoh_half)
    return best

"""Displacement operators and characteristic functions of single-mode states.

Matrix elements of ``D(alpha) = exp(alpha a^dag - conj(alpha) a)`` are
evaluated from the associated-Laguerre closed form. Each entry is exact, so
the only truncation effect is the set of levels that are left out. To keep
large ``n`` finite, the recurrence runs on the normalised functions
``f_n = sqrt(n!/(n+k)!) L_n^(k)(x)`` rather than on raw factorials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from attenuant.attenuator import ChannelSpec, apply, max_abs_diff
from attenuant.fock import DensityMatrix, DimensionError, ModeDims, Operator

TAIL_BUDGET = 1e-8


class TruncationError(ValueError):
    """A displaced state leaks more probability than the cutoff allows."""


@dataclass(frozen=True)
class PhasePoint:
    alpha: complex


def unitarity_margin(alpha: complex) -> int:
    """Top rows of a truncated ``D(alpha)`` excluded from unitarity checks."""
    return math.ceil(4 * abs(alpha) ** 2)


def _lower_triangle(alpha: complex, rows: int, cols: int) -> np.ndarray:
    """``<m|D(alpha)|n>`` for ``m >= n``; entries with ``m < n`` are left at zero."""
    x = abs(alpha) ** 2
    out = np.zeros((rows, cols), dtype=complex)
    if alpha == 0:
        k = min(rows, cols)
        out[range(k), range(k)] = 1.0
        return out
    log_r, phase = math.log(abs(alpha)), alpha / abs(alpha)
    for k in range(rows):
        length = min(cols, rows - k)
        if length <= 0:
            break
        # scale = alpha^k e^{-x/2} / sqrt(k!) absorbs f_0 = 1/sqrt(k!)
        log_scale = k * log_r - x / 2 - 0.5 * math.lgamma(k + 1)
        scale = math.exp(log_scale) * phase**k
        f = np.empty(length, dtype=complex)
        f[0] = scale
        if length > 1:
            f[1] = scale * (1 + k - x) / math.sqrt(1 + k)
        for n in range(1, length - 1):
            a = (2 * n + 1 + k - x) / math.sqrt((n + 1) * (n + 1 + k))
            b = math.sqrt(n * (n + k) / ((n + 1) * (n + k + 1)))
            f[n + 1] = a * f[n] - b * f[n - 1]
        idx = np.arange(length)
        out[idx + k, idx] = f
    return out


def displacement_block(alpha: complex, rows: int, cols: int) -> np.ndarray:
    """Exact entries ``<m|D(alpha)|n>`` for ``m < rows`` and ``n < cols``."""
    if rows < 1 or cols < 1:
        raise ValueError("block dimensions must be >= 1")
    alpha = complex(alpha)
    lower = _lower_triangle(alpha, rows, cols)
    # <m|D(a)|n> = conj(<n|D(-a)|m>) fills the strict upper triangle
    upper = _lower_triangle(-alpha, cols, rows).conj().T
    m, n = np.indices((rows, cols))
    return np.where(m >= n, lower, upper)


def displacement_matrix(alpha: complex, cutoff: int) -> Operator:
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    return Operator(ModeDims((cutoff,)), displacement_block(alpha, cutoff, cutoff))


def char_fn(rho: DensityMatrix, alpha: complex) -> complex:
    """``Tr[rho D(alpha)]``; exact because only the support of ``rho`` enters."""
    if rho.dims.n_modes != 1:
        raise DimensionError("characteristic function is implemented for one mode")
    d = rho.dims.dims[0]
    return complex(np.sum(rho.mat.T * displacement_block(alpha, d, d)))


def displace(rho: DensityMatrix, z: complex, cutoff: int, budget: float = TAIL_BUDGET) -> DensityMatrix:
    """``D(z) rho D(z)^dagger`` restricted to levels below ``cutoff``.

    Raises :class:`TruncationError` when the discarded probability exceeds ``budget``.
    """
    if rho.dims.n_modes != 1:
        raise DimensionError("displace acts on one mode")
    m = displacement_block(z, cutoff, rho.dims.dims[0])
    out = m @ rho.mat @ m.conj().T
    tail = rho.trace - float(np.trace(out).real)
    if tail > budget:
        raise TruncationError(f"cutoff {cutoff} loses probability {tail:.3e} > {budget:.1e}")
    return DensityMatrix(ModeDims((cutoff,)), out, meta={"tail_mass": max(tail, 0.0)})


def verify_covariance(lam: float, sigma: DensityMatrix, z: complex, rho: DensityMatrix, cutoff: int = 30) -> float:
    """Worst entrywise residual of the two displacement-covariance identities.

    ``Phi(D_z rho) = D_{sqrt(lam) z} Phi(rho)`` and
    ``Phi_{lam, D_z sigma} = D_{sqrt(1-lam) z} Phi_{lam, sigma}`` (checked on ``rho``).
    Displaced states are held at ``cutoff`` levels; every displacement must stay
    within the tail budget or :class:`TruncationError` is raised.
    """
    z = complex(z)
    phi = ChannelSpec(lam, sigma)
    plain = apply(phi, rho)
    big = cutoff + sigma.dims.dims[0]

    lhs1 = apply(phi, displace(rho, z, cutoff))
    rhs1 = displace(plain, math.sqrt(lam) * z, big)
    lhs2 = apply(ChannelSpec(lam, displace(sigma, z, cutoff)), rho)
    rhs2 = displace(plain, math.sqrt(1.0 - lam) * z, big + rho.dims.dims[0])
    return max(max_abs_diff(lhs1, rhs1), max_abs_diff(lhs2, rhs2))

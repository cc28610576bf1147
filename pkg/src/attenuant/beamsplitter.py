"""Two-mode beam splitter on truncated Fock space.

The unitary ``U = exp(theta (a^dag b - a b^dag))`` with ``theta = arccos(sqrt(lam))``
conserves the total photon number, so it splits into blocks acting on
``span{|l>|N-l> : l = 0..N}``. Each block is the exponential of a real
antisymmetric tridiagonal generator; ``i * generator`` is Hermitian and its
eigendecomposition does not depend on ``lam``, so it is cached per ``N``.

Block basis ordering is by the occupation ``l`` of the *first* mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from attenuant.fock import DimensionError, ModeDims, StateVector
from attenuant.linalg import jacobi_eigh

UNITARITY_TOL = 1e-12


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0 or math.isnan(lam):
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    return lam


def mixing_angle(lam: float) -> float:
    return math.acos(math.sqrt(_check_lambda(lam)))


def generator(N: int) -> np.ndarray:
    """Matrix of ``a^dag b - a b^dag`` on the total-photon-number-``N`` block."""
    if N < 0:
        raise ValueError(f"photon number must be >= 0, got {N}")
    l = np.arange(N)
    off = np.sqrt((l + 1.0) * (N - l))
    return np.diag(off, -1) - np.diag(off, 1)


@lru_cache(maxsize=512)
def _generator_eig(N: int) -> tuple[np.ndarray, np.ndarray]:
    w, v = jacobi_eigh(1j * generator(N))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


@dataclass(frozen=True)
class BlockUnitary:
    N: int
    mat: np.ndarray

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(self.mat.T @ self.mat - np.eye(self.N + 1))))


@lru_cache(maxsize=4096)
def _block(N: int, lam: float) -> np.ndarray:
    theta = mixing_angle(lam)
    if theta == 0.0:
        m = np.eye(N + 1)
    else:
        w, v = _generator_eig(N)
        # exp(theta G) = exp(-i theta (iG))
        m = ((v * np.exp(-1j * theta * w)) @ v.conj().T).real
    m.setflags(write=False)
    return m


def bs_block(N: int, lam: float) -> BlockUnitary:
    """Beam-splitter unitary restricted to the ``N``-photon block."""
    if N < 0:
        raise ValueError(f"photon number must be >= 0, got {N}")
    return BlockUnitary(int(N), _block(int(N), _check_lambda(lam)))


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _pow_half(x: float, k: float) -> float:
    # x**(k/2) with the convention 0**0 == 1
    if k == 0:
        return 1.0
    return x ** (k / 2.0)


def coeff_0n(n: int, lam: float, l: int) -> float:
    """Coefficient of ``|l>|n-l>`` in ``U |0>|n>``."""
    lam = _check_lambda(lam)
    if not 0 <= l <= n:
        raise ValueError(f"index {l} outside 0..{n}")
    return math.sqrt(math.comb(n, l)) * _pow_half(1.0 - lam, l) * _pow_half(lam, n - l)


def coeff_1n(n: int, lam: float, l: int) -> float:
    """Coefficient of ``|l>|n+1-l>`` in ``U |1>|n>``."""
    lam = _check_lambda(lam)
    if not 0 <= l <= n + 1:
        raise ValueError(f"index {l} outside 0..{n + 1}")
    if lam == 1.0:
        return 1.0 if l == 1 else 0.0
    # (1-lam)^{l/2} lam^{(n-l)/2} ((n+1)(1-lam) - l) / sqrt((n+1)(1-lam)), kept finite at l = n+1
    amp = math.sqrt(math.comb(n + 1, l)) * _pow_half(1.0 - lam, l) / math.sqrt((n + 1) * (1.0 - lam))
    lin = (n + 1) * (1.0 - lam) - l
    if l == n + 1:
        # lam^{-1/2} * lin with lin = -(n+1) lam: finite as lam -> 0
        return amp * (n + 1) * math.sqrt(lam)
    return -amp * _pow_half(lam, n - l) * lin


def bs_apply_tensor(
    psi: np.ndarray,
    lam: float,
    axes: tuple[int, int] = (-2, -1),
    out_cutoff: int | None = None,
    inverse: bool = False,
) -> np.ndarray:
    """Apply the beam splitter to the two tensor axes ``axes`` of ``psi``.

    The first listed axis plays the role of mode ``a``. The output cutoff of
    both modes defaults to the sum of the input cutoffs, which holds every
    reachable level. A smaller ``out_cutoff`` crops; cropping any nonzero
    amplitude raises ``DimensionError``. ``inverse=True`` applies ``U^dagger``.
    """
    lam = _check_lambda(lam)
    psi = np.asarray(psi, dtype=complex)
    ax = tuple(a % psi.ndim for a in axes)
    x = np.moveaxis(psi, ax, (-2, -1))
    da, db = x.shape[-2:]
    full = da + db
    out = np.zeros(x.shape[:-2] + (full, full), dtype=complex)
    for N in range(da + db - 1):
        lo, hi = max(0, N - db + 1), min(N, da - 1)
        src = np.arange(lo, hi + 1)
        vec = x[..., src, N - src]
        if not np.any(vec):
            continue
        blk = _block(N, lam)
        if inverse:
            blk = blk.T
        l = np.arange(N + 1)
        out[..., l, N - l] = vec @ blk[:, src].T
    if out_cutoff is not None and out_cutoff < full:
        lost = out[..., out_cutoff:, :], out[..., :, out_cutoff:]
        if any(np.max(np.abs(t), initial=0.0) > 1e-13 for t in lost):
            raise DimensionError(f"output cutoff {out_cutoff} discards nonzero amplitude")
        out = out[..., :out_cutoff, :out_cutoff]
    return np.moveaxis(out, (-2, -1), ax)


def bs_apply(psi: StateVector, lam: float) -> StateVector:
    """Beam splitter on a two-mode pure state; output cutoffs are the input sum."""
    if psi.dims.n_modes != 2:
        raise DimensionError(f"beam splitter needs two modes, got {psi.dims.n_modes}")
    out = bs_apply_tensor(psi.tensor(), lam)
    return StateVector(ModeDims(out.shape), out.reshape(-1))


def full_unitary(cutoff_a: int, cutoff_b: int, lam: float) -> np.ndarray:
    """Dense isometry from ``cutoff_a x cutoff_b`` into the summed-cutoff two-mode space."""
    basis = np.eye(cutoff_a * cutoff_b, dtype=complex).reshape(-1, cutoff_a, cutoff_b)
    cols = bs_apply_tensor(basis, lam)
    return cols.reshape(cols.shape[0], -1).T

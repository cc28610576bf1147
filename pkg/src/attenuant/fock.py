"""Truncated Fock-space states and the structural operations on them.

Mode ``j`` of a :class:`ModeDims` with cutoff ``d`` holds Fock levels
``0 .. d-1``. Multi-mode bases are row-major over the per-mode levels, so a
density matrix of shape ``(D, D)`` can always be viewed as a tensor of shape
``dims + dims``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from attenuant.linalg import hermitian_eigs, jacobi_eigh

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
THERMAL_TAIL = 1e-12


class DimensionError(ValueError):
    """Mode layout of the operands does not fit the requested operation."""


@dataclass(frozen=True)
class ModeDims:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionError("at least one mode is required")
        if any(d < 1 for d in dims):
            raise DimensionError(f"cutoffs must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def index(self, occupation: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(occupation), self.dims))

    def occupation(self, index: int) -> tuple[int, ...]:
        return tuple(int(k) for k in np.unravel_index(index, self.dims))

    def concat(self, other: "ModeDims") -> "ModeDims":
        return ModeDims(self.dims + other.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


def as_dims(dims) -> ModeDims:
    if isinstance(dims, ModeDims):
        return dims
    if isinstance(dims, (int, np.integer)):
        return ModeDims((int(dims),))
    return ModeDims(tuple(dims))


@dataclass(frozen=True)
class StateVector:
    dims: ModeDims
    amps: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != dims.size:
            raise DimensionError(f"{amps.size} amplitudes for dims {dims.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_valid(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims.dims)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True)
class Operator:
    dims: ModeDims
    mat: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (dims.size, dims.size):
            raise DimensionError(f"operator of shape {mat.shape} does not fit dims {dims.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix over a truncated multi-mode Fock basis.

    Construction only checks the shape. :meth:`check` runs the full
    Hermiticity / trace / positivity validation, which needs an eigensolve.
    """

    dims: ModeDims
    mat: np.ndarray
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        dims = as_dims(self.dims)
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (dims.size, dims.size):
            raise DimensionError(f"matrix of shape {mat.shape} does not fit dims {dims.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def tensor(self) -> np.ndarray:
        return self.mat.reshape(self.dims.dims + self.dims.dims)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigs(self.mat)

    def check(
        self,
        herm_tol: float = HERMITIAN_TOL,
        trace_tol: float = NORM_TOL,
        psd_tol: float = PSD_TOL,
    ) -> None:
        """Raise ``ValueError`` unless the matrix is a valid density matrix."""
        herm = float(np.max(np.abs(self.mat - self.mat.conj().T)))
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: max |rho - rho^H| = {herm:.3e}")
        if abs(self.trace - 1.0) > trace_tol:
            raise ValueError(f"trace {self.trace!r} differs from 1")
        lo = float(self.eigenvalues()[0])
        if lo < -psd_tol:
            raise ValueError(f"negative eigenvalue {lo:.3e}")

    def is_valid(self, **tols) -> bool:
        try:
            self.check(**tols)
        except ValueError:
            return False
        return True


# -- constructors -----------------------------------------------------------


def fock_ket(levels: Sequence[int] | int, dims) -> StateVector:
    dims = as_dims(dims)
    levels = (levels,) if isinstance(levels, (int, np.integer)) else tuple(levels)
    amps = np.zeros(dims.size, dtype=complex)
    amps[dims.index(levels)] = 1.0
    return StateVector(dims, amps)


def ket(coeffs: dict, dims) -> StateVector:
    """Build a ket from ``{occupation tuple: amplitude}``."""
    dims = as_dims(dims)
    amps = np.zeros(dims.size, dtype=complex)
    for occ, c in coeffs.items():
        occ = (occ,) if isinstance(occ, (int, np.integer)) else tuple(occ)
        amps[dims.index(occ)] += c
    return StateVector(dims, amps)


def fock_dm(n: int, cutoff: int | None = None) -> DensityMatrix:
    cutoff = n + 1 if cutoff is None else cutoff
    if not 0 <= n < cutoff:
        raise ValueError(f"level {n} does not fit cutoff {cutoff}")
    return fock_ket(n, cutoff).projector()


def thermal_tail_cutoff(nu: float, tail: float = THERMAL_TAIL) -> int:
    """Smallest cutoff whose discarded thermal tail mass is below ``tail``."""
    if nu == 0:
        return 1
    r = nu / (nu + 1.0)
    # tail mass beyond cutoff K is r**K
    return max(1, int(math.ceil(math.log(tail) / math.log(r))) + 1)


def thermal_state(nu: float, cutoff: int | None = None, tail: float = THERMAL_TAIL) -> DensityMatrix:
    """Single-mode thermal state, truncated and renormalised.

    The discarded tail mass is stored in ``meta["tail_mass"]``.
    """
    if nu < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nu}")
    if cutoff is None:
        cutoff = thermal_tail_cutoff(nu, tail)
    levels = np.arange(cutoff)
    if nu == 0:
        w = (levels == 0).astype(float)
    else:
        r = nu / (nu + 1.0)
        w = np.exp(levels * math.log(r)) / (nu + 1.0)
    kept = float(w.sum())
    return DensityMatrix(ModeDims((cutoff,)), np.diag(w / kept), meta={"tail_mass": max(0.0, 1.0 - kept)})


def pad(rho: DensityMatrix, dims) -> DensityMatrix:
    """Embed ``rho`` into a basis with larger (or equal) per-mode cutoffs."""
    dims = as_dims(dims)
    if dims.n_modes != rho.dims.n_modes or any(a > b for a, b in zip(rho.dims, dims)):
        raise DimensionError(f"cannot pad {rho.dims.dims} into {dims.dims}")
    t = np.zeros(dims.dims + dims.dims, dtype=complex)
    t[tuple(slice(0, d) for d in rho.dims.dims * 2)] = rho.tensor()
    return DensityMatrix(dims, t.reshape(dims.size, dims.size), meta=dict(rho.meta))


def crop(rho: DensityMatrix, dims) -> DensityMatrix:
    """Restrict ``rho`` to the leading Fock levels of each mode (no renormalisation)."""
    dims = as_dims(dims)
    if dims.n_modes != rho.dims.n_modes or any(a < b for a, b in zip(rho.dims, dims)):
        raise DimensionError(f"cannot crop {rho.dims.dims} to {dims.dims}")
    t = rho.tensor()[tuple(slice(0, d) for d in dims.dims * 2)]
    return DensityMatrix(dims, t.reshape(dims.size, dims.size), meta=dict(rho.meta))


# -- structural operations --------------------------------------------------


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(a.dims.concat(b.dims), np.kron(a.mat, b.mat))


def _check_modes(modes: Iterable[int], n_modes: int) -> list[int]:
    modes = sorted(set(int(m) for m in modes))
    if not modes:
        raise ValueError("mode set must be nonempty")
    if modes[0] < 0 or modes[-1] >= n_modes:
        raise ValueError(f"modes {modes} out of range for {n_modes} modes")
    return modes


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the modes in ``keep`` (returned in ascending mode order)."""
    n = rho.dims.n_modes
    keep = _check_modes(keep, n)
    if len(keep) == n:
        return rho
    traced = [m for m in range(n) if m not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = [letters[i] for i in range(n)]
    col = [letters[i].upper() for i in range(n)]
    for m in traced:
        col[m] = row[m]
    out = "".join(row[m] for m in keep) + "".join(col[m] for m in keep)
    t = np.einsum("".join(row) + "".join(col) + "->" + out, rho.tensor())
    kdims = ModeDims(tuple(rho.dims.dims[m] for m in keep))
    return DensityMatrix(kdims, t.reshape(kdims.size, kdims.size))


def reduced_from_tensor(psi: np.ndarray, keep: Sequence[int], weights=None) -> np.ndarray:
    """Reduced density matrix of a pure state given as an amplitude tensor.

    ``psi`` may carry one extra leading axis enumerating mixture components,
    in which case ``weights`` (defaulting to ones) multiply the components.
    """
    keep = list(keep)
    if weights is None:
        psi = psi[None]
        weights = np.ones(1)
    n = psi.ndim - 1
    traced = [m for m in range(n) if m not in keep]
    x = np.transpose(psi, [0] + [m + 1 for m in keep] + [m + 1 for m in traced])
    kdim = math.prod(psi.shape[m + 1] for m in keep)
    x = x.reshape(psi.shape[0], kdim, -1)
    x = x * np.sqrt(np.asarray(weights, dtype=float))[:, None, None]
    x = np.moveaxis(x, 0, 1).reshape(kdim, -1)
    return x @ x.conj().T


def number_operator(dims) -> Operator:
    dims = as_dims(dims)
    grids = np.meshgrid(*[np.arange(d) for d in dims.dims], indexing="ij")
    total = sum(grids).reshape(-1)
    return Operator(dims, np.diag(total.astype(complex)))


def mean_photon(rho: DensityMatrix) -> float:
    return float(np.real(np.trace(rho.mat @ number_operator(rho.dims).mat)))


def parity_operator(dims) -> Operator:
    dims = as_dims(dims)
    n = np.diag(number_operator(dims).mat).real.astype(int)
    return Operator(dims, np.diag(np.where(n % 2 == 0, 1.0, -1.0).astype(complex)))


def parity_conjugate(rho: DensityMatrix) -> DensityMatrix:
    """Apply the phase-space inversion ``V = (-1)^N`` as ``V rho V^dagger``."""
    v = np.diag(parity_operator(rho.dims).mat).real
    return DensityMatrix(rho.dims, rho.mat * np.outer(v, v), meta=dict(rho.meta))


def psd_factor(rho: DensityMatrix | np.ndarray, cutoff: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Decompose ``rho = sum_k w_k |v_k><v_k|`` with ``w_k > cutoff``.

    Returns ``(w, vecs)`` where ``vecs[k]`` is the k-th vector. Diagonal
    matrices skip the eigensolve. Eigenvalues in ``[-PSD_TOL, 0)`` are
    clamped away; anything more negative is an error.
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    n = mat.shape[0]
    off = mat - np.diag(np.diag(mat))
    if not np.any(off):
        w = np.diag(mat).real.copy()
        vecs = np.eye(n, dtype=complex)
    else:
        w, v = jacobi_eigh(mat)
        vecs = v.T
    if w.size and w.min() < -PSD_TOL:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3e})")
    keep = w > cutoff
    return w[keep], vecs[keep]

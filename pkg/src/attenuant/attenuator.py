"""General attenuator channels and their algebra.

The channel mixes the input with a fixed environment state on a beam
splitter and traces the environment out. Every simulation here goes through
pure components: both the input and the environment are factorised into
weighted kets, the beam splitter acts on each product ket, and the reduced
state is re-assembled. Because the beam splitter conserves photon number the
result is exact once the output cutoff equals the sum of the input cutoffs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from attenuant.beamsplitter import _check_lambda, bs_apply_tensor
from attenuant.fock import (
    DensityMatrix,
    DimensionError,
    ModeDims,
    fock_dm,
    pad,
    parity_conjugate,
    psd_factor,
    reduced_from_tensor,
    thermal_state,
)

ETA_GUARD = 1e-14


@dataclass(frozen=True)
class ChannelSpec:
    lam: float
    env: DensityMatrix
    tail_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))
        if self.env.dims.n_modes != 1:
            raise DimensionError("environment must be a single mode")

    @property
    def env_cutoff(self) -> int:
        return self.env.dims.dims[0]

    def out_cutoff(self, in_cutoff: int) -> int:
        return in_cutoff + self.env_cutoff


@dataclass(frozen=True)
class CascadeSpec:
    lams: tuple[float, ...]
    joint_env: DensityMatrix
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        lams = tuple(_check_lambda(l) for l in self.lams)
        if self.joint_env.dims.n_modes != len(lams):
            raise DimensionError(f"{len(lams)} beam splitters need a {len(lams)}-mode environment")
        object.__setattr__(self, "lams", lams)


def pure_loss(lam: float) -> ChannelSpec:
    return ChannelSpec(lam, fock_dm(0))


def thermal_attenuator(lam: float, nu: float, cutoff: int | None = None) -> ChannelSpec:
    env = thermal_state(nu, cutoff)
    return ChannelSpec(lam, env, tail_mass=env.meta.get("tail_mass", 0.0))


def _components(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    w, vecs = psd_factor(rho)
    return w, vecs.reshape((len(w),) + rho.dims.dims)


def _joint_components(rho: DensityMatrix, sigma: DensityMatrix):
    """Weighted product kets of ``rho (x) sigma`` with the environment last."""
    wr, vr = _components(rho)
    ws, vs = _components(sigma)
    weights = np.outer(wr, ws).reshape(-1)
    kets = np.einsum("i...,jz->ij...z", vr, vs.reshape(len(ws), -1))
    kets = kets.reshape((len(weights),) + rho.dims.dims + sigma.dims.dims)
    return weights, kets


def _dilate(spec: ChannelSpec, rho: DensityMatrix, mode: int):
    if not 0 <= mode < rho.dims.n_modes:
        raise DimensionError(f"mode {mode} out of range for {rho.dims.n_modes} modes")
    weights, kets = _joint_components(rho, spec.env)
    out = bs_apply_tensor(kets, spec.lam, axes=(1 + mode, -1))
    return weights, out


def apply_bipartite(spec: ChannelSpec, rho: DensityMatrix, acted_mode: int) -> DensityMatrix:
    """Act with the channel on one mode of a multi-mode state, identity elsewhere.

    The acted mode's cutoff grows to ``cutoff + env cutoff``.
    """
    if spec.lam == 1.0:
        return rho
    weights, out = _dilate(spec, rho, acted_mode)
    n = rho.dims.n_modes
    mat = reduced_from_tensor(out, range(n), weights)
    return DensityMatrix(ModeDims(out.shape[1 : n + 1]), mat, meta={"tail_mass": spec.tail_mass})


def apply(spec: ChannelSpec, rho: DensityMatrix) -> DensityMatrix:
    if rho.dims.n_modes != 1:
        raise DimensionError("apply acts on single-mode states; use apply_bipartite")
    return apply_bipartite(spec, rho, 0)


def weak_complementary(spec: ChannelSpec, rho: DensityMatrix) -> DensityMatrix:
    """Same dilation as :func:`apply`, keeping the environment output instead."""
    if rho.dims.n_modes != 1:
        raise DimensionError("weak_complementary acts on single-mode states")
    weights, out = _dilate(spec, rho, 0)
    mat = reduced_from_tensor(out, [1], weights)
    return DensityMatrix(ModeDims((out.shape[2],)), mat, meta={"tail_mass": spec.tail_mass})


def complementary_identity_rhs(spec: ChannelSpec, rho: DensityMatrix) -> DensityMatrix:
    """``V . Phi_{1-lam, V sigma V} (rho)``, which equals the weak complementary."""
    flipped = ChannelSpec(1.0 - spec.lam, parity_conjugate(spec.env), spec.tail_mass)
    out = apply(flipped, rho)
    if out.dims.dims[0] != rho.dims.dims[0] + spec.env_cutoff:
        out = pad(out, rho.dims.dims[0] + spec.env_cutoff)
    return parity_conjugate(out)


def max_abs_diff(a: DensityMatrix | np.ndarray, b: DensityMatrix | np.ndarray) -> float:
    """Entrywise max difference after zero-padding both to a common cutoff."""
    a = a if isinstance(a, DensityMatrix) else DensityMatrix(ModeDims((len(a),)), a)
    b = b if isinstance(b, DensityMatrix) else DensityMatrix(ModeDims((len(b),)), b)
    if a.dims.n_modes != b.dims.n_modes:
        raise DimensionError("mode counts differ")
    common = ModeDims(tuple(max(x, y) for x, y in zip(a.dims, b.dims)))
    return float(np.max(np.abs(pad(a, common).mat - pad(b, common).mat)))


def default_probes(cutoff: int = 3) -> list[DensityMatrix]:
    """Fixed probe inputs: Fock states, a superposition with a complex phase and a mixed state."""
    probes = [fock_dm(k, cutoff) for k in range(cutoff)]
    v = np.array([1.0, 0.5 - 0.7j, 0.3j] + [0.2] * (cutoff - 3))[:cutoff]
    v = v / np.linalg.norm(v)
    probes.append(DensityMatrix(ModeDims((cutoff,)), np.outer(v, v.conj())))
    w = np.linspace(1.0, 2.0, cutoff)
    mixed = 0.6 * np.diag(w / w.sum()) + 0.4 * np.outer(v, v.conj())
    probes.append(DensityMatrix(ModeDims((cutoff,)), mixed))
    return probes


def composed_environment(lam: float, sigma: DensityMatrix, mu: float, omega: DensityMatrix) -> DensityMatrix:
    """Environment of the single attenuator equal to ``Phi_{lam,sigma} . Phi_{mu,omega}``."""
    denom = 1.0 - lam * mu
    if denom < ETA_GUARD:
        # lam == mu == 1: both channels are the identity and any environment works
        return sigma
    return apply(ChannelSpec(lam * (1.0 - mu) / denom, sigma), omega)


def compose_check(
    lam: float,
    sigma: DensityMatrix,
    mu: float,
    omega: DensityMatrix,
    probes: Sequence[DensityMatrix] | None = None,
) -> float:
    """Max entrywise gap between the two-step channel and its single-attenuator form."""
    lam, mu = _check_lambda(lam), _check_lambda(mu)
    probes = default_probes() if probes is None else probes
    tau = composed_environment(lam, sigma, mu, omega)
    first, second = ChannelSpec(mu, omega), ChannelSpec(lam, sigma)
    single = ChannelSpec(lam * mu, tau)
    worst = 0.0
    for rho in probes:
        lhs = apply(second, apply(first, rho))
        rhs = apply(single, rho)
        worst = max(worst, max_abs_diff(lhs, rhs))
    return worst


# -- cascades ----------------------------------------------------------------


def eta_chain(lams: Sequence[float]) -> list[float]:
    """Transmissivities ``eta_2 .. eta_k`` of the equivalent star network."""
    lams = [_check_lambda(l) for l in lams]
    etas = []
    prefix = lams[0]
    for lam in lams[1:]:
        denom = 1.0 - prefix * lam
        if abs(denom) < ETA_GUARD:
            etas.append(lam)
        else:
            etas.append(lam * (1.0 - prefix) / denom)
        prefix *= lam
    return etas


def _max_photons(kets: np.ndarray, tol: float = 1e-15) -> int:
    shape = kets.shape[1:]
    grids = np.meshgrid(*[np.arange(d) for d in shape], indexing="ij")
    total = sum(grids)
    mask = np.any(np.abs(kets) > tol, axis=0)
    return int(total[mask].max()) if mask.any() else 0


def _pad_tensor(x: np.ndarray, cutoff: int) -> np.ndarray:
    out = np.zeros((x.shape[0],) + (cutoff,) * (x.ndim - 1), dtype=complex)
    out[(slice(None),) + tuple(slice(0, d) for d in x.shape[1:])] = x
    return out


def build_omega(sigma: DensityMatrix, lams: Sequence[float]) -> DensityMatrix:
    """Joint environment making the cascade of ``lams`` equal ``Phi_{prod lams, sigma}``."""
    if len(lams) < 2:
        raise ValueError("a cascade needs at least two beam splitters")
    if math.prod(lams) <= 0.0:
        raise ValueError("the product of the transmissivities must be positive")
    etas = eta_chain(lams)
    k = len(lams)
    d = sigma.dims.dims[0]
    w, vecs = _components(sigma)
    kets = np.zeros((len(w),) + (d,) * k, dtype=complex)
    kets[(slice(None), slice(None)) + (0,) * (k - 1)] = vecs
    for i in range(k - 1, 0, -1):
        kets = bs_apply_tensor(kets, etas[i - 1], axes=(1, 1 + i), out_cutoff=d, inverse=True)
    mat = reduced_from_tensor(kets, range(k), w)
    return DensityMatrix(ModeDims((d,) * k), mat)


def cascade_apply(spec: CascadeSpec, rho: DensityMatrix) -> DensityMatrix:
    """Send a single-mode state through the beam-splitter chain with joint environment."""
    if rho.dims.n_modes != 1:
        raise DimensionError("cascade input must be a single mode")
    weights, kets = _joint_components(rho, spec.joint_env)
    cutoff = _max_photons(kets) + 1
    kets = _pad_tensor(kets, max(cutoff, max(kets.shape[1:])))
    for i, lam in enumerate(spec.lams):
        kets = bs_apply_tensor(kets, lam, axes=(1, 2 + i), out_cutoff=kets.shape[1])
    mat = reduced_from_tensor(kets, [0], weights)
    return DensityMatrix(ModeDims((kets.shape[1],)), mat)

import math

import numpy as np
import pytest
from conftest import dense_beamsplitter, random_state
from hypothesis import given, settings
from hypothesis import strategies as st

from attenuant import attenuator as att
from attenuant.fock import DimensionError, ModeDims, fock_dm, pad, tensor, thermal_state

inner = st.floats(0.05, 0.95)


def _dense_channel(lam, rho, sigma, keep_env=False):
    d = rho.dims.dims[0] + sigma.dims.dims[0]
    u = dense_beamsplitter(lam, d)
    big = u @ np.kron(pad(rho, d).mat, pad(sigma, d).mat) @ u.conj().T
    t = big.reshape(d, d, d, d)
    return np.einsum("jijk->ik", t) if keep_env else np.einsum("ijkj->ik", t)


@pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 0.9, 1.0])
def test_apply_matches_dense_simulation(lam, rng):
    rho, sigma = random_state(rng, 3), random_state(rng, 4, rank=2)
    out = att.apply(att.ChannelSpec(lam, sigma), rho)
    assert att.max_abs_diff(out, _dense_channel(lam, rho, sigma)) < 1e-12
    wc = att.weak_complementary(att.ChannelSpec(lam, sigma), rho)
    assert att.max_abs_diff(wc, _dense_channel(lam, rho, sigma, keep_env=True)) < 1e-12


def test_output_cutoff_is_sum_of_inputs():
    out = att.apply(att.ChannelSpec(0.3, fock_dm(2, 4)), fock_dm(1, 3))
    assert out.dims.dims == (7,)


def test_pure_loss_on_single_photon():
    out = att.apply(att.pure_loss(0.3), fock_dm(1))
    assert np.allclose(np.diag(out.mat).real[:2], [0.7, 0.3])


def test_bipartite_acts_on_one_mode(rng):
    a, b = random_state(rng, 2), random_state(rng, 3)
    spec = att.ChannelSpec(0.4, fock_dm(1))
    joint = att.apply_bipartite(spec, tensor(a, b), 1)
    assert np.allclose(joint.mat, tensor(a, att.apply(spec, b)).mat)
    with pytest.raises(DimensionError):
        att.apply_bipartite(spec, tensor(a, b), 2)


@settings(max_examples=15, deadline=None)
@given(inner, inner, st.integers(0, 1000))
def test_composition_rule(lam, mu, seed):
    rng = np.random.default_rng(seed)
    assert att.compose_check(lam, random_state(rng, 3), mu, random_state(rng, 3)) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(0, 1000))
def test_weak_complementary_identity(lam, seed):
    rng = np.random.default_rng(seed)
    spec = att.ChannelSpec(lam, random_state(rng, 3))
    rho = random_state(rng, 3)
    lhs = att.weak_complementary(spec, rho)
    assert att.max_abs_diff(lhs, att.complementary_identity_rhs(spec, rho)) < 1e-10


@pytest.mark.parametrize("nu", [0.05, 0.7, 2.0])
def test_thermal_stability(nu):
    tau = thermal_state(nu)
    for eta in (0.1, 0.5, 0.95):
        assert att.max_abs_diff(att.apply(att.ChannelSpec(eta, tau), tau), tau) < 1e-8


def test_eta_chain_values_and_guard():
    etas = att.eta_chain([0.5, 0.8, 0.6])
    assert math.isclose(etas[0], 0.8 * 0.5 / 0.6)
    assert math.isclose(etas[1], 0.6 * (1 - 0.4) / (1 - 0.24))
    assert att.eta_chain([1.0, 1.0, 0.3]) == [1.0, 0.0]


@pytest.mark.parametrize("k", [2, 3])
def test_cascade_equals_single_attenuator(k, rng):
    lams = tuple(rng.uniform(0.2, 0.9, size=k))
    sigma = random_state(rng, 4, rank=2)
    spec = att.CascadeSpec(lams, att.build_omega(sigma, lams))
    single = att.ChannelSpec(math.prod(lams), sigma)
    for rho in att.default_probes():
        assert att.max_abs_diff(att.cascade_apply(spec, rho), att.apply(single, rho)) < 1e-10


def test_cascade_spec_checks_modes():
    with pytest.raises(DimensionError):
        att.CascadeSpec((0.5, 0.5), fock_dm(0))
    with pytest.raises(ValueError):
        att.build_omega(fock_dm(1), [0.5])


def test_channel_spec_validation():
    with pytest.raises(ValueError):
        att.ChannelSpec(1.5, fock_dm(0))
    assert att.thermal_attenuator(0.5, 0.3).tail_mass <= 1e-12
    assert att.ChannelSpec(0.5, fock_dm(0, 3)).out_cutoff(4) == 7
    assert ModeDims((2,)).n_modes == 1

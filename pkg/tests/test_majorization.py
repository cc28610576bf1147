import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attenuant import majorization as maj
from attenuant.entropy import shannon


def _exact_q(n, lam):
    """Rational-arithmetic evaluation of the q spectrum, as an independent oracle."""
    lam = Fraction(lam)
    out = []
    for l in range(n + 2):
        shift = (n + 1) * (1 - lam) - l
        val = Fraction(math.comb(n + 1, l)) * (1 - lam) ** l * lam ** (n - l) * (lam * l + shift**2)
        out.append(val / (2 * (n + 1) * (1 - lam)))
    return out


def test_small_case_values():
    assert np.allclose(maj.q_dist(2, 0.5).weights, [0.1875, 0.1875, 0.3125, 0.3125], atol=1e-15)
    assert np.allclose(maj.p_dist(2, 0.5).weights, [0.3125, 0.3125, 0.1875, 0.1875], atol=1e-15)


@pytest.mark.parametrize("n", [3, 12, 41, 60])
def test_q_against_rational_oracle(n):
    lam = Fraction(1, n + 1) + Fraction(1, 7 * n * (n + 1))
    ref = [float(v) for v in _exact_q(n, lam)]
    assert np.allclose(maj.q_dist(n, float(lam)).weights, ref, rtol=1e-11, atol=1e-300)


@pytest.mark.parametrize("n", [1, 2, 10, 100, 200])
def test_normalised(n):
    for lam in np.linspace(0.01, 0.99, 7):
        assert abs(maj.p_dist(n, lam).weights.sum() - 1) < 1e-12
        assert abs(maj.q_dist(n, lam).weights.sum() - 1) < 1e-12


def test_boundary_lambda_rejected():
    with pytest.raises(ValueError):
        maj.p_dist(3, 0.0)
    with pytest.raises(ValueError):
        maj.q_dist(3, 1.0)


def test_majorizes_basics():
    r = np.array([0.1, 0.2, 0.7])
    assert maj.majorizes(r, r)
    assert maj.majorizes(r, np.full(3, 1 / 3))
    assert not maj.majorizes(np.full(3, 1 / 3), r)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60), st.floats(0, 1))
def test_majorisation_and_schur_concavity(n, t):
    lam = 1 / (n + 1) + t * (1 / n - 1 / (n + 1))
    p, q = maj.p_dist(n, lam), maj.q_dist(n, lam)
    assert maj.majorizes(q, p)
    assert shannon(p) >= shannon(q) - 1e-12
    rep = maj.bound_chain(n, lam)
    assert rep.chain_holds()


def test_patterns():
    assert maj.verify_p_pattern(6, 0.15) == maj.PATTERN_SWAP_LAST_PAIRS
    assert maj.verify_p_pattern(2, 0.45) in (1, 2, 3)
    with pytest.raises(ValueError):
        maj.elementwise_compare(3, 0.3)


def test_k_gap_constants():
    assert abs(maj.k_gap_floor(3) - 4 / 81) < 1e-15
    rep = maj.bound_chain(3, 1 / 3)
    assert abs(rep.k_gap - 4 / 81) < 1e-12
    assert abs(rep.certified - 32 / (6561 * math.log(2))) < 1e-12
    vals = [maj.k_gap_floor(n) for n in range(3, 300)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - 1 / (4 * math.e)) < 1e-3
    with pytest.raises(ValueError):
        maj.k_gap_floor(2)


@pytest.mark.parametrize("eps", [0.01, 0.05, 0.1, 0.16])
def test_k_gap_n2(eps):
    assert abs(maj.bound_chain(2, 0.5 - eps).k_gap - (eps / 4 + 3 * eps**3)) < 1e-12


def test_thresholds():
    for n in range(2, 200):
        assert maj.lambda_plus(n) >= 1 / (n + 1)
        assert maj.lambda_plus_tilde(n) >= 1 / n
    for n in range(4, 200):
        assert maj.lambda_plus_tilde(n) <= maj.lambda_plus(n)

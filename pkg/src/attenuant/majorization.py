"""Output spectra of the Fock-environment scheme and the majorisation certificates.

``p(n, lam)`` is the spectrum of the output on ``B`` and ``q(n, lam)`` the
spectrum of the joint output on ``AB`` when half of ``(|01> + |10>)/sqrt 2``
passes through the attenuator with environment ``|n>``. The coherent
information is ``H(p) - H(q)``; the functions below check, point by point,
every ordering and inequality that the positivity argument relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from attenuant.entropy import LN2, ProbDist, kl_divergence, shannon, total_variation

SLACK = 1e-12
EXACT_BINOM_MAX_N = 40
GRID_POINTS = 50

PATTERN_SWAP_LAST_PAIRS = 1
PATTERN_MIDDLE = 2
PATTERN_LOW_FIRST = 3


@dataclass(frozen=True)
class SchemeDist:
    n: int
    lam: float
    dist: ProbDist

    @property
    def weights(self) -> np.ndarray:
        return self.dist.weights


def _check_open(lam: float) -> float:
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie strictly between 0 and 1, got {lam}")
    return lam


def _binomial_weights(n: int, lam: float) -> np.ndarray:
    """``C(n+1, l) (1-lam)^l lam^(n-l)`` for ``l = 0 .. n+1``."""
    l = np.arange(n + 2)
    if n <= EXACT_BINOM_MAX_N:
        binom = np.array([math.comb(n + 1, k) for k in l], dtype=float)
        return binom * (1.0 - lam) ** l * lam ** (n - l).astype(float)
    log_binom = np.array([math.lgamma(n + 2) - math.lgamma(k + 1) - math.lgamma(n + 2 - k) for k in l])
    return np.exp(log_binom + l * math.log1p(-lam) + (n - l) * math.log(lam))


def _spectrum(n: int, lam: float, which: str) -> SchemeDist:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lam = _check_open(lam)
    l = np.arange(n + 2)
    shift = (n + 1) * (1.0 - lam) - l
    poly = ((1.0 - lam) * (n - l + 1) if which == "p" else lam * l) + shift**2
    w = _binomial_weights(n, lam) * poly / (2.0 * (n + 1) * (1.0 - lam))
    return SchemeDist(n, lam, ProbDist(w))


def p_dist(n: int, lam: float) -> SchemeDist:
    """Spectrum of the output on ``B`` (it is diagonal in the Fock basis)."""
    return _spectrum(n, lam, "p")


def q_dist(n: int, lam: float) -> SchemeDist:
    """Spectrum of the joint output on ``AB``."""
    return _spectrum(n, lam, "q")


def majorizes(s, r, slack: float = SLACK) -> bool:
    """True iff ``r`` is majorised by ``s``: ascending partial sums of ``r`` dominate those of ``s``."""
    r = np.sort(np.asarray(getattr(r, "weights", r), dtype=float))
    s = np.sort(np.asarray(getattr(s, "weights", s), dtype=float))
    n = max(len(r), len(s))
    r = np.sort(np.pad(r, (0, n - len(r))))
    s = np.sort(np.pad(s, (0, n - len(s))))
    return bool(np.all(np.cumsum(r) >= np.cumsum(s) - slack))


def majorization_slack(s, r) -> float:
    """Smallest gap ``sum r_up - sum s_up`` over all prefixes (negative means violated)."""
    r = np.sort(np.asarray(getattr(r, "weights", r), dtype=float))
    s = np.sort(np.asarray(getattr(s, "weights", s), dtype=float))
    return float(np.min(np.cumsum(r) - np.cumsum(s)))


# -- orderings ------------------------------------------------------------------


def _is_ascending(x: np.ndarray, slack: float = SLACK) -> bool:
    return bool(np.all(np.diff(x) >= -slack))


def verify_q_sorted(n: int, lam: float) -> bool:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return _is_ascending(q_dist(n, lam).weights)


def p_orderings(n: int) -> dict[int, list[int]]:
    """Candidate ascending orderings of ``p`` as index lists, keyed by pattern id."""
    head = list(range(n - 2)) if n >= 3 else []
    return {
        PATTERN_SWAP_LAST_PAIRS: head + [n, n + 1, n - 2, n - 1],
        PATTERN_MIDDLE: head + [n, n - 2, n + 1, n - 1],
        PATTERN_LOW_FIRST: head + [n - 2, n, n + 1, n - 1],
    }


class PatternFailure(AssertionError):
    """No candidate ordering sorts ``p``."""


def verify_p_pattern(n: int, lam: float) -> int:
    """Id of the first candidate ordering that sorts ``p(n, lam)`` ascending."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    p = p_dist(n, lam).weights
    for pid, order in p_orderings(n).items():
        if _is_ascending(p[order]):
            return pid
    raise PatternFailure(f"no ordering sorts p at n={n}, lam={lam!r}: {p.tolist()}")


def max_entries_hold(n: int, lam: float) -> bool:
    """``p_{n-1}`` is the largest entry of ``p`` and ``q_{n+1}`` the largest of ``q``."""
    p, q = p_dist(n, lam).weights, q_dist(n, lam).weights
    return bool(p[n - 1] >= p.max() - SLACK and q[n + 1] >= q.max() - SLACK)


def elementwise_compare(n: int, lam: float) -> bool:
    """Sorted ``p`` dominates sorted ``q`` at every position but the last, where it flips."""
    if n < 4:
        raise ValueError(f"requires n >= 4, got {n}")
    pu = np.sort(p_dist(n, lam).weights)
    qu = np.sort(q_dist(n, lam).weights)
    return bool(np.all(pu[: n + 1] >= qu[: n + 1] - SLACK) and pu[n + 1] <= qu[n + 1] + SLACK)


def low_entries_ordered(n: int, lam: float) -> bool:
    """``q_l <= p_l`` for every ``l <= n - 1``."""
    p, q = p_dist(n, lam).weights, q_dist(n, lam).weights
    return bool(np.all(q[:n] <= p[:n] + SLACK))


# -- bound chain -----------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n: int
    lam: float
    Hp: float
    Hq: float
    icoh: float
    kl_sorted: float
    tv_term: float
    linf_term: float
    k_gap: float
    certified: float
    eps: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def chain_holds(self, slack: float = SLACK) -> bool:
        return (
            self.icoh >= self.kl_sorted - slack
            and self.kl_sorted >= self.tv_term - slack
            and self.tv_term >= self.linf_term - slack
        )


def bound_chain(n: int, lam: float, eps: float | None = None) -> BoundReport:
    """Each step from the coherent information down to the certified constant."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    p, q = p_dist(n, lam).weights, q_dist(n, lam).weights
    pu, qu = np.sort(p), np.sort(q)
    hp, hq = shannon(p), shannon(q)
    tv = total_variation(qu, pu)
    k_gap = float(q[n + 1] - p[n - 1])
    return BoundReport(
        n=n,
        lam=float(lam),
        Hp=hp,
        Hq=hq,
        icoh=hp - hq,
        kl_sorted=kl_divergence(qu, pu),
        tv_term=tv**2 / (2.0 * LN2),
        linf_term=(2.0 / LN2) * float(qu[-1] - pu[-1]) ** 2,
        k_gap=k_gap,
        certified=(2.0 / LN2) * k_gap**2,
        eps=eps,
    )


def k_gap_floor(n: int) -> float:
    """Lower bound on ``q_{n+1} - p_{n-1}`` valid for ``0 <= lam <= 1/n``."""
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    return (n + 1) * (n - 2) / (4.0 * n * (n - 1)) * (1.0 - 1.0 / n) ** n


def k_gap_two(eps: float) -> float:
    """Exact ``q_3 - p_1`` at ``n = 2`` and ``lam = 1/2 - eps``."""
    return eps / 4.0 + 3.0 * eps**3


ASYMPTOTIC_CERTIFIED = 1.0 / (8.0 * math.e**2 * LN2)


# -- thresholds and grids -----------------------------------------------------------


def lambda_plus(n: float) -> float:
    return 3.0 / (n + 2) * (1.0 - math.sqrt((n - 1) / (3.0 * (n + 1))))


def lambda_minus(n: float) -> float:
    return 2.0 / (n + 2) * (1.0 - math.sqrt(n / (2.0 * (n + 1))))


def lambda_plus_tilde(n: float) -> float:
    c3, c2 = 3.0 ** (1 / 3), 2.0 ** (1 / 3)
    return c3 / (c2 * n + c3 - c2)


@dataclass(frozen=True)
class ThresholdFns:
    lambda_plus: object = staticmethod(lambda_plus)
    lambda_minus: object = staticmethod(lambda_minus)
    lambda_plus_tilde: object = staticmethod(lambda_plus_tilde)


def lambda_grid(n: int, points: int = GRID_POINTS, hi: float | None = None) -> np.ndarray:
    """Uniform grid on ``[1/(n+1), hi]`` (default ``hi = 1/n``), endpoints included."""
    hi = 1.0 / n if hi is None else hi
    return np.linspace(1.0 / (n + 1), hi, points)


@dataclass
class SweepReport:
    name: str
    points: int = 0
    violations: list = field(default_factory=list)
    worst: float = math.inf

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, ok: bool, where: tuple, margin: float | None = None) -> None:
        self.points += 1
        if margin is not None:
            self.worst = min(self.worst, margin)
        if not ok:
            self.violations.append(where)


def sweep_majorization(n_max: int = 200, points: int = GRID_POINTS, n_min: int = 2) -> dict[str, SweepReport]:
    """Run every ordering, majorisation and bound-chain certificate over the interval grids."""
    reports = {
        k: SweepReport(k)
        for k in (
            "majorization",
            "q_sorted",
            "p_pattern",
            "max_entries",
            "elementwise",
            "low_entries",
            "bound_chain",
            "k_gap_floor",
        )
    }
    for n in range(n_min, n_max + 1):
        for lam in lambda_grid(n, points):
            p, q = p_dist(n, lam), q_dist(n, lam)
            slack = majorization_slack(q, p)
            reports["majorization"].record(slack >= -SLACK, (n, lam), slack)
            try:
                pid = verify_p_pattern(n, lam)
                ok = n < 4 or pid == PATTERN_SWAP_LAST_PAIRS
            except PatternFailure:
                ok = False
            reports["p_pattern"].record(ok, (n, lam))
            reports["max_entries"].record(max_entries_hold(n, lam), (n, lam))
            if n >= 4:
                reports["elementwise"].record(elementwise_compare(n, lam), (n, lam))
            rep = bound_chain(n, lam)
            reports["bound_chain"].record(rep.chain_holds(), (n, lam), rep.icoh - rep.kl_sorted)
            if n >= 3:
                margin = rep.k_gap - k_gap_floor(n)
                reports["k_gap_floor"].record(margin >= -SLACK, (n, lam), margin)
        for lam in lambda_grid(n, points, hi=lambda_plus(n)):
            reports["q_sorted"].record(verify_q_sorted(n, lam), (n, lam))
        for lam in np.linspace(1e-3, min(2.0 / (n + 1), 1.0 - 1e-3), points):
            reports["low_entries"].record(low_entries_ordered(n, lam), (n, lam))
    return reports

"""Inter-contact time distribution of a Home-MEG edge.

IC is the number of steps between two consecutive contacts. Conditioned on
a contact, the edge is in Home with probability p*alpha/(p*alpha + q*gamma);
from there

    P_1H = (1-q)alpha + q gamma,          P_1N = (1-p)gamma + p alpha
    P_iH = q(1-gamma) P_(i-1)N + (1-q)(1-alpha) P_(i-1)H
    P_iN = (1-p)(1-gamma) P_(i-1)N + p(1-alpha) P_(i-1)H

and P(IC = k) = P(H|contact) P_kH + P(NH|contact) P_kN. Equivalently, with
M the 2x2 "no contact" transition matrix over (H, N), P(IC > k) = w M^k 1.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import settings
from .edge_chain import connected_mask, simulate_edge_trajectory
from .errors import InsufficientDataError, NoContactsError
from .params import HomeMegParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContactCondProbs:
    """Location of the pair at a contact instant."""

    p_h_given_contact: float
    p_nh_given_contact: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_h_given_contact, self.p_nh_given_contact])


@dataclass
class IcDistribution:
    """pmf[k-1] = P(IC = k) for k = 1..horizon; ccdf[k] = P(IC > k) for k = 0..horizon."""

    pmf: np.ndarray = field(repr=False)
    ccdf: np.ndarray = field(repr=False)
    horizon: int
    tail_mass: float
    empirical: bool = False
    samples: Optional[int] = None

    @classmethod
    def from_pmf(
        cls, pmf: np.ndarray, empirical: bool = False, samples: Optional[int] = None
    ) -> "IcDistribution":
        pmf = np.asarray(pmf, dtype=float)
        ccdf = np.empty(pmf.size + 1)
        ccdf[0] = 1.0
        ccdf[1:] = 1.0 - np.cumsum(pmf)
        tail = float(max(ccdf[-1], 0.0))
        return cls(pmf=pmf, ccdf=ccdf, horizon=int(pmf.size), tail_mass=tail, empirical=empirical, samples=samples)

    def probability(self, k: int) -> float:
        """P(IC = k); zero beyond the horizon."""
        if 1 <= k <= self.horizon:
            return float(self.pmf[k - 1])
        return 0.0

    def ccdf_at(self, k: int) -> float:
        """P(IC > k); the tail mass beyond the horizon."""
        if k <= 0:
            return 1.0
        return float(self.ccdf[min(k, self.horizon)])

    def mean(self) -> float:
        """Mean of the truncated distribution (exact when tail_mass is 0)."""
        ks = np.arange(1, self.horizon + 1)
        return float(np.dot(ks, self.pmf))

    def rows(self) -> Iterable[tuple[int, float, float]]:
        """(k, pmf, ccdf) for k = 1..horizon."""
        for k in range(1, self.horizon + 1):
            yield k, float(self.pmf[k - 1]), float(self.ccdf[k])


def contact_cond_probs(params: HomeMegParams) -> ContactCondProbs:
    """Bayes step: (p*alpha, q*gamma) / (p*alpha + q*gamma)."""
    home = params.p * params.alpha
    away = params.q * params.gamma
    total = home + away
    if total == 0.0:
        raise NoContactsError(params.p, params.q, params.alpha, params.gamma)
    return ContactCondProbs(p_h_given_contact=home / total, p_nh_given_contact=away / total)


def no_contact_matrix(params: HomeMegParams) -> np.ndarray:
    """One-step transitions over (H, N) restricted to 'no contact at the new step'."""
    p, q, a, g = params.p, params.q, params.alpha, params.gamma
    return np.array(
        [
            [(1 - q) * (1 - a), q * (1 - g)],
            [p * (1 - a), (1 - p) * (1 - g)],
        ]
    )


def first_contact_probs(params: HomeMegParams) -> tuple[float, float]:
    """(P_1H, P_1N): contact at the very next step from Home / Non-Home."""
    return params.q_hat, params.p_hat


def ic_pmf(
    params: HomeMegParams,
    k_max: Optional[int] = None,
    tail_epsilon: Optional[float] = None,
) -> IcDistribution:
    """Analytic pmf/ccdf up to k_max by iterating the two-term recursion.

    Stops early once the remaining tail mass drops below `tail_epsilon`
    (pass 0 to always fill k_max entries).
    """
    k_max = settings.intercontact.k_max if k_max is None else k_max
    tail_epsilon = settings.intercontact.tail_epsilon if tail_epsilon is None else tail_epsilon
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")

    w = contact_cond_probs(params)
    p, q, a, g = params.p, params.q, params.alpha, params.gamma
    stay_h, h_to_n = (1 - q) * (1 - a), q * (1 - g)
    n_to_h, stay_n = p * (1 - a), (1 - p) * (1 - g)
    p_h, p_n = first_contact_probs(params)

    pmf = np.empty(k_max)
    cumulative = 0.0
    filled = k_max
    for i in range(k_max):
        if i > 0:
            p_h, p_n = h_to_n * p_n + stay_h * p_h, stay_n * p_n + n_to_h * p_h
        mass = w.p_h_given_contact * p_h + w.p_nh_given_contact * p_n
        pmf[i] = mass
        cumulative += mass
        if tail_epsilon > 0.0 and 1.0 - cumulative < tail_epsilon:
            filled = i + 1
            break

    dist = IcDistribution.from_pmf(pmf[:filled])
    logger.debug(f"ic_pmf: horizon {dist.horizon}, tail mass {dist.tail_mass:.3e}")
    return dist


def ic_ccdf_at(params: HomeMegParams, ks: Sequence[int] | np.ndarray) -> np.ndarray:
    """P(IC > k) = w M^k 1 for each k, via matrix powers (no iteration over k)."""
    w = contact_cond_probs(params).as_array()
    m = no_contact_matrix(params)
    ones = np.ones(2)
    values = np.empty(len(ks))
    for i, k in enumerate(ks):
        k = int(k)
        if k < 0:
            raise ValueError(f"k must be non-negative, got {k}")
        values[i] = float(w @ np.linalg.matrix_power(m, k) @ ones)
    return values


def mean_intercontact(params: HomeMegParams) -> float:
    """E[IC] = sum_k P(IC > k) = w (I - M)^-1 1."""
    w = contact_cond_probs(params).as_array()
    m = no_contact_matrix(params)
    try:
        survival = np.linalg.solve(np.eye(2) - m, np.ones(2))
    except np.linalg.LinAlgError:
        return math.inf
    return float(w @ survival)


def steps_from_seconds(seconds: Sequence[float] | np.ndarray, step_seconds: float) -> np.ndarray:
    """Round seconds to whole model steps (halves round up), at least one step."""
    if step_seconds <= 0.0:
        raise ValueError(f"step_seconds must be positive, got {step_seconds}")
    ks = np.floor(np.asarray(seconds, dtype=float) / step_seconds + 0.5).astype(np.int64)
    return np.maximum(ks, 1)


def ccdf_at_seconds(
    params: HomeMegParams, seconds: Sequence[float] | np.ndarray, step_seconds: float
) -> np.ndarray:
    """Model ccdf at wall-clock times, one step lasting `step_seconds`."""
    return ic_ccdf_at(params, steps_from_seconds(seconds, step_seconds))


def intercontact_gaps(states: np.ndarray) -> np.ndarray:
    """Gaps between consecutive connected steps of one edge trajectory."""
    contact_times = np.flatnonzero(connected_mask(states))
    return np.diff(contact_times)


def empirical_ic(
    params: HomeMegParams,
    steps: int,
    rng: np.random.Generator,
    aggregate: bool = False,
    min_gaps: Optional[int] = None,
) -> IcDistribution:
    """Empirical inter-contact distribution from simulated stationary edges.

    A single edge by default; with `aggregate` the gaps of all n(n-1)/2
    independent edges, each simulated for `steps` steps, are pooled.
    """
    min_gaps = settings.intercontact.min_gaps if min_gaps is None else min_gaps
    edges = params.num_edges if aggregate else 1
    if edges < 1:
        raise ValueError(f"Aggregate mode needs n >= 2, got n={params.n}")

    gap_batches = []
    for _ in range(edges):
        states = simulate_edge_trajectory(params, steps, rng)
        gap_batches.append(intercontact_gaps(states))
    gaps = np.concatenate(gap_batches) if gap_batches else np.zeros(0, dtype=np.int64)

    if gaps.size < min_gaps:
        raise InsufficientDataError(int(gaps.size), min_gaps)

    counts = np.bincount(gaps)[1:]
    logger.info(f"Empirical inter-contact: {gaps.size} gaps over {edges} edge(s) x {steps} steps")
    return IcDistribution.from_pmf(counts / gaps.size, empirical=True, samples=int(gaps.size))


def total_variation(first: IcDistribution, second: IcDistribution, k_max: Optional[int] = None) -> float:
    """TV distance between two distributions truncated at k_max.

    Mass beyond k_max is lumped into one extra atom on each side.
    """
    k_max = max(first.horizon, second.horizon) if k_max is None else k_max
    a = np.array([first.probability(k) for k in range(1, k_max + 1)])
    b = np.array([second.probability(k) for k in range(1, k_max + 1)])
    tail_a = max(1.0 - a.sum(), 0.0)
    tail_b = max(1.0 - b.sum(), 0.0)
    return 0.5 * float(np.abs(a - b).sum() + abs(tail_a - tail_b))

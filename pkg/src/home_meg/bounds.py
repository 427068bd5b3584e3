"""Theoretical flooding bounds for Home-MEG and estimators that check them.

All logarithms are natural. Asymptotic bounds are reported as their raw
arguments (log n / log(1 + x)); the constants are unknown, so only growth
is meaningful.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .edge_chain import EdgeState, connected_mask, sample_states, stationary, step_states
from .errors import BoundPreconditionError, LambdaUndefinedError, ParameterDomainError
from .flooding import FloodRun
from .params import HomeMegParams, home_probability

logger = logging.getLogger(__name__)

COROLLARY_RTOL = 1e-9
THM2_INEQUALITY = "ceil(5 Lambda / n) <= min(1/alpha, 1/(4q))"


def lambda_of(params: HomeMegParams) -> float:
    """Lambda = 4(p+q)/(p*alpha); 4/Lambda is the stationary mass of HC."""
    p_alpha = params.p * params.alpha
    if p_alpha == 0.0:
        raise LambdaUndefinedError(params.p, params.alpha)
    return 4.0 * (params.p + params.q) / p_alpha


def _inverse(x: float) -> float:
    return math.inf if x == 0.0 else 1.0 / x


def thm2_cap(params: HomeMegParams) -> float:
    """min(1/alpha, 1/(4q)), the largest admissible window length."""
    return min(_inverse(params.alpha), _inverse(4.0 * params.q))


def _log_ratio(n: int, x: float) -> float:
    """log n / log(1 + x), +inf when x = 0 and n > 1."""
    if n <= 1:
        return 0.0
    denominator = math.log1p(x)
    return math.inf if denominator == 0.0 else math.log(n) / denominator


def corollary_eps(params: HomeMegParams, rtol: float = COROLLARY_RTOL) -> Optional[float]:
    """eps if params are (alpha, gamma, p, q) = (n^eps/n, 1/n^2, 1/n^(1+eps), 1/n), else None."""
    n = params.n
    if n < 2 or params.alpha <= 0.0:
        return None
    eps = 1.0 + math.log(params.alpha) / math.log(n)
    if not 0.0 < eps < 1.0:
        return None
    expected = {
        "alpha": n ** eps / n,
        "gamma": 1.0 / n ** 2,
        "p": 1.0 / n ** (1.0 + eps),
        "q": 1.0 / n,
    }
    for name, value in expected.items():
        if not math.isclose(getattr(params, name), value, rel_tol=rtol, abs_tol=0.0):
            return None
    return eps


@dataclass(frozen=True)
class BoundReport:
    """Bound arguments and regime flags for one parameter set."""

    n: int
    p_hat: float
    q_hat: float
    lambda_: float
    thm1_upper_arg: float
    thm1_lower_arg: float
    thm2_arg: float
    thm2_applicable: bool
    corollary_regime: bool
    eps: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p_hat": self.p_hat,
            "q_hat": self.q_hat,
            "lambda": self.lambda_,
            "thm1_upper_arg": self.thm1_upper_arg,
            "thm1_lower_arg": self.thm1_lower_arg,
            "thm2_arg": self.thm2_arg,
            "thm2_applicable": self.thm2_applicable,
            "corollary_regime": self.corollary_regime,
            "eps": self.eps,
        }


def bound_report(params: HomeMegParams) -> BoundReport:
    """Compute every bound argument at params.n."""
    lam = lambda_of(params)
    n = params.n
    eps = corollary_eps(params)
    return BoundReport(
        n=n,
        p_hat=params.p_hat,
        q_hat=params.q_hat,
        lambda_=lam,
        thm1_upper_arg=_log_ratio(n, n * params.p_hat),
        thm1_lower_arg=_log_ratio(n, n * params.q_hat),
        thm2_arg=_log_ratio(n, n / lam),
        thm2_applicable=math.ceil(5.0 * lam / n) <= thm2_cap(params),
        corollary_regime=eps is not None,
        eps=eps,
    )


@dataclass
class PhaseSchedule:
    """Period lengths of the expansion argument.

    lengths[i] is L_(i+1) and starts[i] its first step; L_1 is the
    bootstrap period. The last period is the first tau with
    2 K^(tau-1) log n >= n/16.
    """

    n: int
    lambda_: float
    K: float
    lengths: list[int]
    starts: list[int]
    phase3_len: int

    @property
    def bootstrap_len(self) -> int:
        return self.lengths[0]

    @property
    def periods(self) -> int:
        return len(self.lengths)

    @property
    def phase2_periods(self) -> int:
        """ceil(log n / log K), the Phase 2 period count of the argument."""
        return max(1, math.ceil(math.log(self.n) / math.log(self.K)))

    @property
    def total_steps(self) -> int:
        """Predicted completion scale: all periods plus the Phase 3 window."""
        return self.starts[-1] + self.lengths[-1] + self.phase3_len

    def target(self, tau: int) -> float:
        """Informed-set size 2 K^(tau-1) log n the argument reaches by period tau."""
        return 2.0 * self.K ** (tau - 1) * math.log(self.n)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lambda_,
            "K": self.K,
            "lengths": self.lengths,
            "starts": self.starts,
            "phase2_periods": self.phase2_periods,
            "phase3_len": self.phase3_len,
            "total_steps": self.total_steps,
        }


def phase3_length(params: HomeMegParams, n: Optional[int] = None) -> int:
    """ceil(32 Lambda log n / n)."""
    n = params.n if n is None else n
    return math.ceil(32.0 * lambda_of(params) * math.log(n) / n)


def phase_schedule(params: HomeMegParams, n: Optional[int] = None) -> PhaseSchedule:
    """Build K, L_tau and t_tau; raises when the schedule's hypothesis fails."""
    n = params.n if n is None else n
    if n < 2:
        raise ParameterDomainError("n", n, "phase schedule needs n >= 2")
    lam = lambda_of(params)
    window = math.ceil(5.0 * lam / n)
    cap = thm2_cap(params)
    if window > cap:
        raise BoundPreconditionError(THM2_INEQUALITY, window, cap)

    log_n = math.log(n)
    k = 2.0 * max(1.0, n / (5.0 * lam))
    lengths = [math.ceil(4.0 * lam * log_n / n)]
    starts = [0]
    tau = 1
    while 2.0 * k ** (tau - 1) * log_n < n / 16.0:
        tau += 1
        starts.append(starts[-1] + lengths[-1])
        lengths.append(1 if 2.0 * k ** (tau - 2) * log_n >= lam else window)

    schedule = PhaseSchedule(
        n=n, lambda_=lam, K=k, lengths=lengths, starts=starts, phase3_len=phase3_length(params, n)
    )
    logger.debug(f"Phase schedule n={n}: K={k:.3f}, {schedule.periods} periods, total {schedule.total_steps}")
    return schedule


def disconnection_bound(
    lambda_step: float, delta_step: float, pi_AD: float, pi_A: float, l: int
) -> float:
    """1 - delta^l (1 - (lambda/delta)^l pi(A and D)/pi(A)), clamped to [0, 1].

    Bounds the chance an edge started in A (stationary) stays disconnected
    for l + 1 consecutive steps, when A-and-D states remain in A-and-D with
    probability at most lambda_step and A states remain in A with
    probability at least delta_step.
    """
    if not 0.0 < delta_step <= 1.0:
        raise ParameterDomainError("delta_step", delta_step, "must lie in (0, 1]")
    if not 0.0 <= lambda_step <= 1.0:
        raise ParameterDomainError("lambda_step", lambda_step, "must lie in [0, 1]")
    if pi_A <= 0.0:
        raise ParameterDomainError("pi_A", pi_A, "conditioning on a zero-probability set")
    if l < 0:
        raise ParameterDomainError("l", l, "must be >= 0")
    value = 1.0 - delta_step ** l + lambda_step ** l * pi_AD / pi_A
    return min(1.0, max(0.0, value))


def home_specialization(params: HomeMegParams, l: int) -> float:
    """disconnection_bound with A = Home: lambda = (1-q)(1-alpha), delta = 1-q."""
    p_home = home_probability(params)
    return disconnection_bound(
        (1.0 - params.q) * (1.0 - params.alpha),
        1.0 - params.q,
        p_home * (1.0 - params.alpha),
        p_home,
        l,
    )


def home_disconnection_bound(params: HomeMegParams, l: int) -> float:
    """1 - (1-q)^l (1 - (1-alpha)^l)."""
    return 1.0 - (1.0 - params.q) ** l * (1.0 - (1.0 - params.alpha) ** l)


def stationary_disconnection_bound(params: HomeMegParams, l: int) -> float:
    """1 - p/(p+q) (1-q)^l (1 - (1-alpha)^l), for a stationary (unconditioned) start."""
    p_home = home_probability(params)
    return 1.0 - p_home * (1.0 - params.q) ** l * (1.0 - (1.0 - params.alpha) ** l)


def connection_lower_bound(params: HomeMegParams, l: int) -> float:
    """l / Lambda, a lower bound on P(edge connects at least once in 0..l).

    Valid for l <= min(1/alpha, 1/(4q)). The informal argument suggests
    the stronger p*alpha/(p+q) * l = 4l/Lambda; only l/Lambda is claimed.
    """
    if l < 0:
        raise ParameterDomainError("l", l, "must be >= 0")
    cap = thm2_cap(params)
    if l > cap:
        raise BoundPreconditionError("l <= min(1/alpha, 1/(4q))", l, cap)
    if l == 0:
        return 0.0
    return l / lambda_of(params)


def max_connection_window(params: HomeMegParams) -> int:
    """Largest integer l accepted by connection_lower_bound."""
    cap = thm2_cap(params)
    return int(math.floor(cap)) if math.isfinite(cap) else 10**9


@dataclass(frozen=True)
class BoundCheck:
    """Monte Carlo estimate set against a proven bound."""

    l: int
    estimate: float
    std_error: float
    bound: float
    upper: bool

    def passed(self, sigma: float) -> bool:
        if self.upper:
            return self.estimate <= self.bound + sigma * self.std_error
        return self.estimate >= self.bound - sigma * self.std_error

    def to_dict(self, sigma: float) -> dict:
        return {
            "l": self.l,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "bound": self.bound,
            "kind": "upper" if self.upper else "lower",
            "passed": self.passed(sigma),
        }


def _binomial_se(estimate: float, trials: int) -> float:
    return math.sqrt(max(estimate * (1.0 - estimate), 0.0) / trials)


def estimate_home_disconnection(
    params: HomeMegParams, l_values: Sequence[int], trials: int, rng: np.random.Generator
) -> list[BoundCheck]:
    """P(disconnected at 0..l | start in Home) against the Home corollary bound.

    Starts are drawn from the stationary law restricted to Home (HC with
    probability alpha); all trials advance together.
    """
    ls = sorted(set(int(l) for l in l_values))
    if not ls or ls[0] < 1:
        raise ParameterDomainError("l_values", l_values, "need integers >= 1")
    states = np.where(rng.random(trials) < params.alpha, EdgeState.HC, EdgeState.HD).astype(np.int8)
    survive = ~connected_mask(states)
    counts: dict[int, int] = {}
    for step in range(1, ls[-1] + 1):
        states = step_states(params, states, rng.random(trials))
        survive &= ~connected_mask(states)
        if step in ls:
            counts[step] = int(survive.sum())

    checks = []
    for l in ls:
        estimate = counts[l] / trials
        checks.append(
            BoundCheck(l, estimate, _binomial_se(estimate, trials), home_disconnection_bound(params, l), upper=True)
        )
    logger.info(f"Home disconnection estimated for l in [{ls[0]}, {ls[-1]}] over {trials} trials")
    return checks


def estimate_connection_probability(
    params: HomeMegParams, l_values: Sequence[int], trials: int, rng: np.random.Generator
) -> list[BoundCheck]:
    """P(edge connects at least once in 0..l) from a stationary start, against l/Lambda."""
    ls = sorted(set(int(l) for l in l_values))
    if not ls or ls[0] < 0:
        raise ParameterDomainError("l_values", l_values, "need integers >= 0")
    states = sample_states(stationary(params).as_array(), rng.random(trials))
    ever = connected_mask(states)
    counts = {0: int(ever.sum())}
    for step in range(1, ls[-1] + 1):
        states = step_states(params, states, rng.random(trials))
        ever |= connected_mask(states)
        counts[step] = int(ever.sum())

    checks = []
    for l in ls:
        estimate = counts[l] / trials
        checks.append(
            BoundCheck(l, estimate, _binomial_se(estimate, trials), connection_lower_bound(params, l), upper=False)
        )
    logger.info(f"Connection probability estimated for l in [{ls[0]}, {ls[-1]}] over {trials} trials")
    return checks


@dataclass
class GrowthRow:
    """Informed count at the end of one period."""

    tau: int
    t_end: int
    informed: int
    target: float
    n: int

    @property
    def reached(self) -> bool:
        return self.informed >= min(self.target, self.n)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "t_end": self.t_end,
            "informed": self.informed,
            "target": self.target,
            "reached": self.reached,
        }


def informed_growth_diagnostic(run: FloodRun, schedule: PhaseSchedule) -> list[GrowthRow]:
    """|I_t| at the end of each period next to the target 2 K^(tau-1) log n.

    Diagnostic only: the real informed set dominates the restricted sets
    of the argument, so falling short is informative but never a failure.
    """
    sizes = run.informed_sizes
    rows = []
    for tau, (start, length) in enumerate(zip(schedule.starts, schedule.lengths), start=1):
        t_end = start + length
        informed = sizes[t_end] if t_end < len(sizes) else (run.n if not run.censored else sizes[-1])
        rows.append(GrowthRow(tau, t_end, int(informed), schedule.target(tau), run.n))
    return rows

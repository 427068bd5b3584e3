"""Exact completion-time distribution of flooding for very small n.

Dynamic programming over the joint state (informed set, edge-state
configuration). With n <= 4 there are at most 2^4 informed sets and 4^6
edge configurations.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .edge_chain import EdgeState, transition_matrix, stationary
from .errors import CapacityError, ParameterDomainError, SnapshotShapeError
from .graph import AllState, Explicit, InitMode, Stationary, edge_endpoints
from .params import HomeMegParams

logger = logging.getLogger(__name__)

MAX_ORACLE_NODES = 4


@dataclass
class ExactFlooding:
    """pmf[t] = P(T = t) for t = 0..horizon; the rest is censored mass."""

    n: int
    source: int
    horizon: int
    pmf: np.ndarray = field(repr=False)
    censored_mass: float

    @property
    def total_mass(self) -> float:
        return float(self.pmf.sum() + self.censored_mass)

    def mean(self) -> float:
        """Mean completion time given completion by the horizon."""
        done = self.pmf.sum()
        return float(np.dot(np.arange(self.pmf.size), self.pmf) / done) if done > 0 else float("inf")

    def total_variation(self, times: np.ndarray, censored: np.ndarray) -> float:
        """TV distance to the empirical law of Monte Carlo completion times.

        Censored runs form one extra atom, matched with censored_mass.
        """
        times = np.asarray(times, dtype=np.int64)
        censored = np.asarray(censored, dtype=bool)
        trials = times.size
        observed = times[~censored]
        if observed.size and observed.max() > self.horizon:
            raise ValueError(f"Completion time {observed.max()} beyond oracle horizon {self.horizon}")
        empirical = np.bincount(observed, minlength=self.horizon + 1) / trials
        empirical_censored = censored.sum() / trials
        return 0.5 * float(np.abs(empirical - self.pmf).sum() + abs(empirical_censored - self.censored_mass))


@lru_cache(maxsize=8)
def _transition_table(n: int) -> np.ndarray:
    """next_mask[I, c]: informed set after flooding I over edge configuration c."""
    m = n * (n - 1) // 2
    us, vs = edge_endpoints(n)
    configs = np.array(np.unravel_index(np.arange(4 ** m), (4,) * m)).T.reshape(4 ** m, m)
    connected = (configs == EdgeState.HC) | (configs == EdgeState.NC)

    masks = np.arange(2 ** n)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    crossing = connected[None, :, :] & (bits[:, us] != bits[:, vs])[:, None, :]

    incidence = np.zeros((m, n), dtype=np.int64)
    incidence[np.arange(m), us] = 1
    incidence[np.arange(m), vs] = 1
    reached = (crossing.astype(np.int64) @ incidence) > 0
    new_bits = bits[:, None, :] | reached
    return (new_bits.astype(np.int64) << np.arange(n)).sum(axis=2)


def _initial_configuration(params: HomeMegParams, init: InitMode) -> np.ndarray:
    """Joint law of E_0 as a tensor with one length-4 axis per edge."""
    m = params.num_edges
    if isinstance(init, Stationary):
        marginals = [stationary(params).as_array()] * m
    elif isinstance(init, AllState):
        marginals = [np.eye(4)[int(init.state)]] * m
    elif isinstance(init, Explicit):
        if len(init.states) != m:
            raise SnapshotShapeError(m, len(init.states))
        marginals = [np.eye(4)[int(s)] for s in init.states]
    else:
        raise TypeError(f"Unsupported init mode: {init!r}")
    joint = np.ones(())
    for marginal in marginals:
        joint = np.multiply.outer(joint, marginal)
    return joint


def exact_flooding_distribution(
    params: HomeMegParams, source: int, horizon: int, init: InitMode = Stationary()
) -> ExactFlooding:
    """Exact P(T = t) for t <= horizon from `source`."""
    n = params.n
    if n > MAX_ORACLE_NODES:
        raise CapacityError(n, MAX_ORACLE_NODES)
    if not 0 <= source < n:
        raise ParameterDomainError("source", source, f"must lie in [0, {n})")
    if horizon < 0:
        raise ParameterDomainError("horizon", horizon, "must be >= 0")

    pmf = np.zeros(horizon + 1)
    if n == 1:
        pmf[0] = 1.0
        return ExactFlooding(n, source, horizon, pmf, 0.0)

    m = params.num_edges
    full = 2 ** n - 1
    table = _transition_table(n)
    matrix = transition_matrix(params)

    # prob[I, c]: P(informed = I, edges = c, not yet complete)
    prob = np.zeros((2 ** n,) + (4,) * m)
    prob[1 << source] = _initial_configuration(params, init)
    configs = np.broadcast_to(np.arange(4 ** m), (2 ** n, 4 ** m))

    for t in range(1, horizon + 1):
        for axis in range(1, m + 1):
            prob = np.moveaxis(np.tensordot(prob, matrix, axes=([axis], [0])), -1, axis)
        flat = prob.reshape(2 ** n, 4 ** m)
        updated = np.zeros_like(flat)
        np.add.at(updated, (table, configs), flat)
        pmf[t] = updated[full].sum()
        updated[full] = 0.0
        prob = updated.reshape(prob.shape)

    censored = float(max(prob.sum(), 0.0))
    logger.debug(f"Exact flooding n={n}, source={source}: censored mass {censored:.3e} at horizon {horizon}")
    return ExactFlooding(n, source, horizon, pmf, censored)

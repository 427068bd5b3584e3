"""Single-edge four-state Markov chain of the Home-MEG model.

States are stored as small integers in canonical order HC, HD, NC, ND
(rows and columns of the transition matrix). Sampling uses a different,
fixed interval layout: [HC, NC, HD, ND] from left to right, so that the
connected states always occupy [0, P(connect)) and a single uniform can
drive several coupled processes.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

import numpy as np

from .errors import DegenerateChainError
from .params import HomeMegParams

logger = logging.getLogger(__name__)


class EdgeState(IntEnum):
    """Location (Home / Non-Home) x link (Connected / Disconnected)."""

    HC = 0
    HD = 1
    NC = 2
    ND = 3

    def connected(self) -> bool:
        return self in (EdgeState.HC, EdgeState.NC)

    def home(self) -> bool:
        return self in (EdgeState.HC, EdgeState.HD)

    @classmethod
    def parse(cls, name: str) -> "EdgeState":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"Unknown edge state {name!r}, expected one of HC, HD, NC, ND") from None


SAMPLING_ORDER: tuple[EdgeState, ...] = (EdgeState.HC, EdgeState.NC, EdgeState.HD, EdgeState.ND)
_SAMPLING_CODES = np.array([int(s) for s in SAMPLING_ORDER], dtype=np.int8)
STATE_DTYPE = np.int8


def transition_row(params: HomeMegParams, from_state: EdgeState) -> np.ndarray:
    """Row of the transition matrix for `from_state`, canonical column order."""
    p, q, a, g = params.p, params.q, params.alpha, params.gamma
    if EdgeState(from_state).home():
        return np.array([(1 - q) * a, (1 - q) * (1 - a), q * g, q * (1 - g)])
    return np.array([p * a, p * (1 - a), (1 - p) * g, (1 - p) * (1 - g)])


def transition_matrix(params: HomeMegParams) -> np.ndarray:
    """Full 4x4 transition matrix, rows and columns in canonical order."""
    return np.vstack([transition_row(params, state) for state in EdgeState])


def connect_probability(params: HomeMegParams, home: bool) -> float:
    """Probability the edge exists one step ahead: q_hat from Home, p_hat from Non-Home."""
    return params.q_hat if home else params.p_hat


@dataclass(frozen=True)
class StationaryDist:
    """Stationary law of the edge chain."""

    pi_hc: float
    pi_hd: float
    pi_nc: float
    pi_nd: float

    def __post_init__(self):
        total = self.pi_hc + self.pi_hd + self.pi_nc + self.pi_nd
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Stationary components sum to {total}, expected 1")

    def as_array(self) -> np.ndarray:
        """Components in canonical order HC, HD, NC, ND."""
        return np.array([self.pi_hc, self.pi_hd, self.pi_nc, self.pi_nd])

    @property
    def home(self) -> float:
        return self.pi_hc + self.pi_hd

    @property
    def connected(self) -> float:
        return self.pi_hc + self.pi_nc


def stationary(params: HomeMegParams) -> StationaryDist:
    """(p*alpha, p(1-alpha), q*gamma, q(1-gamma)) / (p+q)."""
    p, q, a, g = params.p, params.q, params.alpha, params.gamma
    total = p + q
    if total == 0.0:
        raise DegenerateChainError(p, q)
    return StationaryDist(
        pi_hc=p * a / total,
        pi_hd=p * (1 - a) / total,
        pi_nc=q * g / total,
        pi_nd=q * (1 - g) / total,
    )


def _sampling_thresholds(row: np.ndarray) -> np.ndarray:
    """Right ends of the HC, NC, HD intervals for a canonical-order row."""
    reordered = row[[int(s) for s in SAMPLING_ORDER]]
    return np.cumsum(reordered)[:3]


def step_edge(params: HomeMegParams, from_state: EdgeState, u: float) -> EdgeState:
    """Next state by inverse-CDF over the [HC, NC, HD, ND] layout."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0, 1], got {u}")
    row = transition_row(params, from_state)
    return sample_state(row, u)


def sample_state(row: np.ndarray, u: float) -> EdgeState:
    """Inverse-CDF draw of one state from a canonical-order probability vector."""
    thresholds = _sampling_thresholds(row)
    index = int(np.count_nonzero(thresholds <= u))
    reordered = row[[int(s) for s in SAMPLING_ORDER]]
    # u = 1 (or rounding at the right end) must not land in an empty interval
    while index > 0 and reordered[index] == 0.0:
        index -= 1
    return SAMPLING_ORDER[index]


def sample_states(row: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorised sample_state for uniforms in [0, 1)."""
    thresholds = _sampling_thresholds(row)
    index = np.searchsorted(thresholds, u, side="right")
    return _SAMPLING_CODES[index]


def step_states(params: HomeMegParams, states: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Advance a vector of edge states with one uniform per edge.

    Equivalent to step_edge applied element-wise; rows depend on the
    current state only through its location (Home / Non-Home).
    """
    home_next = sample_states(transition_row(params, EdgeState.HC), u)
    away_next = sample_states(transition_row(params, EdgeState.NC), u)
    return np.where(home_mask(states), home_next, away_next).astype(STATE_DTYPE)


def connected_mask(states: np.ndarray) -> np.ndarray:
    return (states == EdgeState.HC) | (states == EdgeState.NC)


def home_mask(states: np.ndarray) -> np.ndarray:
    return (states == EdgeState.HC) | (states == EdgeState.HD)


def _sojourns(rng: np.random.Generator, leave: float, size: int, cap: int) -> np.ndarray:
    if leave == 0.0:
        return np.full(size, cap, dtype=np.int64)
    return rng.geometric(leave, size=size)


def simulate_location(
    params: HomeMegParams,
    steps: int,
    rng: np.random.Generator,
    start_home: bool,
) -> np.ndarray:
    """Home indicator of one edge for `steps` steps, built from geometric sojourns."""
    p, q = params.p, params.q
    if steps <= 0:
        return np.zeros(0, dtype=bool)
    first_leave, second_leave = (q, p) if start_home else (p, q)
    if p > 0.0 and q > 0.0:
        batch = int(steps * p * q / (p + q)) + 16
    else:
        batch = 16

    pieces = []
    total = 0
    while total < steps:
        lengths = np.empty(2 * batch, dtype=np.int64)
        lengths[0::2] = _sojourns(rng, first_leave, batch, steps)
        lengths[1::2] = _sojourns(rng, second_leave, batch, steps)
        flags = np.tile(np.array([start_home, not start_home]), batch)
        pieces.append(np.repeat(flags, lengths))
        total += int(lengths.sum())
    return np.concatenate(pieces)[:steps]


def simulate_edge_trajectory(
    params: HomeMegParams,
    steps: int,
    rng: np.random.Generator,
    start: Optional[EdgeState] = None,
) -> np.ndarray:
    """States X_0..X_{steps-1} of one edge.

    The location process is a two-state chain with geometric sojourns and,
    given the location, contacts are independent Bernoulli(alpha or gamma);
    this is the same law as iterating step_edge. X_0 is `start` when given,
    otherwise drawn from the stationary distribution.
    """
    if start is None:
        pi = stationary(params)
        start_home = bool(rng.random() < pi.home)
        start_contact: Optional[bool] = None
    else:
        start_home = EdgeState(start).home()
        start_contact = EdgeState(start).connected()

    home = simulate_location(params, steps, rng, start_home)
    contact_prob = np.where(home, params.alpha, params.gamma)
    contact = rng.random(steps) < contact_prob
    if start_contact is not None and steps > 0:
        contact[0] = start_contact

    states = np.where(
        home,
        np.where(contact, EdgeState.HC, EdgeState.HD),
        np.where(contact, EdgeState.NC, EdgeState.ND),
    ).astype(STATE_DTYPE)
    logger.debug(f"Simulated {steps} steps of one edge, {int(contact.sum())} contacts")
    return states

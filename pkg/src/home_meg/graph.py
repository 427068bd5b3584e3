"""Whole-graph snapshots of a Home-MEG and their evolution.

Edges of the complete graph on n nodes are numbered by the upper-triangle
linearisation id(u, v) = v(v-1)/2 + u for u < v, so (0,1)=0, (0,2)=1,
(1,2)=2, (0,3)=3, ...
"""

import json
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .edge_chain import (
    STATE_DTYPE,
    EdgeState,
    connected_mask,
    sample_states,
    stationary,
    step_states,
)
from .errors import SnapshotShapeError
from .params import HomeMegParams
from .uniforms import UniformField

logger = logging.getLogger(__name__)


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_id(u: int, v: int) -> int:
    """Canonical id of the unordered pair {u, v}."""
    if u == v:
        raise ValueError(f"Self-loop ({u}, {v}) has no edge id")
    if u > v:
        u, v = v, u
    if u < 0:
        raise ValueError(f"Node ids must be non-negative, got {u}")
    return v * (v - 1) // 2 + u


def edge_pair(eid: int) -> tuple[int, int]:
    """Inverse of edge_id: (u, v) with u < v."""
    if eid < 0:
        raise ValueError(f"Edge id must be non-negative, got {eid}")
    v = (1 + math.isqrt(1 + 8 * eid)) // 2
    u = eid - v * (v - 1) // 2
    return u, v


@lru_cache(maxsize=16)
def edge_endpoints(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (us, vs) with us[e] < vs[e] for every edge id e."""
    vs, us = np.tril_indices(n, k=-1)
    us = us.astype(np.int64)
    vs = vs.astype(np.int64)
    us.flags.writeable = False
    vs.flags.writeable = False
    return us, vs


@dataclass
class GraphSnapshot:
    """Edge states of all n(n-1)/2 pairs at time t."""

    n: int
    t: int
    states: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=STATE_DTYPE)
        expected = num_edges(self.n)
        if self.states.shape != (expected,):
            raise SnapshotShapeError(expected, int(self.states.size))

    @property
    def connected(self) -> np.ndarray:
        """Boolean mask over edge ids: edge exists in E_t."""
        return connected_mask(self.states)

    def edge_set(self) -> set[tuple[int, int]]:
        """E_t as a set of (u, v) pairs."""
        us, vs = edge_endpoints(self.n)
        mask = self.connected
        return set(zip(us[mask].tolist(), vs[mask].tolist()))

    def state_of(self, u: int, v: int) -> EdgeState:
        return EdgeState(int(self.states[edge_id(u, v)]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "states": [EdgeState(int(s)).name for s in self.states],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphSnapshot":
        try:
            states = [int(EdgeState.parse(name)) for name in data["states"]]
            return cls(n=int(data["n"]), t=int(data["t"]), states=np.array(states, dtype=STATE_DTYPE))
        except KeyError as e:
            raise ValueError(f"Snapshot is missing field {e}") from None

    def save(self, path: Path) -> None:
        path.write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: Path) -> "GraphSnapshot":
        return cls.from_dict(json.loads(path.read_text()))


@dataclass(frozen=True)
class Stationary:
    """Every edge i.i.d. from the stationary distribution."""


@dataclass(frozen=True)
class AllState:
    """Every edge starts in the same state."""

    state: EdgeState


@dataclass(frozen=True)
class Explicit:
    """Initial states given edge by edge."""

    states: tuple[EdgeState, ...]


InitMode = Union[Stationary, AllState, Explicit]


def snapshot_mode(snapshot: GraphSnapshot) -> Explicit:
    """Explicit init mode reproducing the edge states of `snapshot`."""
    return Explicit(tuple(EdgeState(int(s)) for s in snapshot.states))


def parse_init_mode(text: str) -> InitMode:
    """'stationary', 'all:<STATE>' or 'file:<snapshot.json>'."""
    normalized = text.strip()
    if normalized.lower() == "stationary":
        return Stationary()
    head, _, rest = normalized.partition(":")
    if head.lower() == "all" and rest:
        return AllState(EdgeState.parse(rest))
    if head.lower() == "file" and rest:
        return snapshot_mode(GraphSnapshot.load(Path(rest)))
    raise ValueError(
        f"Unknown init mode {text!r}, expected 'stationary', 'all:<STATE>' or 'file:<path>'"
    )


def describe_init_mode(mode: InitMode) -> str:
    if isinstance(mode, Stationary):
        return "stationary"
    if isinstance(mode, AllState):
        return f"all:{mode.state.name}"
    return "explicit"


def sample_initial(params: HomeMegParams, mode: InitMode, uniforms: UniformField) -> GraphSnapshot:
    """E_0 according to `mode`; stationary draws consume U_0."""
    m = params.num_edges
    if isinstance(mode, Stationary):
        pi = stationary(params).as_array()
        states = sample_states(pi, uniforms.at(0, m))
    elif isinstance(mode, AllState):
        states = np.full(m, int(mode.state), dtype=STATE_DTYPE)
    elif isinstance(mode, Explicit):
        if len(mode.states) != m:
            raise SnapshotShapeError(m, len(mode.states))
        states = np.array([int(s) for s in mode.states], dtype=STATE_DTYPE)
    else:
        raise TypeError(f"Unsupported init mode: {mode!r}")
    return GraphSnapshot(n=params.n, t=0, states=states)


def evolve(snapshot: GraphSnapshot, params: HomeMegParams, uniforms: UniformField) -> GraphSnapshot:
    """E_{t+1} from E_t, every edge advanced with its own U_{t+1}(e)."""
    if snapshot.n != params.n:
        raise SnapshotShapeError(params.num_edges, int(snapshot.states.size))
    t_next = snapshot.t + 1
    u = uniforms.at(t_next, snapshot.states.size)
    return GraphSnapshot(n=snapshot.n, t=t_next, states=step_states(params, snapshot.states, u))


def explicit_mode(states: Sequence[Union[EdgeState, str]]) -> Explicit:
    """Explicit init mode from state values or names."""
    return Explicit(tuple(s if isinstance(s, EdgeState) else EdgeState.parse(s) for s in states))

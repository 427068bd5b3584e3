"""Flooding process over evolving graphs.

I_0 = {s}; I_{t+1} = I_t plus every node adjacent to I_t in G_{t+1}.
Informed sets are boolean vectors over the n nodes; graphs are Home-MEG
snapshots or boolean masks over edge ids (see graph.edge_endpoints).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .errors import ParameterDomainError
from .graph import (
    GraphSnapshot,
    InitMode,
    Stationary,
    describe_init_mode,
    edge_endpoints,
    evolve,
    sample_initial,
)
from .params import HomeMegParams
from .uniforms import UniformField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Censored:
    """Completion not observed before the horizon."""

    horizon: int


CompletionTime = Union[int, Censored]


@dataclass
class FloodRun:
    """One realisation of the flooding process."""

    source: int
    n: int
    informed_sizes: list[int]
    completion_time: CompletionTime
    informed_final: np.ndarray = field(repr=False)
    informed_history: Optional[list[np.ndarray]] = field(default=None, repr=False)

    @property
    def censored(self) -> bool:
        return isinstance(self.completion_time, Censored)

    @property
    def time_or_inf(self) -> float:
        """Completion time with censored runs as +inf (for pathwise comparisons)."""
        if isinstance(self.completion_time, Censored):
            return math.inf
        return float(self.completion_time)

    @property
    def observed_time(self) -> int:
        """Completion time, or the horizon for censored runs."""
        if isinstance(self.completion_time, Censored):
            return self.completion_time.horizon
        return self.completion_time


def flood_step(informed: np.ndarray, connected: np.ndarray) -> np.ndarray:
    """I_t together with all nodes joined to I_t by an edge of `connected`."""
    n = informed.size
    us, vs = edge_endpoints(n)
    if connected.shape != us.shape:
        raise ValueError(f"Edge mask has {connected.size} entries, expected {us.size} for n={n}")
    crossing = connected & (informed[us] != informed[vs])
    updated = informed.copy()
    updated[us[crossing]] = True
    updated[vs[crossing]] = True
    return updated


def flood_snapshot(informed: np.ndarray, snapshot: GraphSnapshot) -> np.ndarray:
    """flood_step on the edge set of a Home-MEG snapshot."""
    if snapshot.n != informed.size:
        raise ValueError(f"Snapshot has n={snapshot.n}, informed set has {informed.size} nodes")
    return flood_step(informed, snapshot.connected)


EvolvingGraph = Union[GraphSnapshot, np.ndarray]


def flood_graph(informed: np.ndarray, graph: EvolvingGraph) -> np.ndarray:
    if isinstance(graph, GraphSnapshot):
        return flood_snapshot(informed, graph)
    return flood_step(informed, graph)


def flood_process(
    n: int,
    source: int,
    graphs: Iterable[EvolvingGraph],
    horizon: int,
    record_sets: bool = False,
) -> FloodRun:
    """Run flooding over E_1, E_2, ... taken from `graphs` (snapshots or edge masks).

    Stops at completion or after `horizon` graphs, whichever comes first.
    """
    if not 0 <= source < n:
        raise ParameterDomainError("source", source, f"must lie in [0, {n})")
    if horizon < 1:
        raise ParameterDomainError("horizon", horizon, "must be >= 1")

    informed = np.zeros(n, dtype=bool)
    informed[source] = True
    sizes = [1]
    history = [informed.copy()] if record_sets else None

    if n == 1:
        return FloodRun(source, n, sizes, 0, informed, history)

    completion: CompletionTime = Censored(horizon)
    graph_iter: Iterator[EvolvingGraph] = iter(graphs)
    for t in range(1, horizon + 1):
        informed = flood_graph(informed, next(graph_iter))
        count = int(informed.sum())
        sizes.append(count)
        if history is not None:
            history.append(informed.copy())
        if count == n:
            completion = t
            break

    return FloodRun(source, n, sizes, completion, informed, history)


def meg_snapshots(
    params: HomeMegParams, init: InitMode, uniforms: UniformField
) -> Iterator[GraphSnapshot]:
    """Snapshots E_1, E_2, ... of a Home-MEG trajectory."""
    snapshot = sample_initial(params, init, uniforms)
    while True:
        snapshot = evolve(snapshot, params, uniforms)
        yield snapshot


def default_horizon(params: HomeMegParams) -> int:
    """64 * ceil(log2 n) * max(1, ceil(5 Lambda / n)) censoring horizon.

    When Lambda is undefined (p * alpha = 0) the Lambda factor is replaced by
    max(1, ceil(1 / (n * p_hat))), the scale of the any-start bound.
    """
    n = params.n
    log_factor = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    p_alpha = params.p * params.alpha
    if p_alpha > 0.0:
        lam = 4.0 * (params.p + params.q) / p_alpha
        scale = max(1, math.ceil(5.0 * lam / n))
    elif params.p_hat > 0.0:
        scale = max(1, math.ceil(1.0 / (n * params.p_hat)))
    else:
        scale = 1
    return 64 * log_factor * scale


def run_flooding(
    params: HomeMegParams,
    source: int,
    init: InitMode,
    horizon: int,
    uniforms: UniformField,
    record_sets: bool = False,
) -> FloodRun:
    """Flooding on one Home-MEG realisation driven by `uniforms`."""
    run = flood_process(
        params.n, source, meg_snapshots(params, init, uniforms), horizon, record_sets
    )
    if run.censored:
        logger.warning(
            f"Flooding from source {source} censored at horizon {horizon} "
            f"({run.informed_sizes[-1]}/{params.n} informed, {uniforms})"
        )
    return run


@dataclass
class FloodStats:
    """Summary of completion times; censored runs count at the horizon."""

    trials: int
    times: np.ndarray = field(repr=False)
    censored: np.ndarray = field(repr=False)
    mean: float
    median: float
    p95: float
    max: int
    censored_count: int

    @classmethod
    def from_runs(cls, runs: list[FloodRun]) -> "FloodStats":
        times = np.array([run.observed_time for run in runs], dtype=np.int64)
        censored = np.array([run.censored for run in runs], dtype=bool)
        return cls.from_arrays(times, censored)

    @classmethod
    def from_arrays(cls, times: np.ndarray, censored: np.ndarray) -> "FloodStats":
        if times.size == 0:
            raise ValueError("FloodStats needs at least one trial")
        return cls(
            trials=int(times.size),
            times=times,
            censored=censored,
            mean=float(times.mean()),
            median=float(np.median(times)),
            p95=float(np.percentile(times, 95)),
            max=int(times.max()),
            censored_count=int(censored.sum()),
        )

    @property
    def std_error(self) -> float:
        if self.trials < 2:
            return 0.0
        return float(self.times.std(ddof=1) / math.sqrt(self.trials))

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "median": self.median,
            "p95": self.p95,
            "max": self.max,
            "censored_count": self.censored_count,
            "std_error": self.std_error,
        }


@dataclass
class FloodEstimate:
    """Monte Carlo estimate of the flooding time (max over sources)."""

    params: HomeMegParams
    init: str
    horizon: int
    trials_per_source: int
    sources: list[int]
    sampled_sources: bool
    per_source: dict[int, FloodStats]
    overall: FloodStats

    @property
    def worst_source(self) -> int:
        return max(self.sources, key=lambda s: (self.per_source[s].mean, -s))

    @property
    def worst_mean(self) -> float:
        return self.per_source[self.worst_source].mean

    def records(self) -> Iterator[tuple[int, int, int, bool]]:
        """(source, trial, completion_time, censored) rows."""
        for source in self.sources:
            stats = self.per_source[source]
            for trial, (time, censored) in enumerate(zip(stats.times, stats.censored)):
                yield source, trial, int(time), bool(censored)

    def to_summary_dict(self) -> dict:
        return {
            "n": self.params.n,
            "init": self.init,
            "horizon": self.horizon,
            "trials_per_source": self.trials_per_source,
            "sources": self.sources,
            "sampled_sources": self.sampled_sources,
            "overall": self.overall.to_dict(),
            "worst_source": self.worst_source,
            "worst_mean": self.worst_mean,
            "per_source": {str(s): self.per_source[s].to_dict() for s in self.sources},
        }


def trial_stream(source: int, trial: int, trials_per_source: int) -> int:
    """Stream index of (source, trial); stream 0 stays free for single runs."""
    return 1 + source * trials_per_source + trial


def flooding_time_estimate(
    params: HomeMegParams,
    init: Optional[InitMode],
    horizon: Optional[int],
    trials_per_source: int,
    uniforms: UniformField,
    sources: Optional[list[int]] = None,
) -> FloodEstimate:
    """Run `trials_per_source` independent floodings from each source.

    `sources` restricts the sweep to a subset (flagged as sampled in the
    result); by default every node is a source.
    """
    if trials_per_source < 1:
        raise ParameterDomainError("trials_per_source", trials_per_source, "must be >= 1")
    init = init if init is not None else Stationary()
    horizon = horizon if horizon is not None else default_horizon(params)
    chosen = list(range(params.n)) if sources is None else sorted(set(sources))
    sampled = sources is not None and len(chosen) < params.n

    per_source: dict[int, FloodStats] = {}
    all_runs: list[FloodRun] = []
    for source in chosen:
        runs = [
            run_flooding(
                params,
                source,
                init,
                horizon,
                uniforms.spawn(trial_stream(source, trial, trials_per_source)),
            )
            for trial in range(trials_per_source)
        ]
        per_source[source] = FloodStats.from_runs(runs)
        all_runs.extend(runs)
        logger.info(
            f"Source {source}: mean completion {per_source[source].mean:.3f} over "
            f"{trials_per_source} trials ({per_source[source].censored_count} censored)"
        )

    return FloodEstimate(
        params=params,
        init=describe_init_mode(init),
        horizon=horizon,
        trials_per_source=trials_per_source,
        sources=chosen,
        sampled_sources=sampled,
        per_source=per_source,
        overall=FloodStats.from_runs(all_runs),
    )

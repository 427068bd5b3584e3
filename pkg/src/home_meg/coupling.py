"""Shared-uniform coupling of G^p (ER with p_hat), H (Home-MEG) and G^q (ER with q_hat).

All three processes read the same U_t(e). G^p keeps edge e iff U < p_hat,
G^q iff U < q_hat, and H advances with step_edge whose connected states
sit in [0, P(connect)). Since P(connect) is p_hat from Non-Home and q_hat
from Home, E_t(G^p) is contained in E_t(H), which is contained in E_t(G^q).
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .edge_chain import sample_states, stationary, step_states
from .errors import CouplingInapplicableError, ParameterDomainError
from .flooding import Censored, CompletionTime, EvolvingGraph, FloodRun, flood_graph
from .graph import GraphSnapshot, InitMode, Stationary, sample_initial
from .params import HomeMegParams
from .uniforms import UniformField

logger = logging.getLogger(__name__)


@dataclass
class CoupledState:
    """Joint state of the three coupled evolving graphs at time meg.t."""

    meg: GraphSnapshot
    er_p_edges: np.ndarray = field(repr=False)
    er_q_edges: np.ndarray = field(repr=False)
    p_hat: float
    q_hat: float

    @property
    def t(self) -> int:
        return self.meg.t

    def sandwich_violations(self) -> int:
        """Edges breaking E(G^p) <= E(H) <= E(G^q)."""
        meg_edges = self.meg.connected
        lower = np.count_nonzero(self.er_p_edges & ~meg_edges)
        upper = np.count_nonzero(meg_edges & ~self.er_q_edges)
        return int(lower + upper)


def check_coupling_hypotheses(params: HomeMegParams) -> None:
    """Raise unless p + q <= 1 and gamma <= alpha."""
    if params.p + params.q > 1.0:
        raise CouplingInapplicableError("p + q <= 1", f"p + q = {params.p + params.q}")
    if params.gamma > params.alpha:
        raise CouplingInapplicableError(
            "gamma <= alpha", f"gamma = {params.gamma} > alpha = {params.alpha}"
        )


def coupled_initial(
    params: HomeMegParams, uniforms: UniformField, init: InitMode = Stationary()
) -> CoupledState:
    """t = 0 state; the two ER graphs are thresholded from the same U_0 as H's E_0.

    With a stationary E_0 the connected mass (p*alpha + q*gamma)/(p+q) lies
    between p_hat and q_hat, so the sandwich already holds at t = 0. Other
    init modes fix E_0 independently of U_0 and the t = 0 nesting may fail;
    from t = 1 on it holds for every init mode since each step only depends
    on the edge's location and U_t.
    """
    check_coupling_hypotheses(params)
    u = uniforms.at(0, params.num_edges)
    if isinstance(init, Stationary):
        states = sample_states(stationary(params).as_array(), u)
        meg = GraphSnapshot(n=params.n, t=0, states=states)
    else:
        meg = sample_initial(params, init, uniforms)
    return CoupledState(
        meg=meg,
        er_p_edges=u < params.p_hat,
        er_q_edges=u < params.q_hat,
        p_hat=params.p_hat,
        q_hat=params.q_hat,
    )


def coupled_step(state: CoupledState, params: HomeMegParams, uniforms: UniformField) -> CoupledState:
    """Advance all three graphs with the shared U_{t+1}."""
    check_coupling_hypotheses(params)
    t_next = state.t + 1
    u = uniforms.at(t_next, state.meg.states.size)
    meg = GraphSnapshot(n=state.meg.n, t=t_next, states=step_states(params, state.meg.states, u))
    next_state = CoupledState(
        meg=meg,
        er_p_edges=u < state.p_hat,
        er_q_edges=u < state.q_hat,
        p_hat=state.p_hat,
        q_hat=state.q_hat,
    )
    violations = next_state.sandwich_violations()
    if violations:
        logger.error(f"Sandwich broken on {violations} edges at t={t_next} ({uniforms})")
    return next_state


@dataclass
class CoupledRuns:
    """Flooding on G^p, H and G^q over one coupled trajectory."""

    er_p: FloodRun
    meg: FloodRun
    er_q: FloodRun
    edge_violations: int
    set_violations: int

    @property
    def ordered(self) -> bool:
        """T(G^q) <= T(H) <= T(G^p), censored runs counting as +inf."""
        return self.er_q.time_or_inf <= self.meg.time_or_inf <= self.er_p.time_or_inf

    @property
    def times(self) -> tuple[float, float, float]:
        return self.er_p.time_or_inf, self.meg.time_or_inf, self.er_q.time_or_inf


class _Flood:
    """Incremental flooding state for one of the coupled graphs."""

    def __init__(self, n: int, source: int):
        self.informed = np.zeros(n, dtype=bool)
        self.informed[source] = True
        self.sizes = [1]
        self.completion: CompletionTime | None = 0 if n == 1 else None

    def advance(self, graph: EvolvingGraph, t: int) -> None:
        if self.completion is not None:
            return
        self.informed = flood_graph(self.informed, graph)
        count = int(self.informed.sum())
        self.sizes.append(count)
        if count == self.informed.size:
            self.completion = t

    def to_run(self, source: int, horizon: int) -> FloodRun:
        completion = self.completion if self.completion is not None else Censored(horizon)
        return FloodRun(source, self.informed.size, self.sizes, completion, self.informed.copy())


def coupled_flooding(
    params: HomeMegParams,
    source: int,
    horizon: int,
    uniforms: UniformField,
    init: InitMode = Stationary(),
) -> CoupledRuns:
    """Flood G^p, H and G^q from `source` on one coupled trajectory.

    Edge nesting and informed-set nesting I(G^p) <= I(H) <= I(G^q) are
    checked at every step; violations are counted, not raised.
    """
    if not 0 <= source < params.n:
        raise ParameterDomainError("source", source, f"must lie in [0, {params.n})")
    state = coupled_initial(params, uniforms, init)
    floods = {"p": _Flood(params.n, source), "h": _Flood(params.n, source), "q": _Flood(params.n, source)}
    edge_violations = 0
    set_violations = 0

    t = 0
    while t < horizon and any(f.completion is None for f in floods.values()):
        state = coupled_step(state, params, uniforms)
        t = state.t
        edge_violations += state.sandwich_violations()
        floods["p"].advance(state.er_p_edges, t)
        floods["h"].advance(state.meg, t)
        floods["q"].advance(state.er_q_edges, t)
        lower = np.count_nonzero(floods["p"].informed & ~floods["h"].informed)
        upper = np.count_nonzero(floods["h"].informed & ~floods["q"].informed)
        set_violations += int(lower + upper)

    runs = CoupledRuns(
        er_p=floods["p"].to_run(source, horizon),
        meg=floods["h"].to_run(source, horizon),
        er_q=floods["q"].to_run(source, horizon),
        edge_violations=edge_violations,
        set_violations=set_violations,
    )
    if not runs.ordered or edge_violations or set_violations:
        logger.error(
            f"Coupling check failed: times={runs.times}, edge violations={edge_violations}, "
            f"set violations={set_violations}"
        )
    return runs

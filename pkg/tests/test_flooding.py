"""Tests for the flooding process and flooding-time estimation."""

import itertools
import logging
import math

import numpy as np
import pytest

from home_meg.edge_chain import EdgeState
from home_meg.errors import ParameterDomainError
from home_meg.flooding import (
    Censored,
    FloodStats,
    default_horizon,
    flood_process,
    flood_snapshot,
    flood_step,
    flooding_time_estimate,
    meg_snapshots,
    run_flooding,
    trial_stream,
)
from home_meg.graph import AllState, GraphSnapshot, Stationary, edge_id, num_edges, parse_init_mode
from home_meg.params import HomeMegParams
from home_meg.uniforms import UniformField


def _informed(n, nodes):
    mask = np.zeros(n, dtype=bool)
    mask[list(nodes)] = True
    return mask


def _edges(n, pairs):
    mask = np.zeros(num_edges(n), dtype=bool)
    for u, v in pairs:
        mask[edge_id(u, v)] = True
    return mask


class TestFloodStep:
    """Tests for a single flooding step."""

    def test_no_edges_keeps_set(self):
        result = flood_step(_informed(5, [0]), _edges(5, []))
        np.testing.assert_array_equal(result, _informed(5, [0]))

    def test_complete_graph_informs_everyone(self):
        result = flood_step(_informed(5, [0]), np.ones(num_edges(5), dtype=bool))
        assert result.all()

    def test_one_hop_only(self):
        """Informed {0,1} with edge (1,2) informs 2 but not its neighbour 3."""
        result = flood_step(_informed(4, [0, 1]), _edges(4, [(1, 2), (2, 3)]))
        np.testing.assert_array_equal(result, _informed(4, [0, 1, 2]))

    def test_monotone_in_edges(self, rng):
        """A larger edge set never informs fewer nodes."""
        for _ in range(50):
            small = rng.random(num_edges(8)) < 0.1
            large = small | (rng.random(num_edges(8)) < 0.1)
            informed = rng.random(8) < 0.3
            assert np.all(flood_step(informed, small) <= flood_step(informed, large))

    def test_mask_size_checked(self):
        with pytest.raises(ValueError):
            flood_step(_informed(4, [0]), np.ones(3, dtype=bool))

    def test_snapshot_floods_over_connected_states(self):
        """(0,1) is HC, (0,2) is HD, (1,2) is NC: only node 1 joins from {0}."""
        snapshot = GraphSnapshot(n=3, t=1, states=[EdgeState.HC, EdgeState.HD, EdgeState.NC])
        np.testing.assert_array_equal(flood_snapshot(_informed(3, [0]), snapshot), _informed(3, [0, 1]))

    def test_snapshot_size_checked(self):
        snapshot = GraphSnapshot(n=3, t=1, states=[EdgeState.HC] * 3)
        with pytest.raises(ValueError):
            flood_snapshot(_informed(4, [0]), snapshot)


class TestFloodProcess:
    """Tests for running flooding over a sequence of graphs."""

    def test_single_node_completes_at_zero(self):
        run = flood_process(1, 0, iter([]), horizon=10)
        assert run.completion_time == 0

    def test_completion_time_on_path(self):
        graphs = [_edges(3, [(0, 1)]), _edges(3, []), _edges(3, [(1, 2)])]
        run = flood_process(3, 0, graphs, horizon=10)
        assert run.completion_time == 3
        assert run.informed_sizes == [1, 2, 2, 3]

    def test_censored_at_horizon(self):
        graphs = [_edges(3, [])] * 4
        run = flood_process(3, 1, graphs, horizon=4)
        assert run.completion_time == Censored(4)
        assert run.censored
        assert math.isinf(run.time_or_inf)
        assert run.observed_time == 4

    def test_history_is_nested(self):
        graphs = [_edges(4, [(0, 1)]), _edges(4, [(1, 3)]), _edges(4, [(2, 3)])]
        run = flood_process(4, 0, graphs, horizon=5, record_sets=True)
        for before, after in zip(run.informed_history, run.informed_history[1:]):
            assert np.all(before <= after)

    def test_snapshots_and_masks_agree(self):
        params = HomeMegParams(n=10, p=0.3, q=0.3, alpha=0.3, gamma=0.05)
        snapshots = list(itertools.islice(meg_snapshots(params, Stationary(), UniformField(6)), 40))
        from_snapshots = flood_process(10, 0, snapshots, horizon=40)
        from_masks = flood_process(10, 0, [s.connected for s in snapshots], horizon=40)
        assert from_snapshots.informed_sizes == from_masks.informed_sizes
        assert from_snapshots.completion_time == from_masks.completion_time

    def test_bad_source_rejected(self):
        with pytest.raises(ParameterDomainError):
            flood_process(3, 3, iter([]), horizon=5)

    def test_bad_horizon_rejected(self):
        with pytest.raises(ParameterDomainError):
            flood_process(3, 0, iter([]), horizon=0)


class TestRunFlooding:
    """Tests for flooding on Home-MEG realisations."""

    def test_snapshot_file_init(self, tmp_path):
        """Frozen Home contacts loaded from a saved snapshot flood in one step."""
        path = tmp_path / "e0.json"
        GraphSnapshot(n=4, t=0, states=[EdgeState.HC] * 6).save(path)
        params = HomeMegParams(n=4, p=0.0, q=0.0, alpha=1.0, gamma=0.0)
        run = run_flooding(params, 3, parse_init_mode(f"file:{path}"), 10, UniformField(1))
        assert run.completion_time == 1

    def test_always_connected_completes_in_one_step(self):
        params = HomeMegParams(n=5, p=0.2, q=0.2, alpha=1.0, gamma=1.0)
        run = run_flooding(params, 0, Stationary(), 100, UniformField(1))
        assert run.completion_time == 1

    def test_never_connected_is_censored(self, caplog):
        params = HomeMegParams(n=5, p=0.2, q=0.2, alpha=0.0, gamma=0.0)
        with caplog.at_level(logging.WARNING):
            run = run_flooding(params, 2, AllState(EdgeState.HD), 20, UniformField(1))
        assert run.completion_time == Censored(20)
        assert run.informed_sizes == [1] * 21
        assert "censored" in caplog.text

    def test_sizes_are_nondecreasing(self):
        params = HomeMegParams(n=30, p=0.1, q=0.1, alpha=0.1, gamma=0.01)
        run = run_flooding(params, 0, Stationary(), 1000, UniformField(4))
        assert run.informed_sizes[0] == 1
        assert all(a <= b for a, b in zip(run.informed_sizes, run.informed_sizes[1:]))

    def test_same_seed_same_run(self):
        params = HomeMegParams(n=30, p=0.1, q=0.1, alpha=0.1, gamma=0.01)
        first = run_flooding(params, 3, Stationary(), 1000, UniformField(9))
        second = run_flooding(params, 3, Stationary(), 1000, UniformField(9))
        assert first.informed_sizes == second.informed_sizes


class TestDefaultHorizon:
    """Tests for the censoring horizon."""

    def test_lambda_scaled(self):
        """n=8, Lambda=8: 64 * 3 * ceil(5) = 960."""
        params = HomeMegParams(n=8, p=0.5, q=0.5, alpha=1.0, gamma=0.0)
        assert default_horizon(params) == 960

    def test_fallback_without_lambda(self):
        """p*alpha = 0 uses ceil(1/(n p_hat)) instead."""
        params = HomeMegParams(n=4, p=0.0, q=0.5, alpha=0.5, gamma=0.25)
        assert default_horizon(params) == 128


class TestFloodStats:
    def test_summary_values(self):
        stats = FloodStats.from_arrays(np.array([1, 2, 3, 4]), np.array([False, False, False, True]))
        assert stats.mean == 2.5
        assert stats.median == 2.5
        assert stats.max == 4
        assert stats.censored_count == 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            FloodStats.from_arrays(np.array([], dtype=np.int64), np.array([], dtype=bool))


class TestFloodingTimeEstimate:
    """Tests for the Monte Carlo flooding-time estimator."""

    def test_single_node(self):
        params = HomeMegParams(n=1, p=0.1, q=0.1, alpha=0.5, gamma=0.1)
        estimate = flooding_time_estimate(params, None, None, 5, UniformField(1))
        assert estimate.overall.mean == 0.0
        assert estimate.overall.max == 0

    def test_sampled_sources_flagged(self):
        params = HomeMegParams(n=6, p=0.3, q=0.3, alpha=0.5, gamma=0.2)
        estimate = flooding_time_estimate(params, Stationary(), 500, 4, UniformField(1), sources=[4, 1, 4])
        assert estimate.sources == [1, 4]
        assert estimate.sampled_sources
        assert len(list(estimate.records())) == 8
        summary = estimate.to_summary_dict()
        assert summary["n"] == 6
        assert set(summary["per_source"]) == {"1", "4"}

    def test_all_sources_by_default(self):
        params = HomeMegParams(n=4, p=0.3, q=0.3, alpha=0.5, gamma=0.2)
        estimate = flooding_time_estimate(params, None, None, 3, UniformField(2))
        assert estimate.sources == [0, 1, 2, 3]
        assert not estimate.sampled_sources
        assert estimate.worst_source in estimate.sources

    def test_reproducible(self):
        params = HomeMegParams(n=6, p=0.3, q=0.3, alpha=0.5, gamma=0.2)
        first = flooding_time_estimate(params, None, 500, 10, UniformField(5))
        second = flooding_time_estimate(params, None, 500, 10, UniformField(5))
        assert list(first.records()) == list(second.records())

    def test_sources_are_exchangeable(self):
        """Per-source means agree within 4 combined standard errors."""
        params = HomeMegParams(n=6, p=0.2, q=0.3, alpha=0.4, gamma=0.05)
        estimate = flooding_time_estimate(params, None, 2000, 300, UniformField(8))
        stats = [estimate.per_source[s] for s in estimate.sources]
        for i, first in enumerate(stats):
            for second in stats[i + 1:]:
                combined = math.hypot(first.std_error, second.std_error)
                assert abs(first.mean - second.mean) <= 4 * combined + 1e-9

    def test_zero_trials_rejected(self):
        params = HomeMegParams(n=4, p=0.3, q=0.3, alpha=0.5, gamma=0.2)
        with pytest.raises(ParameterDomainError):
            flooding_time_estimate(params, None, None, 0, UniformField(1))

    def test_trial_streams_distinct(self):
        streams = {trial_stream(s, t, 5) for s in range(4) for t in range(5)}
        assert len(streams) == 20
        assert 0 not in streams

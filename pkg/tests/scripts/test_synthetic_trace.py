"""Tests for the operator scripts."""
import importlib.util
import sys
from pathlib import Path

import numpy as np

# Add paths for imports
repo_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(repo_root / "src"))
sys.path.insert(0, str(repo_root))


def _load_script(name):
    script_path = repo_root / "scripts" / f"{name}.py"
    spec = importlib.util.spec_from_file_location(name, script_path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


make_synthetic_trace = _load_script("make_synthetic_trace")
corollary_growth = _load_script("corollary_growth")
sample_snapshot = _load_script("sample_snapshot")

from home_meg.edge_chain import EdgeState
from home_meg.fitting import load_trace, log_mse, save_trace
from home_meg.graph import GraphSnapshot, Stationary, sample_initial
from home_meg.params import preset_params
from home_meg.uniforms import UniformField


class TestSyntheticTrace:
    """Tests for synthetic CCDF trace generation."""

    def test_points_are_distinct_steps(self):
        """Log-spaced times collapse to distinct whole steps."""
        trace = make_synthetic_trace.synthetic_trace(preset_params("infocom06"), 12, 86.4, 86.4 * 5000, 86.4)
        steps = trace.steps()
        assert 1 <= len(trace.points) <= 12
        assert np.all(np.diff(steps) > 0)
        assert np.all(np.diff(trace.ccdf) <= 0)

    def test_trace_matches_its_params(self, tmp_path):
        params = preset_params("infocom06")
        trace = make_synthetic_trace.synthetic_trace(params, 8, 86.4, 86.4 * 1000, 86.4)
        path = tmp_path / "synthetic.csv"
        save_trace(trace, path)
        assert log_mse(params, load_trace(path)) <= 1e-18

    def test_main_writes_file(self, tmp_path, monkeypatch):
        out = tmp_path / "t.csv"
        monkeypatch.setattr(sys, "argv", ["make_synthetic_trace.py", str(out), "--points", "5"])
        assert make_synthetic_trace.main() == 0
        assert len(load_trace(out).points) == 5

    def test_main_rejects_bad_params(self, tmp_path, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["make_synthetic_trace.py", str(tmp_path / "t.csv"), "--params", "2,0.1,0.1,0.1"])
        assert make_synthetic_trace.main() == 1


class TestCorollaryGrowth:
    """Tests for the corollary-regime growth sweep helpers."""

    def test_growth_ratios(self):
        assert corollary_growth.growth_ratios([2.0, 3.0, 0.0, 1.0]) == [1.5, 0.0, float("inf")]

    def test_growth_means_small_sweep(self):
        means = corollary_growth.growth_means([8, 16], 0.5, 5, seed=1)
        assert len(means) == 2
        assert all(mean > 0 for mean in means)


class TestSampleSnapshot:
    """Tests for writing initial snapshots."""

    def test_stationary_draw_matches_flooding(self):
        """The script draws E_0 from U_0 of the same seed as a flooding run."""
        params = preset_params("infocom06", n=12)
        snapshot = sample_snapshot.initial_snapshot(params, "stationary", 4)
        expected = sample_initial(params, Stationary(), UniformField(4))
        np.testing.assert_array_equal(snapshot.states, expected.states)

    def test_main_writes_loadable_snapshot(self, tmp_path, monkeypatch):
        out = tmp_path / "e0.json"
        monkeypatch.setattr(sys, "argv", ["sample_snapshot.py", str(out), "--n", "6", "--init", "all:HD"])
        assert sample_snapshot.main() == 0
        loaded = GraphSnapshot.load(out)
        assert (loaded.n, loaded.t) == (6, 0)
        assert np.all(loaded.states == EdgeState.HD)

    def test_main_rejects_unknown_init(self, tmp_path, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["sample_snapshot.py", str(tmp_path / "e0.json"), "--n", "4", "--init", "all:XX"])
        assert sample_snapshot.main() == 1

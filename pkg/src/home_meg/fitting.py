"""Fit (p, q, alpha, gamma) to an inter-contact CCDF by log-scale least squares.

Search runs in log10-parameter space: a log-uniform grid over
[grid_low, grid_high]^4, then Nelder-Mead refinement (scipy) from the best
grid points. Everything is deterministic; ties go to the lowest start index.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import minimize

from .config import FitSearchConfig, settings
from .errors import FitFailedError, NoContactsError, TraceValidationError
from .intercontact import ic_ccdf_at, steps_from_seconds
from .params import HomeMegParams, derived_columns

logger = logging.getLogger(__name__)

# Keeps every searched value strictly inside (0, 1).
_UPPER = 1.0 - 1e-9
_PARAM_NAMES = ("p", "q", "alpha", "gamma")


class CcdfPoint(BaseModel):
    """One (time, P(IC > time)) sample of a trace."""

    t_seconds: float = Field(..., gt=0.0, allow_inf_nan=False)
    ccdf: float = Field(..., gt=0.0, le=1.0)


class CcdfTrace(BaseModel):
    """A handful of representative points of an empirical CCDF."""

    points: list[CcdfPoint] = Field(..., min_length=1)
    step_seconds: float = Field(default=86.4, gt=0.0, allow_inf_nan=False, description="Seconds per model step")
    name: str = Field(default="trace")

    @model_validator(mode="after")
    def validate_monotone(self):
        """t strictly increasing, ccdf nonincreasing."""
        for i in range(1, len(self.points)):
            prev, cur = self.points[i - 1], self.points[i]
            if cur.t_seconds <= prev.t_seconds:
                raise ValueError(f"t_seconds must strictly increase (point {i + 1})")
            if cur.ccdf > prev.ccdf:
                raise ValueError(f"ccdf must be nonincreasing (point {i + 1})")
        return self

    @property
    def t_seconds(self) -> np.ndarray:
        return np.array([pt.t_seconds for pt in self.points])

    @property
    def ccdf(self) -> np.ndarray:
        return np.array([pt.ccdf for pt in self.points])

    def steps(self) -> np.ndarray:
        """Model steps k = round(t / step_seconds), at least 1."""
        return steps_from_seconds(self.t_seconds, self.step_seconds)


def trace_from_params(
    params: HomeMegParams,
    t_seconds: Sequence[float],
    step_seconds: float = 86.4,
    name: str = "synthetic",
) -> CcdfTrace:
    """Trace sampled from the model's own CCDF at the given times."""
    values = ic_ccdf_at(params, steps_from_seconds(t_seconds, step_seconds))
    points = [CcdfPoint(t_seconds=t, ccdf=float(c)) for t, c in zip(t_seconds, values)]
    return CcdfTrace(points=points, step_seconds=step_seconds, name=name)


def load_trace(path: Path) -> CcdfTrace:
    """Read a `t_seconds,ccdf` CSV; `# step_seconds=<x>` comment lines set the step."""
    step_seconds = settings.fit.step_seconds
    source = str(path)
    data_lines: list[tuple[int, str]] = []
    with open(path, newline="") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("#").partition("=")
                if key.strip() == "step_seconds":
                    try:
                        step_seconds = float(value)
                    except ValueError:
                        raise TraceValidationError(line_no, f"bad step_seconds {value.strip()!r}", source) from None
                    if not (math.isfinite(step_seconds) and step_seconds > 0.0):
                        raise TraceValidationError(line_no, f"step_seconds must be finite and positive, got {step_seconds}", source)
                continue
            data_lines.append((line_no, line))

    if not data_lines:
        raise TraceValidationError(0, "empty trace", source)
    header_no, header = data_lines[0]
    columns = [c.strip() for c in header.split(",")]
    if columns != ["t_seconds", "ccdf"]:
        raise TraceValidationError(header_no, f"expected header 't_seconds,ccdf', got {header!r}", source)

    points: list[CcdfPoint] = []
    prev_t, prev_c = -math.inf, math.inf
    body = data_lines[1:]
    rows = csv.reader([text for _, text in body])
    for (line_no, _), row in zip(body, rows):
        if len(row) != 2:
            raise TraceValidationError(line_no, f"expected 2 columns, got {len(row)}", source)
        try:
            t, c = float(row[0]), float(row[1])
        except ValueError:
            raise TraceValidationError(line_no, f"non-numeric value in {row!r}", source) from None
        if not (math.isfinite(t) and t > 0.0):
            raise TraceValidationError(line_no, f"t_seconds must be finite and positive, got {t}", source)
        if not 0.0 < c <= 1.0:
            raise TraceValidationError(line_no, f"ccdf must lie in (0, 1], got {c}", source)
        if t <= prev_t:
            raise TraceValidationError(line_no, f"t_seconds not increasing ({t} after {prev_t})", source)
        if c > prev_c:
            raise TraceValidationError(line_no, f"ccdf increases ({c} after {prev_c})", source)
        points.append(CcdfPoint(t_seconds=t, ccdf=c))
        prev_t, prev_c = t, c

    if not points:
        raise TraceValidationError(header_no, "no data rows", source)
    logger.info(f"Loaded {len(points)} CCDF points from {path} (step {step_seconds}s)")
    return CcdfTrace(points=points, step_seconds=step_seconds, name=Path(path).stem)


def save_trace(trace: CcdfTrace, path: Path) -> None:
    """Write a trace in the format load_trace reads."""
    with open(path, "w", newline="") as handle:
        handle.write(f"# step_seconds={trace.step_seconds}\n")
        writer = csv.writer(handle)
        writer.writerow(["t_seconds", "ccdf"])
        for pt in trace.points:
            writer.writerow([repr(pt.t_seconds), repr(pt.ccdf)])


def log_mse(params: HomeMegParams, trace: CcdfTrace) -> float:
    """Mean squared log10 distance between model and trace CCDFs.

    Returns +inf when the model CCDF vanishes at a required step.
    """
    try:
        model = ic_ccdf_at(params, trace.steps())
    except NoContactsError:
        return math.inf
    if not np.all(np.isfinite(model)) or np.any(model <= 0.0):
        return math.inf
    diff = np.log10(model) - np.log10(trace.ccdf)
    return float(np.mean(diff * diff))


@dataclass
class FitResult:
    """Best parameters found, with derived columns p_H, alpha/gamma and p+q."""

    params: HomeMegParams
    objective: float
    iterations: int
    evaluations: int
    start_index: int

    @property
    def derived(self) -> dict[str, float]:
        return derived_columns(self.params)

    def to_dict(self) -> dict:
        row = {name: getattr(self.params, name) for name in _PARAM_NAMES}
        row.update(self.derived)
        row["objective"] = self.objective
        row["iterations"] = self.iterations
        row["evaluations"] = self.evaluations
        return row


def _params_from_log(x: np.ndarray) -> HomeMegParams:
    values = np.clip(10.0 ** np.asarray(x, dtype=float), 0.0, _UPPER)
    return HomeMegParams(n=2, **dict(zip(_PARAM_NAMES, (float(v) for v in values))))


def grid_starts(search: FitSearchConfig) -> np.ndarray:
    """All grid points as log10 parameter vectors, shape (points^4, 4)."""
    axis = np.log10(
        np.minimum(np.logspace(math.log10(search.grid_low), math.log10(search.grid_high), search.grid_points), _UPPER)
    )
    mesh = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _initial_simplex(x0: np.ndarray, low: float, high: float) -> np.ndarray:
    """x0 plus one half-decade step per axis, pointing into the box."""
    mid = 0.5 * (low + high)
    simplex = np.tile(x0, (x0.size + 1, 1))
    for i in range(x0.size):
        simplex[i + 1, i] += -0.5 if x0[i] > mid else 0.5
    return simplex


def fit(trace: CcdfTrace, search: Optional[FitSearchConfig] = None, seed: int = 0) -> FitResult:
    """Grid + Nelder-Mead minimisation of log_mse over (0, 1)^4.

    `seed` is recorded for provenance only; the search has no random component.
    """
    search = search if search is not None else settings.fit
    if len(trace.points) < 4:
        raise TraceValidationError(len(trace.points), "fitting four parameters needs at least 4 points")

    low = math.log10(search.grid_low) - 2.0
    high = math.log10(_UPPER)
    evaluations = 0

    def objective(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        return log_mse(_params_from_log(x), trace)

    starts = grid_starts(search)
    grid_values = np.array([objective(x) for x in starts])
    feasible = np.flatnonzero(np.isfinite(grid_values))
    if feasible.size == 0:
        raise FitFailedError(evaluations)
    order = feasible[np.argsort(grid_values[feasible], kind="stable")]
    logger.info(
        f"Grid search over {len(starts)} starts: best objective {grid_values[order[0]]:.3e} "
        f"(trace {trace.name!r}, seed {seed})"
    )

    best: Optional[FitResult] = None
    for index in order[: search.refine_starts]:
        x0 = starts[index]
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=[(low, high)] * 4,
            options={
                "maxiter": search.max_iterations,
                "xatol": search.xatol,
                "fatol": search.fatol,
                "initial_simplex": _initial_simplex(x0, low, high),
            },
        )
        value, x = float(result.fun), np.asarray(result.x)
        if not value <= grid_values[index]:
            value, x = float(grid_values[index]), x0
        logger.debug(f"Start {index}: objective {grid_values[index]:.3e} -> {value:.3e} in {result.nit} iterations")
        if best is None or value < best.objective:
            best = FitResult(
                params=_params_from_log(x),
                objective=value,
                iterations=int(result.nit),
                evaluations=0,
                start_index=int(index),
            )

    assert best is not None
    best.evaluations = evaluations
    logger.info(f"Fit finished: objective {best.objective:.3e}, {evaluations} evaluations")
    return best

"""Command-line front end: `home-meg <command> [options]`.

Commands:
    flood     Monte Carlo flooding times (optionally over several n)
    ic        Analytic (and empirical) inter-contact distribution
    fit       Fit (p, q, alpha, gamma) to a CCDF trace
    bounds    Bound arguments, Lambda and the phase schedule
    verify    Statistical checks of the proven bounds and of the coupling
    couple    Coupled G^p / H / G^q flooding runs
    presets   List the built-in best-fit parameter sets

Exit codes:
    0: Success
    1: Verification failed
    2: Usage or parameter error
    3: I/O error
"""

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Optional

from pydantic import BaseModel, Field, ValidationError

from .bounds import (
    bound_report,
    estimate_connection_probability,
    estimate_home_disconnection,
    home_disconnection_bound,
    home_specialization,
    informed_growth_diagnostic,
    max_connection_window,
    phase_schedule,
)
from .config import HomeMegSettings
from .coupling import coupled_flooding
from .errors import HomeMegError, LambdaUndefinedError, ParameterDomainError
from .fitting import fit, load_trace
from .flooding import FloodStats, default_horizon, flooding_time_estimate, run_flooding
from .graph import InitMode, parse_init_mode
from .intercontact import ccdf_at_seconds, empirical_ic, ic_pmf, mean_intercontact, steps_from_seconds, total_variation
from .oracle import exact_flooding_distribution
from .params import PRESETS, HomeMegParams, corollary_params, derived_columns, preset_params
from .uniforms import UniformField

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# Default parameter sets for `verify` when none are given on the command line.
VERIFY_DEFAULTS: dict[str, dict[str, float]] = {
    "lemma1": {"p": 0.05, "q": 0.1, "alpha": 0.3, "gamma": 0.01},
    "lambda-lb": {"p": 0.05, "q": 0.1, "alpha": 0.3, "gamma": 0.01},
    "coupling": {"p": 0.1, "q": 0.1, "alpha": 0.5, "gamma": 0.05},
    "oracle": {"p": 0.5, "q": 0.5, "alpha": 0.9, "gamma": 0.1},
}

# Side-draw purposes of the uniform field (the edge chain itself uses 0).
_PURPOSE_EMPIRICAL_IC = 1
_PURPOSE_VERIFY = 2


class ExperimentConfig(BaseModel):
    """Resolved inputs of one command, written next to its results."""

    command: str
    seed: int
    params: Optional[dict[str, float]] = None
    n_values: list[int] = Field(default_factory=list)
    trials: Optional[int] = None
    horizon: Optional[int] = None
    init_mode: Optional[str] = None
    options: dict[str, Any] = Field(default_factory=dict)


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def parse_int_list(text: str) -> list[int]:
    """'64,128,256' -> [64, 128, 256]."""
    try:
        values = [int(float(part)) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_count(text: str) -> int:
    """Integer that may be written in float notation, e.g. 1e7."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def resolve_seed(args: argparse.Namespace, cfg: HomeMegSettings) -> int:
    """HOMEMEG_SEED wins over --seed, which wins over the config file."""
    env_seed = os.environ.get("HOMEMEG_SEED")
    if env_seed is not None and env_seed.strip():
        try:
            seed = int(env_seed)
        except ValueError:
            raise ParameterDomainError("HOMEMEG_SEED", env_seed, "must be an integer") from None
        if args.seed is not None and args.seed != seed:
            logger.info(f"HOMEMEG_SEED={seed} overrides --seed {args.seed}")
        return seed
    if args.seed is not None:
        return args.seed
    return cfg.simulation.seed


def resolve_params(args: argparse.Namespace, n: int, fallback: Optional[dict[str, float]] = None) -> HomeMegParams:
    """Model parameters from --corollary-eps, --preset, explicit values or a fallback."""
    if getattr(args, "corollary_eps", None) is not None:
        return corollary_params(n, args.corollary_eps)

    values: dict[str, float] = {}
    if getattr(args, "preset", None):
        values.update(preset_params(args.preset, n).model_dump(exclude={"n"}))
    elif fallback is not None:
        values.update(fallback)
    for name in ("p", "q", "alpha", "gamma"):
        explicit = getattr(args, name, None)
        if explicit is not None:
            values[name] = explicit

    missing = [name for name in ("p", "q", "alpha", "gamma") if name not in values]
    if missing:
        raise ParameterDomainError(
            ",".join(missing), None, "give --preset, --corollary-eps or all of --p --q --alpha --gamma"
        )
    return HomeMegParams.create(n=n, **values)


def _n_values(args: argparse.Namespace, default: int) -> list[int]:
    return args.n if getattr(args, "n", None) else [default]


def _output_dir(args: argparse.Namespace, default: Path) -> Path:
    out = Path(args.out) if getattr(args, "out", None) else default
    out.mkdir(parents=True, exist_ok=True)
    return out


def _json_default(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def _clean_float(value: Any) -> Any:
    """JSON has no infinity; write it as a string."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _clean_float(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_clean_float(v) for v in value]
    return value


def write_json(path: Path, payload: dict, cfg: HomeMegSettings, experiment: ExperimentConfig) -> None:
    """JSON result with schema_version and provenance."""
    document = {
        "schema_version": cfg.output.schema_version,
        "config": experiment.model_dump(mode="json"),
        "settings": cfg.model_dump(mode="json"),
        **payload,
    }
    path.write_text(json.dumps(_clean_float(document), indent=2, default=_json_default) + "\n")
    logger.info(f"Wrote {path}")


def write_csv(path: Path, header: list[str], rows: Iterable[Iterable[Any]]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info(f"Wrote {path}")


def _bounds_or_none(params: HomeMegParams) -> Optional[dict]:
    try:
        return bound_report(params).to_dict()
    except LambdaUndefinedError as e:
        logger.warning(f"No bound report: {e}")
        return None


def _growth_or_none(
    params: HomeMegParams, init: InitMode, horizon: int, uniforms: UniformField
) -> Optional[dict]:
    """Phase schedule and per-period |I_t| of one run from node 0, when the schedule applies."""
    try:
        applicable = bound_report(params).thm2_applicable
    except LambdaUndefinedError:
        return None
    if not applicable:
        logger.info(f"Phase schedule not applicable at n={params.n}; no growth diagnostic")
        return None
    schedule = phase_schedule(params)
    run = run_flooding(params, 0, init, horizon, uniforms)
    rows = informed_growth_diagnostic(run, schedule)
    short = [row.tau for row in rows if not row.reached]
    if short:
        logger.info(f"Growth below schedule targets in periods {short} (diagnostic only)")
    return {
        "schedule": schedule.to_dict(),
        "source": 0,
        "completion_time": run.time_or_inf,
        "rows": [row.to_dict() for row in rows],
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_flood(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Flooding time estimates, one CSV + JSON per n, plus a sweep summary."""
    n_values = _n_values(args, 2)
    trials = args.trials or cfg.simulation.trials
    init_text = args.init or cfg.simulation.init_mode
    init = parse_init_mode(init_text)
    out_dir = _output_dir(args, cfg.output.flood_dir)
    sweep = args.sweep_sources or cfg.simulation.sweep_sources

    uniforms = UniformField(seed)
    sweep_rows = []
    for n in n_values:
        params = resolve_params(args, n)
        horizon = args.horizon or cfg.simulation.horizon or default_horizon(params)
        if args.sources:
            sources: Optional[list[int]] = args.sources
        else:
            sources = None if sweep else [0]
        experiment = ExperimentConfig(
            command="flood",
            seed=seed,
            params=params.model_dump(),
            n_values=n_values,
            trials=trials,
            horizon=horizon,
            init_mode=init_text,
            options={"sources": sources},
        )
        logger.info(f"Flooding n={n}, {trials} trials/source, horizon {horizon}")
        estimate = flooding_time_estimate(params, init, horizon, trials, uniforms, sources)

        write_csv(
            out_dir / f"flood_n{n}.csv",
            ["source", "trial", "completion_time", "censored"],
            estimate.records(),
        )
        write_json(
            out_dir / f"flood_n{n}.json",
            {
                "summary": estimate.to_summary_dict(),
                "bounds": _bounds_or_none(params),
                "growth": _growth_or_none(params, init, horizon, uniforms),
            },
            cfg,
            experiment,
        )
        sweep_rows.append((n, estimate.overall))

    if len(sweep_rows) > 1:
        _write_sweep(out_dir, sweep_rows, cfg, args, seed)
    return EXIT_OK


def _write_sweep(
    out_dir: Path,
    rows: list[tuple[int, FloodStats]],
    cfg: HomeMegSettings,
    args: argparse.Namespace,
    seed: int,
) -> None:
    means = [stats.mean for _, stats in rows]
    ratios = [means[i + 1] / means[i] if means[i] > 0 else math.inf for i in range(len(means) - 1)]
    experiment = ExperimentConfig(command="flood", seed=seed, n_values=[n for n, _ in rows])
    write_csv(
        out_dir / "flood_sweep.csv",
        ["n", "mean", "median", "p95", "censored_count"],
        [(n, s.mean, s.median, s.p95, s.censored_count) for n, s in rows],
    )
    write_json(
        out_dir / "flood_sweep.json",
        {"n": [n for n, _ in rows], "mean": means, "ratios": ratios},
        cfg,
        experiment,
    )


def cmd_ic(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Inter-contact pmf/ccdf CSV, optional empirical comparison and seconds export."""
    n = _n_values(args, 2)[0]
    params = resolve_params(args, n)
    k_max = args.kmax or cfg.intercontact.k_max
    out_dir = _output_dir(args, cfg.output.ic_dir)
    experiment = ExperimentConfig(
        command="ic",
        seed=seed,
        params=params.model_dump(),
        n_values=[n],
        options={"k_max": k_max, "empirical": args.empirical, "steps": args.steps, "aggregate": args.aggregate},
    )

    dist = ic_pmf(params, k_max, cfg.intercontact.tail_epsilon)
    write_csv(out_dir / "ic.csv", ["k", "pmf", "ccdf"], dist.rows())
    summary: dict[str, Any] = {
        "horizon": dist.horizon,
        "tail_mass": dist.tail_mass,
        "mean": mean_intercontact(params),
    }

    if args.seconds:
        step = args.step_seconds or cfg.fit.step_seconds
        ks = steps_from_seconds(args.seconds, step)
        values = ccdf_at_seconds(params, args.seconds, step)
        write_csv(out_dir / "ic_seconds.csv", ["t_seconds", "k", "ccdf"], zip(args.seconds, ks.tolist(), values))

    if args.empirical:
        steps = args.steps or 10_000_000
        rng = UniformField(seed).generator(0, purpose=_PURPOSE_EMPIRICAL_IC)
        empirical = empirical_ic(params, steps, rng, aggregate=args.aggregate, min_gaps=cfg.intercontact.min_gaps)
        write_csv(out_dir / "ic_empirical.csv", ["k", "pmf", "ccdf"], empirical.rows())
        tv_k = min(50, dist.horizon)
        summary["empirical"] = {
            "samples": empirical.samples,
            "mean": empirical.mean(),
            "tv_distance": total_variation(dist, empirical, tv_k),
            "tv_k_max": tv_k,
        }
        logger.info(f"Empirical vs analytic TV distance (k <= {tv_k}): {summary['empirical']['tv_distance']:.4f}")

    write_json(out_dir / "ic.json", summary, cfg, experiment)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Fit a CCDF trace and write the parameters with their derived columns."""
    trace = load_trace(Path(args.trace))
    result = fit(trace, cfg.fit, seed)
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
    else:
        cfg.output.fit_dir.mkdir(parents=True, exist_ok=True)
        out_path = cfg.output.fit_dir / f"{trace.name}.json"
    experiment = ExperimentConfig(
        command="fit",
        seed=seed,
        options={"trace": str(args.trace), "points": len(trace.points), "step_seconds": trace.step_seconds},
    )
    write_json(out_path, {"trace": trace.name, "result": result.to_dict()}, cfg, experiment)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Bound report (and phase schedule when applicable) per n, JSON on stdout or --out."""
    reports = []
    for n in _n_values(args, 2):
        params = resolve_params(args, n)
        report = bound_report(params).to_dict()
        schedule: Optional[dict] = None
        if report["thm2_applicable"] and n >= 2:
            schedule = phase_schedule(params).to_dict()
        reports.append({"params": params.model_dump(), "report": report, "phase_schedule": schedule})

    experiment = ExperimentConfig(command="bounds", seed=seed, n_values=_n_values(args, 2))
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        write_json(out_path, {"bounds": reports}, cfg, experiment)
    else:
        document = {"schema_version": cfg.output.schema_version, "config": experiment.model_dump(mode="json"), "bounds": reports}
        print(json.dumps(_clean_float(document), indent=2, default=_json_default))
    return EXIT_OK


def _verify_lemma1(params: HomeMegParams, cfg: HomeMegSettings, trials: int, seed: int) -> tuple[bool, dict]:
    sigma = cfg.verification.sigma
    ls = list(range(1, cfg.verification.lemma_max_l + 1))
    rng = UniformField(seed).generator(0, purpose=_PURPOSE_VERIFY)
    checks = estimate_home_disconnection(params, ls, trials, rng)
    specialization_ok = all(home_specialization(params, l) <= home_disconnection_bound(params, l) + 1e-12 for l in ls)
    passed = specialization_ok and all(check.passed(sigma) for check in checks)
    return passed, {"checks": [c.to_dict(sigma) for c in checks], "specialization_below_corollary": specialization_ok}


def _verify_lambda_lb(params: HomeMegParams, cfg: HomeMegSettings, trials: int, seed: int) -> tuple[bool, dict]:
    sigma = cfg.verification.sigma
    l_max = min(max_connection_window(params), cfg.verification.lemma_max_l)
    rng = UniformField(seed).generator(0, purpose=_PURPOSE_VERIFY)
    checks = estimate_connection_probability(params, list(range(0, l_max + 1)), trials, rng)
    passed = all(check.passed(sigma) for check in checks)
    return passed, {"checks": [c.to_dict(sigma) for c in checks], "l_max": l_max}


def _verify_coupling(params: HomeMegParams, cfg: HomeMegSettings, trials: int, seed: int) -> tuple[bool, dict]:
    horizon = default_horizon(params)
    uniforms = UniformField(seed)
    rows = []
    failures = 0
    for trial in range(trials):
        runs = coupled_flooding(params, 0, horizon, uniforms.spawn(trial + 1))
        ok = runs.ordered and runs.edge_violations == 0 and runs.set_violations == 0
        failures += not ok
        rows.append(
            {
                "trial": trial,
                "times": list(runs.times),
                "edge_violations": runs.edge_violations,
                "set_violations": runs.set_violations,
                "ordered": runs.ordered,
            }
        )
    return failures == 0, {"trials": rows, "failures": failures, "horizon": horizon}


def _verify_oracle(params: HomeMegParams, cfg: HomeMegSettings, trials: int, seed: int) -> tuple[bool, dict]:
    horizon = default_horizon(params)
    exact = exact_flooding_distribution(params, 0, horizon)
    estimate = flooding_time_estimate(params, None, horizon, trials, UniformField(seed), [0])
    stats = estimate.per_source[0]
    tv = exact.total_variation(stats.times, stats.censored)
    passed = tv < cfg.verification.oracle_tv
    return passed, {"tv_distance": tv, "threshold": cfg.verification.oracle_tv, "exact_mean": exact.mean(), "mc_mean": stats.mean}


@dataclass(frozen=True)
class _Verifier:
    run: Callable[[HomeMegParams, HomeMegSettings, int, int], tuple[bool, dict]]
    trials: Callable[[HomeMegSettings], int]
    n: Callable[[HomeMegSettings], int]


_VERIFIERS: dict[str, _Verifier] = {
    "lemma1": _Verifier(_verify_lemma1, lambda c: c.verification.mc_trials, lambda c: 2),
    "lambda-lb": _Verifier(_verify_lambda_lb, lambda c: c.verification.mc_trials, lambda c: 2),
    "coupling": _Verifier(_verify_coupling, lambda c: c.verification.coupling_trials, lambda c: c.verification.coupling_n),
    "oracle": _Verifier(_verify_oracle, lambda c: c.verification.oracle_trials, lambda c: c.verification.oracle_n),
}


def cmd_verify(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Run one statistical check; exit 1 when it fails."""
    verifier = _VERIFIERS[args.check]
    n = args.n[0] if args.n else verifier.n(cfg)
    params = resolve_params(args, n, fallback=VERIFY_DEFAULTS[args.check])
    trials = args.trials or verifier.trials(cfg)
    logger.info(f"Verifying {args.check} with {trials} trials at n={n}")

    passed, details = verifier.run(params, cfg, trials, seed)
    experiment = ExperimentConfig(
        command="verify", seed=seed, params=params.model_dump(), n_values=[n], trials=trials, options={"check": args.check}
    )
    out_dir = _output_dir(args, cfg.output.output_dir / "verify")
    write_json(out_dir / f"verify_{args.check}.json", {"check": args.check, "passed": passed, **details}, cfg, experiment)

    if passed:
        logger.info(f"Check {args.check} passed")
        return EXIT_OK
    logger.error(f"Check {args.check} FAILED")
    return EXIT_VERIFY_FAILED


def cmd_couple(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Coupled flooding times per trial; exit 1 on any sandwich violation."""
    n = _n_values(args, cfg.verification.coupling_n)[0]
    params = resolve_params(args, n)
    trials = args.trials or cfg.verification.coupling_trials
    horizon = args.horizon or cfg.simulation.horizon or default_horizon(params)
    out_dir = _output_dir(args, cfg.output.output_dir / "couple")
    uniforms = UniformField(seed)

    rows = []
    failures = 0
    for trial in range(trials):
        runs = coupled_flooding(params, args.source, horizon, uniforms.spawn(trial + 1))
        failures += not (runs.ordered and runs.edge_violations == 0 and runs.set_violations == 0)
        t_p, t_h, t_q = runs.times
        rows.append((trial, t_p, t_h, t_q, runs.edge_violations, runs.set_violations))

    write_csv(out_dir / "couple.csv", ["trial", "t_er_p", "t_meg", "t_er_q", "edge_violations", "set_violations"], rows)
    experiment = ExperimentConfig(
        command="couple", seed=seed, params=params.model_dump(), n_values=[n], trials=trials, horizon=horizon
    )
    write_json(out_dir / "couple.json", {"trials": trials, "failures": failures}, cfg, experiment)
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


def cmd_presets(args: argparse.Namespace, cfg: HomeMegSettings, seed: int) -> int:
    """Print the presets as CSV with their derived columns."""
    writer = csv.writer(sys.stdout)
    writer.writerow(["name", "p", "q", "alpha", "gamma", "p_H", "alpha_over_gamma", "p_plus_q"])
    for name in PRESETS:
        params = preset_params(name)
        derived = derived_columns(params)
        writer.writerow(
            [name, params.p, params.q, params.alpha, params.gamma, derived["p_H"], derived["alpha_over_gamma"], derived["p_plus_q"]]
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _add_param_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model parameters")
    group.add_argument("--preset", choices=sorted(PRESETS), help="Best-fit parameter preset")
    group.add_argument("--corollary-eps", "--eps", dest="corollary_eps", type=float, help="Sparse regime exponent in (0, 1)")
    group.add_argument("--n", type=parse_int_list, help="Number of nodes (comma list for sweeps)")
    group.add_argument("--p", type=float, help="P(Non-Home -> Home)")
    group.add_argument("--q", type=float, help="P(Home -> Non-Home)")
    group.add_argument("--alpha", type=float, help="P(contact | Home)")
    group.add_argument("--gamma", type=float, help="P(contact | Non-Home)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML file layered over environment settings")
    common.add_argument("--seed", type=int, help="Master seed (HOMEMEG_SEED overrides)")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--out", help="Output directory (file for fit/bounds)")

    parser = argparse.ArgumentParser(
        prog="home-meg",
        description="Home-MEG evolving graph toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s flood --corollary-eps 0.5 --n 64,128,256 --trials 500 --seed 7
  %(prog)s ic --preset mit-cell --kmax 100000
  %(prog)s fit --trace synthetic.csv --out fit.json
  %(prog)s bounds --preset mit-cell --n 1000
  %(prog)s verify --check coupling --trials 100
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    flood = sub.add_parser("flood", parents=[common], help="Monte Carlo flooding times")
    _add_param_options(flood)
    flood.add_argument("--trials", type=parse_count, help="Trials per source")
    flood.add_argument("--horizon", type=parse_count, help="Censoring horizon in steps")
    flood.add_argument("--init", help="'stationary', 'all:<HC|HD|NC|ND>' or 'file:<snapshot.json>'")
    flood.add_argument("--sources", type=parse_int_list, help="Comma list of sources")
    flood.add_argument("--sweep-sources", action="store_true", help="Flood from every node")
    flood.set_defaults(handler=cmd_flood)

    ic = sub.add_parser("ic", parents=[common], help="Inter-contact distribution")
    _add_param_options(ic)
    ic.add_argument("--kmax", type=parse_count, help="Analytic horizon")
    ic.add_argument("--empirical", action="store_true", help="Also simulate and compare")
    ic.add_argument("--steps", type=parse_count, help="Simulated steps per edge (default 1e7)")
    ic.add_argument("--aggregate", action="store_true", help="Pool gaps over all n(n-1)/2 edges")
    ic.add_argument("--seconds", type=parse_float_list, help="Export the ccdf at these times (seconds)")
    ic.add_argument("--step-seconds", type=float, help="Seconds per step for --seconds")
    ic.set_defaults(handler=cmd_ic)

    fit_parser = sub.add_parser("fit", parents=[common], help="Fit parameters to a CCDF trace")
    fit_parser.add_argument("--trace", required=True, type=Path, help="CSV with t_seconds,ccdf")
    fit_parser.set_defaults(handler=cmd_fit)

    bounds = sub.add_parser("bounds", parents=[common], help="Bound arguments and phase schedule")
    _add_param_options(bounds)
    bounds.set_defaults(handler=cmd_bounds)

    verify = sub.add_parser("verify", parents=[common], help="Statistical bound checks")
    _add_param_options(verify)
    verify.add_argument("--check", required=True, choices=sorted(_VERIFIERS))
    verify.add_argument("--trials", type=parse_count)
    verify.set_defaults(handler=cmd_verify)

    couple = sub.add_parser("couple", parents=[common], help="Coupled G^p / H / G^q flooding")
    _add_param_options(couple)
    couple.add_argument("--trials", type=parse_count)
    couple.add_argument("--horizon", type=parse_count)
    couple.add_argument("--source", type=int, default=0)
    couple.set_defaults(handler=cmd_couple)

    presets = sub.add_parser("presets", parents=[common], help="List parameter presets")
    presets.set_defaults(handler=cmd_presets)
    return parser


def configure_logging(level: str) -> None:
    """Root logging on stderr so stdout stays machine-readable."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = HomeMegSettings.from_toml(args.config) if args.config else HomeMegSettings()
    except OSError as e:
        configure_logging("INFO")
        logger.error(f"Cannot read config {args.config}: {e}")
        return EXIT_IO
    except (ValidationError, ValueError) as e:
        configure_logging("INFO")
        logger.error(f"Invalid config {args.config}: {e}")
        return EXIT_USAGE
    configure_logging(args.log_level or cfg.log_level)

    try:
        seed = resolve_seed(args, cfg)
        return args.handler(args, cfg, seed)
    except (HomeMegError, ValidationError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{args.command}: I/O error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

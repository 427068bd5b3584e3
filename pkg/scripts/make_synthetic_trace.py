#!/usr/bin/env python3
"""Write a synthetic inter-contact CCDF trace for `home-meg fit`.

Samples the model CCDF of a preset (or explicit parameters) at
log-spaced times and writes the `t_seconds,ccdf` CSV that load_trace
reads.

Usage:
    ./scripts/make_synthetic_trace.py OUTPUT [--preset NAME] [--points N]

Examples:
    # 12 points from the infocom06 preset
    ./scripts/make_synthetic_trace.py synthetic.csv --preset infocom06

    # Explicit parameters, 20 points up to 10^5 seconds
    ./scripts/make_synthetic_trace.py t.csv --params 0.003,0.025,0.07,0.0003 --points 20 --max-seconds 1e5

Exit codes:
    0: Trace written
    1: Error (bad parameters or unwritable output)
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from home_meg.errors import HomeMegError
from home_meg.fitting import CcdfTrace, save_trace, trace_from_params
from home_meg.params import PRESETS, HomeMegParams, preset_params

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout),
    ],
)

logger = logging.getLogger(__name__)


def synthetic_trace(
    params: HomeMegParams,
    points: int,
    min_seconds: float,
    max_seconds: float,
    step_seconds: float,
) -> CcdfTrace:
    """CCDF of `params` at `points` log-spaced distinct step counts."""
    seconds = np.logspace(np.log10(min_seconds), np.log10(max_seconds), points)
    steps = np.unique(np.maximum(np.rint(seconds / step_seconds), 1))
    return trace_from_params(params, (steps * step_seconds).tolist(), step_seconds)


def main() -> int:
    """Main entry point.

    Returns:
        0 if the trace was written, 1 if an error occurred
    """
    parser = argparse.ArgumentParser(
        description="Write a synthetic CCDF trace",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("output", type=Path, help="CSV file to write")
    parser.add_argument("--preset", choices=sorted(PRESETS), default="infocom06")
    parser.add_argument("--params", help="Explicit p,q,alpha,gamma (overrides --preset)")
    parser.add_argument("--points", type=int, default=12)
    parser.add_argument("--min-seconds", type=float, default=86.4)
    parser.add_argument("--max-seconds", type=float, default=86.4 * 5000)
    parser.add_argument("--step-seconds", type=float, default=86.4)
    args = parser.parse_args()

    try:
        if args.params:
            p, q, alpha, gamma = (float(v) for v in args.params.split(","))
            params = HomeMegParams.create(n=2, p=p, q=q, alpha=alpha, gamma=gamma)
        else:
            params = preset_params(args.preset)
        trace = synthetic_trace(params, args.points, args.min_seconds, args.max_seconds, args.step_seconds)
        save_trace(trace, args.output)
    except (HomeMegError, ValueError) as e:
        logger.error(f"Cannot build trace: {e}")
        return 1
    except OSError as e:
        logger.error(f"Cannot write {args.output}: {e}")
        return 1

    logger.info(f"Wrote {len(trace.points)} points to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

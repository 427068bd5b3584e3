#!/usr/bin/env python3
"""Flooding-time growth in the sparse corollary regime.

Runs flooding from source 0 for each n with alpha = n^eps/n,
gamma = 1/n^2, p = 1/n^(1+eps), q = 1/n and prints the mean completion
time per n together with the ratios T(2n)/T(n). Logarithmic growth keeps
the ratios well below 1.6.

Usage:
    ./scripts/corollary_growth.py [--eps EPS] [--n 64,128,256,512] [--trials N] [--seed S]

Examples:
    # Default sweep
    ./scripts/corollary_growth.py

    # Quick look with fewer trials
    ./scripts/corollary_growth.py --trials 50 --n 32,64,128

Exit codes:
    0: Every consecutive ratio <= --max-ratio
    1: Some ratio exceeded --max-ratio, or an error occurred
"""

import argparse
import logging
import math
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from home_meg.config import settings
from home_meg.errors import HomeMegError
from home_meg.flooding import flooding_time_estimate
from home_meg.params import corollary_params
from home_meg.uniforms import UniformField

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout),
    ],
)

logger = logging.getLogger(__name__)


def growth_means(n_values: list[int], eps: float, trials: int, seed: int) -> list[float]:
    """Mean completion time from source 0 for each n (censored runs at the horizon)."""
    uniforms = UniformField(seed)
    means = []
    for n in n_values:
        params = corollary_params(n, eps)
        estimate = flooding_time_estimate(params, None, None, trials, uniforms, [0])
        means.append(estimate.overall.mean)
        logger.info(
            f"n={n}: mean {estimate.overall.mean:.3f}, "
            f"censored {estimate.overall.censored_count}/{trials}"
        )
    return means


def growth_ratios(means: list[float]) -> list[float]:
    return [b / a if a > 0 else math.inf for a, b in zip(means, means[1:])]


def main() -> int:
    """Main entry point.

    Returns:
        0 if growth looks logarithmic, 1 otherwise
    """
    parser = argparse.ArgumentParser(
        description="Corollary-regime flooding growth sweep",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--eps", type=float, default=0.5, help="Regime exponent (default: 0.5)")
    parser.add_argument(
        "--n",
        default="64,128,256,512",
        help="Comma-separated node counts (default: 64,128,256,512)",
    )
    parser.add_argument("--trials", type=int, default=500, help="Trials per n (default: 500)")
    parser.add_argument("--seed", type=int, default=settings.simulation.seed)
    parser.add_argument("--max-ratio", type=float, default=1.6, help="Largest acceptable T(2n)/T(n)")
    args = parser.parse_args()

    try:
        n_values = [int(part) for part in args.n.split(",")]
        means = growth_means(n_values, args.eps, args.trials, args.seed)
    except (HomeMegError, ValueError) as e:
        logger.error(f"Sweep failed: {e}")
        return 1

    ratios = growth_ratios(means)
    print("n,mean_completion_time")
    for n, mean in zip(n_values, means):
        print(f"{n},{mean:.4f}")
    for (a, b), ratio in zip(zip(n_values, n_values[1:]), ratios):
        print(f"# T({b})/T({a}) = {ratio:.3f}")

    worst = max(ratios, default=0.0)
    if worst > args.max_ratio:
        logger.error(f"Largest ratio {worst:.3f} exceeds {args.max_ratio}")
        return 1
    logger.info(f"Largest ratio {worst:.3f} <= {args.max_ratio}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

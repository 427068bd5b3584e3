#!/usr/bin/env python3
"""Write a Home-MEG snapshot E_0 to JSON for `home-meg flood --init file:...`.

Usage:
    ./scripts/sample_snapshot.py OUTPUT --n N [--preset NAME] [--init MODE] [--seed S]

Examples:
    # Stationary E_0 of the mit-cell preset on 50 nodes
    ./scripts/sample_snapshot.py e0.json --n 50 --preset mit-cell --seed 3

    # Every edge in Home, disconnected
    ./scripts/sample_snapshot.py e0.json --n 50 --init all:HD

Exit codes:
    0: Snapshot written
    1: Error (bad parameters or unwritable output)
"""

import argparse
import logging
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from home_meg.errors import HomeMegError
from home_meg.graph import GraphSnapshot, parse_init_mode, sample_initial
from home_meg.params import PRESETS, HomeMegParams, preset_params
from home_meg.uniforms import UniformField

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout),
    ],
)

logger = logging.getLogger(__name__)


def initial_snapshot(params: HomeMegParams, init: str, seed: int) -> GraphSnapshot:
    """E_0 drawn exactly as a flooding run with this seed would draw it."""
    return sample_initial(params, parse_init_mode(init), UniformField(seed))


def main() -> int:
    """Main entry point.

    Returns:
        0 if the snapshot was written, 1 if an error occurred
    """
    parser = argparse.ArgumentParser(
        description="Write an initial Home-MEG snapshot",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("output", type=Path, help="JSON file to write")
    parser.add_argument("--n", type=int, required=True, help="Number of nodes")
    parser.add_argument("--preset", choices=sorted(PRESETS), default="infocom06")
    parser.add_argument("--params", help="Explicit p,q,alpha,gamma (overrides --preset)")
    parser.add_argument("--init", default="stationary", help="'stationary' or 'all:<STATE>'")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    try:
        if args.params:
            p, q, alpha, gamma = (float(v) for v in args.params.split(","))
            params = HomeMegParams.create(n=args.n, p=p, q=q, alpha=alpha, gamma=gamma)
        else:
            params = preset_params(args.preset, args.n)
        snapshot = initial_snapshot(params, args.init, args.seed)
        snapshot.save(args.output)
    except (HomeMegError, ValueError) as e:
        logger.error(f"Cannot build snapshot: {e}")
        return 1
    except OSError as e:
        logger.error(f"Cannot write {args.output}: {e}")
        return 1

    logger.info(f"Wrote {int(snapshot.connected.sum())}/{snapshot.states.size} connected edges to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

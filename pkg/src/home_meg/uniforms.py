"""Addressable uniform random field U_t(e).

Each (stream, t) pair owns an independent numpy generator derived from the
master seed through a SeedSequence spawn key, so the uniform consumed by
edge e at time t is the e-th draw of that generator no matter how the
trajectory got there. Coupled processes share one field; independent
trials use distinct streams.
"""

import numpy as np


class UniformField:
    """Family of independent uniforms on [0, 1) indexed by (t, e)."""

    def __init__(self, seed: int, stream: int = 0):
        if seed < 0 or stream < 0:
            raise ValueError(f"seed and stream must be non-negative, got seed={seed}, stream={stream}")
        self.seed = seed
        self.stream = stream

    def __repr__(self) -> str:
        return f"UniformField(seed={self.seed}, stream={self.stream})"

    def generator(self, t: int, purpose: int = 0) -> np.random.Generator:
        """Generator owning all draws of time step t (purpose separates side draws)."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, purpose, t))
        return np.random.default_rng(sequence)

    def at(self, t: int, size: int) -> np.ndarray:
        """Vector (U_t(0), ..., U_t(size-1))."""
        return self.generator(t).random(size)

    def value(self, t: int, edge: int) -> float:
        """Single uniform U_t(edge)."""
        return float(self.at(t, edge + 1)[edge])

    def spawn(self, stream: int) -> "UniformField":
        """Independent field for another trial, same master seed."""
        return UniformField(self.seed, stream)

"""Counter-based random streams.

Every stochastic routine in the package draws from a Philox generator
keyed by (seed, stream index).  Streams with distinct indices are
statistically independent, so chunked work can be parallelized and merged
in any order while staying bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def philox_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for chunk ``stream`` of the experiment keyed by ``seed``."""
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def uniform_sphere(rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, 3) array of isotropic unit vectors."""
    z = 2.0 * rng.random(size) - 1.0
    phi = 2.0 * np.pi * rng.random(size)
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)

"""Counter-style RNG substreams derived from a master seed.

Every random unit of work (a replication, a subsample, ...) gets its own
generator keyed by a tuple of integers, so results do not depend on the
order in which units are evaluated or on how they are scheduled.
"""

from __future__ import annotations

import numpy as np



def seed_sequence(seed, *key: int) -> np.random.SeedSequence:
    """SeedSequence for ``key`` below ``seed`` (an int or another SeedSequence)."""
    key = tuple(int(k) for k in key)
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            seed.entropy, spawn_key=tuple(seed.spawn_key) + key, pool_size=seed.pool_size
        )
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an int or SeedSequence, got {type(seed).__name__}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.SeedSequence(int(seed), spawn_key=key)


def substream(seed, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *key)))

"""Counter-based random streams.

Every random draw in the package comes from ``rng_for(seed, stream, *keys)``,
a generator seeded by the full integer tuple through ``SeedSequence``.  A
resample with index ``k`` therefore sees the same numbers no matter which
thread runs it or in what order.
"""

from __future__ import annotations

import numpy as np

SPLIT_STREAM = 0
RESAMPLE_STREAM = 1
INIT_STREAM = 2
SYNTH_STREAM = 3


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.default_rng(np.random.SeedSequence([seed, *(int(k) for k in keys)]))

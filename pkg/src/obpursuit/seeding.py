"""Deterministic, splittable random streams.

All randomness in the package flows through counter-based Philox streams
keyed by (master seed, *stream ids).  Distinct id tuples give independent
streams, so trials can run in any order (or in parallel) and still
reproduce bit-identical results.
"""

from __future__ import annotations

import numpy as np


def stream(master_seed: int, *ids: int) -> np.random.Generator:
    """Return the RNG for stream `ids` under `master_seed`."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))

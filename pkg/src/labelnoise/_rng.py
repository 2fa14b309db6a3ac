"""Seeding helpers.

All stochastic operations take an integer seed and build a counter-based
Philox generator from it, so results are bit-reproducible and streams for
different (seed, path) combinations are independent regardless of
execution order or worker count.
"""

from __future__ import annotations

import numpy as np


def generator(seed: int) -> np.random.Generator:
    """Counter-based generator for a single integer seed."""
    return np.random.Generator(np.random.Philox(seed))


def child_seeds(root_seed: int, *path: int, n: int = 1) -> list[int]:
    """Derive ``n`` independent integer seeds for a (root, *path) node.

    Uses SeedSequence so the derivation is deterministic and collision
    resistant across paths; e.g. (root, cell, run) in an experiment grid.
    """
    ss = np.random.SeedSequence([int(root_seed), *map(int, path)])
    return [int(s) for s in ss.generate_state(n, np.uint64)]

"""Shared generators for randomized property checks (always seeded)."""

from __future__ import annotations

import numpy as np

from sl_extremal import StepPotential


def random_step(
    rng: np.random.Generator,
    max_height: float = 50.0,
    max_cells: int = 10,
    min_height: float = 0.0,
) -> StepPotential:
    k = int(rng.integers(2, max_cells + 1))
    inner = np.sort(rng.uniform(0.02, 0.98, size=k - 1))
    breakpoints = np.concatenate(([0.0], inner, [1.0]))
    heights = rng.uniform(min_height, max_height, size=k)
    return StepPotential(breakpoints, heights)


def random_positive_step(rng: np.random.Generator, max_cells: int = 8) -> StepPotential:
    return random_step(rng, max_height=5.0, max_cells=max_cells, min_height=0.2)

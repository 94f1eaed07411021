"""Seeded random instances in general position.

A splitmix64 pass turns the user seed into the 64-bit seed of numpy's
PCG64 stream; coordinates are uniform on ``[0, bound]`` and any point that
repeats an existing one or is collinear with two of them is redrawn.
"""
from __future__ import annotations

from math import gcd

import numpy as np

from .geometry import COORD_LIMIT, PointSet

MASK64 = (1 << 64) - 1
DEFAULT_BOUND = 1000


def splitmix64(state: int) -> tuple[int, int]:
    """One step: returns (output, next_state)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), state


def rng_for(seed: int) -> np.random.Generator:
    out, _ = splitmix64(seed & MASK64)
    return np.random.Generator(np.random.PCG64(out))


def _direction(dx: int, dy: int) -> tuple[int, int]:
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        return -dx, -dy
    return dx, dy


def _fits(p: tuple[int, int], pts: list[tuple[int, int]]) -> bool:
    seen = set()
    for q in pts:
        if q == p:
            return False
        d = _direction(q[0] - p[0], q[1] - p[1])
        if d in seen:
            return False
        seen.add(d)
    return True


def generate_instance(seed: int, n: int, bound: int = DEFAULT_BOUND, max_draws: int | None = None) -> PointSet:
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 1 <= bound <= COORD_LIMIT:
        raise ValueError("bound must lie in [1, 2^30]")
    rng = rng_for(seed)
    limit = max_draws if max_draws is not None else 1000 * n
    pts: list[tuple[int, int]] = []
    draws = 0
    while len(pts) < n:
        draws += 1
        if draws > limit:
            raise RuntimeError(f"could not place {n} points in general position within [0, {bound}]^2")
        x, y = (int(v) for v in rng.integers(0, bound, size=2, endpoint=True))
        if _fits((x, y), pts):
            pts.append((x, y))
    return PointSet(tuple(pts))

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

MODES = ("cg", "full", "compact", "oracle")


@dataclass
class SolverConfig:
    mode: str = "cg"
    time_limit: Optional[float] = None  # seconds, wall clock
    smoothing: float = 0.55  # Wentges lambda; 0 disables
    column_cap: int = 200
    seed: int = 0
    polygon_cap: int = 5_000_000
    full_max_n: int = 40
    degree_cuts: bool = True
    node_heuristic: bool = True
    heuristic_time_cap: float = 5.0
    lp_backend: str = "highs"
    audit_log: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0.0 <= self.smoothing < 1.0:
            raise ValueError("smoothing must lie in [0, 1)")
        if self.column_cap < 1:
            raise ValueError("column_cap must be positive")

"""Default numerical configuration shared by the library, CLI and tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Defaults:
    """Desk-scale defaults.

    The window sits on the flat part of the taper used by the fixtures
    (``w == 1`` on ``[-1/2, 1/2]``); wider windows let the taper's O(1)
    derivatives dominate weak ``n**s`` growth across the whole ladder.
    """

    n_grid: int = 2**18
    x_min: float = -4.0
    x_max: float = 4.0
    window: tuple[float, float] = (-0.5, 0.5)
    n_min: float = 8.0
    n_max: float = 2048.0
    per_octave: int = 2
    tail_fraction: float = 0.5
    oversampling: int = 8
    radius_tol: float = 1e-12
    saturation_threshold: float = 0.05
    s_cap: float = 0.1
    lp_order: int = 8
    lp_epsilon: float = 1.0
    # 2**12 = 1/(q h) at the default grid; 13 levels give an odd tail count,
    # which cancels the period-2 level ripple of b = 4 lacunary signals
    lp_J: int = 12

    @property
    def box(self) -> tuple[float, float]:
        return (self.x_min, self.x_max)

    def ladder(self) -> np.ndarray:
        return geometric_ladder(self.n_min, self.n_max, self.per_octave)

    def lp_levels(self) -> int:
        return self.lp_J


DEFAULTS = Defaults()


def geometric_ladder(n_min: float, n_max: float, per_octave: int = 2) -> np.ndarray:
    """Scales ``n_min * 2**(j / per_octave)`` up to and including ``n_max``."""
    if n_min <= 0 or n_max <= n_min:
        raise ValueError(f"need 0 < n_min < n_max, got {n_min}, {n_max}")
    if per_octave < 1:
        raise ValueError("per_octave must be >= 1")
    count = int(np.floor(per_octave * np.log2(n_max / n_min) + 1e-9)) + 1
    return n_min * 2.0 ** (np.arange(count) / per_octave)

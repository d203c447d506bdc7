from __future__ import annotations

import math

from .errors import DomainError

# Radicands in [-ROUNDOFF, 0) are treated as round-off and clamped to zero.
ROUNDOFF = 1e-12
# below this success probability the post-selected clone is undefined
GAMMA_FLOOR = 1e-14


def clamped_sqrt(x: float, what: str = "square-root argument") -> float:
    if x < 0.0:
        if x < -ROUNDOFF:
            raise DomainError(f"{what} is negative ({x:.3e})")
        return 0.0
    return math.sqrt(x)

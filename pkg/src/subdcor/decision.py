"""Direction decisions and the relative-gap confidence proxy."""

from __future__ import annotations

import math
from enum import Enum

from .errors import InvalidInputError


class Decision(str, Enum):
    X_TO_Y = "x->y"
    Y_TO_X = "y->x"
    TIE = "tie"


def decide(forward: float, backward: float) -> Decision:
    """Smaller dependence score marks the causal direction."""
    if forward < backward:
        return Decision.X_TO_Y
    if forward > backward:
        return Decision.Y_TO_X
    return Decision.TIE


def relative_gap(s_f: float, s_b: float) -> float:
    """``|s_f - s_b| / max(s_f, s_b)``, or 0 when both scores are 0.

    >>> relative_gap(0.2, 0.8)
    0.75
    """
    if not (math.isfinite(s_f) and math.isfinite(s_b)) or s_f < 0 or s_b < 0:
        raise InvalidInputError(f"scores must be finite and non-negative, got {(s_f, s_b)}")
    top = max(s_f, s_b)
    if top == 0:
        return 0.0
    return abs(s_f - s_b) / top

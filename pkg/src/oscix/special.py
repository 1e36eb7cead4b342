"""Real Gamma function on the positive axis."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError


@dataclass(frozen=True)
class GammaConfig:
    accuracy: float = 1e-13
    x_max: float = 50.0

    def __post_init__(self):
        if not (0.0 < self.accuracy <= 1e-6):
            raise DomainError(f"gamma accuracy must lie in (0, 1e-6], got {self.accuracy}")
        if not (0.0 < self.x_max <= 50.0):
            raise DomainError("gamma argument domain is (0, 50]")


DEFAULT_GAMMA = GammaConfig()


def gamma_pos(x: float, config: GammaConfig = DEFAULT_GAMMA) -> float:
    """Gamma(x) for 0 < x <= 50.

    Backed by the C library ``tgamma`` through :func:`math.gamma`, which is
    accurate to a few ulp on this range and therefore meets any admissible
    ``config.accuracy``.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_pos needs x > 0, got {x}")
    if x > config.x_max:
        raise DomainError(f"gamma_pos argument {x} outside (0, {config.x_max}]")
    return math.gamma(x)

"""Flight power and straight-line energy accounting.

Power is a quadratic polynomial of cruise speed, ``P(s) = c0 + c1 s +
c2 s^2`` in watts; a straight flight of ``d`` meters at constant speed ``s``
then consumes ``P(s) * d / s`` joules (power times flight time).  The
default model is a constant 200 W, which is only a placeholder scale: the
interesting quantity downstream is how mission energy varies with swarm
size, not its absolute value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["PowerModel", "e_fly", "trial_energy"]


@dataclass(frozen=True)
class PowerModel:
    """Coefficients of P(s) = c0 + c1 s + c2 s^2 (W, W·s/m, W·s²/m²)."""

    c0: float = 200.0
    c1: float = 0.0
    c2: float = 0.0

    def power(self, speed: float) -> float:
        """Electrical power draw in watts at the given cruise speed."""
        if not (speed > 0.0) or not math.isfinite(speed):
            raise ValueError(f"speed must be positive, got {speed!r}")
        p = self.c0 + self.c1 * speed + self.c2 * speed * speed
        if p <= 0.0:
            raise ValueError(
                f"power model yields non-positive power {p} W at {speed} m/s"
            )
        return p


def e_fly(model: PowerModel, d: float, s: float) -> float:
    """Energy in joules for one vehicle flying ``d`` meters at speed ``s``."""
    if d < 0.0 or not math.isfinite(d):
        raise ValueError(f"distance must be non-negative, got {d!r}")
    return model.power(s) * d / s


def trial_energy(model: PowerModel, distance_flown: float, s: float, m: int) -> float:
    """Combined energy of all ``m`` vehicles flying the mission together.

    Every vehicle covers the same ``distance_flown``, so the swarm total is
    simply ``m`` times the single-vehicle energy.
    """
    if m < 1:
        raise ValueError(f"swarm size must be >= 1, got {m!r}")
    return m * e_fly(model, distance_flown, s)

"""Time-shrinking performance envelope.

The error bound rho(t) starts unbounded at t=0 (no constraint on the initial
condition), shrinks monotonically, and settles at the preset range ``c``
exactly at the settling time ``T1``.  The shrink is carried by a scaling
factor h(t): 1/h eases from 1 down to l = (2/pi)*arctan(c) along a raised
cosine, and the bound is rho(t) = tan(pi/(2 h(t))).  At t = T1 this collapses
to tan(arctan(c)) = c, so the handoff to the constant tail is continuous by
construction rather than by tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["Envelope", "h_value", "rho_value"]

_TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class Envelope:
    """Envelope parameters: settling time T1 > 0, preset range c > 0.

    The derived constant l = (2/pi)*arctan(c) lies in (0, 1); h ranges over
    [1, 1/l].  Immutable and safe for concurrent reads.
    """

    T1: float
    c: float
    l: float = field(init=False)

    def __post_init__(self):
        if not (isinstance(self.T1, (int, float)) and math.isfinite(self.T1) and self.T1 > 0.0):
            raise ValueError(f"T1 must be finite and positive, got {self.T1!r}")
        if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"c must be finite and positive, got {self.c!r}")
        object.__setattr__(self, "T1", float(self.T1))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "l", _TWO_OVER_PI * math.atan(self.c))


def _inv_h(env: Envelope, t: float) -> float:
    """1/h(t): eases from 1 at t=0 to l at t=T1, constant l afterwards."""
    if t >= env.T1:
        return env.l
    cs = math.cos(math.pi * t / (2.0 * env.T1))
    return env.l + (1.0 - env.l) * cs * cs

def h_value(env: Envelope, t: float) -> float:
    """Scaling factor h(t) for t >= 0; h(0) = 1 and h = 1/l for t >= T1."""
    return 1.0 / _inv_h(env, t)


def rho_value(env: Envelope, t: float) -> float:
    """Error bound rho(t) for t >= 0.

    Returns +inf at t = 0 (h(0) = 1 puts the tangent argument at pi/2); the
    envelope deliberately imposes no constraint at the initial instant.  For
    t in (0, T1] the bound is tan(pi/(2h)); beyond T1 it equals c exactly.
    """
    if t <= 0.0:
        return math.inf
    if t > env.T1:
        return env.c
    return math.tan(0.5 * math.pi * _inv_h(env, t))

"""Shifted tracking error and the barrier coordinate chain.

After a reference jump at t_k, the raw error e is scaled by mu(t - t_k) so
the working error z re-enters the envelope smoothly; with no prior jump,
z = e exactly.  The working error then maps through

    phi      = (2/pi) * arctan(z)     squashes R into (-1, 1)
    psi      = phi * h                envelope scaling; |psi| < 1 iff |z| < rho
    varsigma = artanh(psi)            barrier coordinate, finite iff inside
    varrho   = 1/(1 - psi^2)          barrier slope, >= 1

artanh blows up as |psi| -> 1, which is exactly how the controller feels the
boundary.  Evaluation within EPS_GUARD of the singularity raises
PerformanceViolation with full diagnostics; clamping instead would silently
mask the one event this machinery exists to surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .shift import ShiftFunction, eval_mu
from .signals import last_jump_before

__all__ = [
    "EPS_GUARD",
    "PerformanceViolation",
    "ChannelTransform",
    "shift_error",
    "transform_channel",
    "inverse_transform",
]

#: width of the numerical guard band around the |psi| = 1 singularity
EPS_GUARD = 1e-9

_GUARD_LIMIT = 1.0 - EPS_GUARD
_TWO_OVER_PI = 2.0 / math.pi


class PerformanceViolation(RuntimeError):
    """The working error reached the envelope boundary (|psi| >= 1 - guard).

    Carries the offending ``psi`` plus, when known, the channel index
    (1-based) and the time; the simulator attaches the partial trace as
    ``trace`` before propagating.
    """

    def __init__(self, psi: float, t: Optional[float] = None, channel: Optional[int] = None):
        self.psi = psi
        self.t = t
        self.channel = channel
        self.trace = None
        super().__init__(psi)

    def __str__(self):
        where = "" if self.channel is None else f" on channel {self.channel}"
        when = "" if self.t is None else f" at t={self.t:.6g}"
        return f"performance envelope violated{where}{when}: psi={self.psi:.12g}"


@dataclass(frozen=True)
class ChannelTransform:
    """Per-channel record of the full transform chain at one instant."""

    e: float
    z: float
    phi: float
    psi: float
    varsigma: float
    varrho: float


def chain(z: float, h: float):
    """(phi, psi, varsigma, varrho) for working error z and scaling h >= 1.

    This is the single arithmetic definition of the chain; both
    ``transform_channel`` and the backstepping cascade call it, so all code
    paths produce bit-identical values.
    """
    phi = _TWO_OVER_PI * math.atan(z)
    psi = phi * h
    if psi >= _GUARD_LIMIT or psi <= -_GUARD_LIMIT:
        raise PerformanceViolation(psi)
    varsigma = math.atanh(psi)
    varrho = 1.0 / (1.0 - psi * psi)
    return phi, psi, varsigma, varrho


def shift_error(e: float, t: float, jumps: Sequence[float], sf: ShiftFunction) -> float:
    """Working error z at time t: e itself, or mu(t - t_k) * e after a jump.

    The most recent jump strictly before ``t`` governs; at exactly a jump
    instant the pre-jump regime still applies.  Once t - t_k >= T the factor
    is exactly 1 and z == e again.
    """
    tk = last_jump_before(jumps, t)
    if tk is None:
        return e
    return eval_mu(sf, t - tk) * e


def transform_channel(z: float, h: float, e: Optional[float] = None) -> ChannelTransform:
    """Full chain record for working error ``z`` under scaling ``h``.

    ``e`` is the raw error stored alongside; it defaults to ``z`` (the two
    coincide whenever no shift window is active).  Raises
    PerformanceViolation when |psi| >= 1 - EPS_GUARD.
    """
    phi, psi, varsigma, varrho = chain(z, h)
    return ChannelTransform(
        e=z if e is None else e,
        z=z,
        phi=phi,
        psi=psi,
        varsigma=varsigma,
        varrho=varrho,
    )


def inverse_transform(varsigma: float, h: float) -> float:
    """Recover z from the barrier coordinate: z = tan((pi/2) tanh(varsigma)/h).

    Inverse of the z -> varsigma map of ``transform_channel``; requires
    |tanh(varsigma)/h| < 1.
    """
    ratio = math.tanh(varsigma) / h
    if not abs(ratio) < 1.0:
        raise ValueError(f"|tanh(varsigma)/h| = {abs(ratio)!r} is not < 1")
    return math.tan(0.5 * math.pi * ratio)

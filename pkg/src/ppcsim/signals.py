"""Composable scalar signals and piecewise reference trajectories.

Signals are small immutable expression trees (constant, sinusoid, ramp, sum,
scaled) that evaluate to a float at any finite time.  A reference trajectory
is an ordered list of signal segments with known switching instants.  The
value at a switching instant belongs to the segment that ends there (the
intervals are right-closed), so the jump itself is only visible to strictly
later samples.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Sinusoid:
    amplitude: float
    angular_frequency: float
    phase: float = 0.0


@dataclass(frozen=True)
class Ramp:
    slope: float
    intercept: float = 0.0


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Scaled:
    factor: float
    inner: "SignalExpr"


SignalExpr = Union[Constant, Sinusoid, Ramp, Sum, Scaled]


@lru_cache(maxsize=None)
def compile_signal(expr: SignalExpr) -> Callable[[float], float]:
    """Build a plain-float callable for ``expr``.

    The returned closure is what ``eval_signal`` calls internally, so both
    entry points produce bit-identical values; the simulator precompiles its
    disturbance and reference expressions through this function.
    """
    if isinstance(expr, Constant):
        v = expr.value
        return lambda t: v
    if isinstance(expr, Sinusoid):
        a, w, p = expr.amplitude, expr.angular_frequency, expr.phase
        return lambda t: a * math.sin(w * t + p)
    if isinstance(expr, Ramp):
        m, b = expr.slope, expr.intercept
        return lambda t: m * t + b
    if isinstance(expr, Sum):
        fns = tuple(compile_signal(term) for term in expr.terms)
        return lambda t: sum(fn(t) for fn in fns)
    if isinstance(expr, Scaled):
        k = expr.factor
        inner = compile_signal(expr.inner)
        return lambda t: k * inner(t)
    raise TypeError(f"not a signal expression: {expr!r}")


def eval_signal(expr: SignalExpr, t: float) -> float:
    """Value of the signal at time ``t`` (total and finite for finite t)."""
    return compile_signal(expr)(t)


@dataclass(frozen=True)
class Segment:
    """One reference piece, active on the interval (previous end, end_time]."""

    end_time: float
    expr: SignalExpr


@dataclass(frozen=True)
class PiecewiseReference:
    """Reference trajectory made of finitely many segments.

    The last segment must have ``end_time = inf``; interior end times are the
    jump instants.  On each interval (t_k, t_{k+1}] the reference equals that
    segment's expression, so at a jump instant the pre-jump value is returned.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("reference needs at least one segment")
        ends = [s.end_time for s in segs]
        if ends[-1] != math.inf:
            raise ValueError("final segment must have end_time = inf")
        for a, b in zip(ends, ends[1:]):
            if not a < b:
                raise ValueError("segment end times must be strictly increasing")
        for e in ends[:-1]:
            if not (math.isfinite(e) and e > 0.0):
                raise ValueError("interior segment boundaries must be finite and positive")
        object.__setattr__(self, "_ends", tuple(ends))


def eval_reference(ref: PiecewiseReference, t: float) -> float:
    """Reference value at ``t >= 0`` (pre-jump value at a jump instant)."""
    idx = bisect_left(ref._ends, t)
    return eval_signal(ref.segments[idx].expr, t)


def jump_instants(ref: PiecewiseReference) -> list:
    """Interior segment boundaries, ascending; empty for a single segment."""
    return [s.end_time for s in ref.segments[:-1]]


def last_jump_before(jumps: Sequence[float], t: float) -> Optional[float]:
    """Largest jump instant strictly before ``t``, or None.

    Strictness matters: at exactly a jump instant the pre-jump regime still
    applies, matching the right-closed segment intervals.
    """
    i = bisect_left(jumps, t)
    if i == 0:
        return None
    return jumps[i - 1]

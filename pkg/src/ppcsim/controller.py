"""Derivative-free backstepping cascade.

Channel i measures its state against the previous channel's virtual control
(channel 1 against the reference), shifts the error by the active post-jump
window factor, pushes it through the barrier chain, and emits

    alpha_i = -k_i * varrho_i * varsigma_i

No derivative of any alpha or of the reference is ever formed: channel i+1
simply subtracts alpha_i from x_{i+1}.  The cascade is therefore a memoryless
pure function of (x, t), well defined even at the reference's jump instants,
and the same shift factor and envelope scaling are shared by every channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .envelope import Envelope, h_value
from .shift import ShiftFunction, eval_mu
from .signals import PiecewiseReference, eval_reference, last_jump_before
from .transform import ChannelTransform, PerformanceViolation, chain

__all__ = [
    "ControllerConfig",
    "ControlOutput",
    "CascadeResult",
    "run_cascade",
    "compute_control",
    "lyapunov_diagnostics",
]


@dataclass(frozen=True)
class ControllerConfig:
    """System order and the per-channel gains k_1..k_n (all positive)."""

    n: int
    gains: tuple

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"order must be an int >= 1, got {self.n!r}")
        gains = tuple(float(k) for k in self.gains)
        object.__setattr__(self, "gains", gains)
        if len(gains) != self.n:
            raise ValueError(f"need {self.n} gains, got {len(gains)}")
        for k in gains:
            if not (math.isfinite(k) and k > 0.0):
                raise ValueError(f"gains must be finite and positive, got {k!r}")


class CascadeResult(NamedTuple):
    """Raw cascade outputs as flat tuples; alphas[0] is the reference value."""

    alphas: tuple
    e: tuple
    z: tuple
    phi: tuple
    psi: tuple
    varsigma: tuple
    varrho: tuple


@dataclass(frozen=True)
class ControlOutput:
    """One controller evaluation: u = alphas[-1], per-channel records, and
    the diagnostic values V_i = varsigma_i^2 / 2."""

    u: float
    alphas: tuple
    channels: tuple
    V: tuple


def run_cascade(gains: Sequence[float], x: Sequence[float], xr: float, mu: float, h: float) -> CascadeResult:
    """Evaluate the cascade for explicit reference value, shift factor, and
    envelope scaling.

    This is the one arithmetic definition of the control law; both
    ``compute_control`` and the simulator's integrator stages call it, so the
    logged and the integrated control input are produced by the same code
    path.  ``mu`` is 1.0 when no post-jump window is active (multiplying by
    1.0 is exact, so z == e bit for bit in that case).
    """
    a = xr
    alphas = [xr]
    es, zs, phis, psis, varsigmas, varrhos = [], [], [], [], [], []
    for i, k in enumerate(gains):
        e = x[i] - a
        z = mu * e
        try:
            phi, psi, varsigma, varrho = chain(z, h)
        except PerformanceViolation as pv:
            pv.channel = i + 1
            raise
        a = -k * varrho * varsigma
        alphas.append(a)
        es.append(e)
        zs.append(z)
        phis.append(phi)
        psis.append(psi)
        varsigmas.append(varsigma)
        varrhos.append(varrho)
    return CascadeResult(
        alphas=tuple(alphas),
        e=tuple(es),
        z=tuple(zs),
        phi=tuple(phis),
        psi=tuple(psis),
        varsigma=tuple(varsigmas),
        varrho=tuple(varrhos),
    )


def compute_control(
    cfg: ControllerConfig,
    x: Sequence[float],
    t: float,
    ref: PiecewiseReference,
    jumps: Sequence[float],
    sf: ShiftFunction,
    env: Envelope,
) -> ControlOutput:
    """Full controller evaluation at state ``x`` and time ``t``.

    The reference value, the active shift window, and the envelope scaling
    are all resolved with the global right-closed convention (at exactly a
    jump instant the pre-jump regime applies).  Memoryless: the output
    depends only on the arguments.  Raises PerformanceViolation annotated
    with channel and time if any working error reaches the boundary.
    """
    if len(x) != cfg.n:
        raise ValueError(f"state has length {len(x)}, controller expects {cfg.n}")
    xr = eval_reference(ref, t)
    tk = last_jump_before(jumps, t)
    mu = 1.0 if tk is None else eval_mu(sf, t - tk)
    h = h_value(env, t)
    try:
        res = run_cascade(cfg.gains, x, xr, mu, h)
    except PerformanceViolation as pv:
        pv.t = t
        raise
    channels = tuple(
        ChannelTransform(
            e=res.e[i],
            z=res.z[i],
            phi=res.phi[i],
            psi=res.psi[i],
            varsigma=res.varsigma[i],
            varrho=res.varrho[i],
        )
        for i in range(cfg.n)
    )
    V = tuple(0.5 * s * s for s in res.varsigma)
    return ControlOutput(u=res.alphas[-1], alphas=res.alphas, channels=channels, V=V)


def lyapunov_diagnostics(out: ControlOutput) -> list:
    """Per-channel diagnostic V_i = varsigma_i^2 / 2, recomputed from the
    channel records."""
    return [0.5 * ch.varsigma * ch.varsigma for ch in out.channels]

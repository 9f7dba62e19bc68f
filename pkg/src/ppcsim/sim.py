"""Closed-loop simulation of the strict-feedback chain with jump alignment.

The plant is ``xdot_i = x_{i+1} + d_i(t)`` for i < n and ``xdot_n = u + d_n(t)``,
integrated with the classical 4-stage fixed-step scheme.  The control input is
recomputed at every integrator stage.  The step grid is built per reference
segment so that every jump instant lands exactly on a step boundary: no stage
ever straddles a jump.

Conventions at a jump instant t_k.  The logged row at t_k uses the global
right-closed convention (pre-jump reference, pre-jump shift regime), so
recomputing the controller from any logged (t, x) row reproduces the logged u
bit for bit.  The integration step that starts at t_k, however, evaluates all
four stages with the post-jump segment and the fresh shift window (the
right-limit of the closed loop), whose first-stage working errors are exactly
zero because the shift factor starts at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .controller import ControllerConfig, compute_control, run_cascade
from .envelope import Envelope, h_value, rho_value
from .shift import ShiftFunction, eval_mu, make_shift
from .signals import compile_signal, eval_reference, jump_instants
from .transform import PerformanceViolation

__all__ = [
    "SimulationTrace",
    "RecoveryResult",
    "ComplianceReport",
    "MetricsSummary",
    "simulate",
    "check_compliance",
    "summarize_metrics",
    "run_scenario",
]


@dataclass(eq=False)
class SimulationTrace:
    """Time-indexed record of one closed-loop run.

    Column layout (also the CSV contract): t, x_1..x_n, x_r, u, e_1..e_n,
    z_1..z_n, rho, varsigma_1..varsigma_n, V_1..V_n, alpha_1..alpha_{n-1}.
    Greek letters are transliterated in CSV headers.  Values are written with
    17 significant digits so a round trip preserves every bit.
    """

    n: int
    data: np.ndarray
    jumps: tuple
    shift_T: float
    T1: float
    c: float
    dt: float

    def __post_init__(self):
        self.times = self.data[:, 0]
        n = self.n
        self.states = self.data[:, 1:1 + n]
        self.x_r = self.data[:, 1 + n]
        self.u = self.data[:, 2 + n]
        self.e = self.data[:, 3 + n:3 + 2 * n]
        self.z = self.data[:, 3 + 2 * n:3 + 3 * n]
        self.rho = self.data[:, 3 + 3 * n]
        self.varsigma = self.data[:, 4 + 3 * n:4 + 4 * n]
        self.V = self.data[:, 4 + 4 * n:4 + 5 * n]
        self.alphas = self.data[:, 4 + 5 * n:3 + 6 * n]

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def column_names(self) -> list:
        n = self.n
        names = ["t"]
        names += [f"x_{i}" for i in range(1, n + 1)]
        names += ["x_r", "u"]
        names += [f"e_{i}" for i in range(1, n + 1)]
        names += [f"z_{i}" for i in range(1, n + 1)]
        names += ["rho"]
        names += [f"varsigma_{i}" for i in range(1, n + 1)]
        names += [f"V_{i}" for i in range(1, n + 1)]
        names += [f"alpha_{i}" for i in range(1, n)]
        return names

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.column_names) + "\n")
            np.savetxt(fh, self.data, fmt="%.17g", delimiter=",")


def _n_columns(n: int) -> int:
    return 6 * n + 3


def simulate(scenario, control_override: Optional[Callable[[float, tuple], float]] = None) -> SimulationTrace:
    """Integrate the closed loop described by a validated scenario.

    ``control_override``, when given, replaces the backstepping law with an
    arbitrary ``u(t, x)`` (used for open-loop checks); the transform-derived
    trace columns are then NaN since no cascade is evaluated.

    Raises PerformanceViolation (with channel, time, and the partial trace
    attached) if any working error reaches the envelope boundary.
    """
    n = scenario.order
    sf = make_shift(scenario.shift_T, scenario.shift_grid_size)
    env = Envelope(scenario.T1, scenario.c)
    cfg = ControllerConfig(n, scenario.gains)
    ref = scenario.reference
    dt, t_end = scenario.sim.dt, scenario.sim.t_end
    jumps = [j for j in jump_instants(ref) if j < t_end]
    gains = cfg.gains
    dist = [compile_signal(d) for d in scenario.disturbances]

    bounds = [0.0] + jumps + [t_end]
    seg_fns = [compile_signal(ref.segments[k].expr) for k in range(len(bounds) - 1)]
    steps = [max(1, round((b - a) / dt)) for a, b in zip(bounds, bounds[1:])]
    total_rows = sum(steps) + 1
    M = np.empty((total_rows, _n_columns(n)))

    def log_row(r: int, t: float, x: tuple) -> None:
        row = M[r]
        row[0] = t
        row[1:1 + n] = x
        row[3 + 3 * n] = rho_value(env, t)
        if control_override is None:
            out = compute_control(cfg, x, t, ref, jumps, sf, env)
            row[1 + n] = out.alphas[0]
            row[2 + n] = out.u
            for i, ch in enumerate(out.channels):
                row[3 + n + i] = ch.e
                row[3 + 2 * n + i] = ch.z
                row[4 + 3 * n + i] = ch.varsigma
            row[4 + 4 * n:4 + 5 * n] = out.V
            row[4 + 5 * n:3 + 6 * n] = out.alphas[1:n]
        else:
            xr = eval_reference(ref, t)
            row[1 + n] = xr
            row[2 + n] = control_override(t, x)
            row[3 + n] = x[0] - xr
            row[4 + n:3 + 3 * n] = np.nan  # virtual errors and transforms undefined
            row[4 + 3 * n:4 + 5 * n] = np.nan
            row[4 + 5 * n:3 + 6 * n] = np.nan

    def make_trace(rows: int) -> SimulationTrace:
        return SimulationTrace(
            n=n,
            data=M[:rows].copy(),
            jumps=tuple(jumps),
            shift_T=sf.T,
            T1=env.T1,
            c=env.c,
            dt=dt,
        )

    x = tuple(scenario.sim.x0)
    r = 0
    try:
        for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
            seg_fn = seg_fns[k]
            seg_start = None if k == 0 else a
            nst = steps[k]
            tgrid = np.linspace(a, b, nst + 1)
            hstep = (b - a) / nst
            half = 0.5 * hstep
            sixth = hstep / 6.0

            if control_override is None:
                def stage_u(t: float, xx: tuple) -> float:
                    mu = 1.0 if seg_start is None else eval_mu(sf, t - seg_start)
                    try:
                        return run_cascade(gains, xx, seg_fn(t), mu, h_value(env, t)).alphas[-1]
                    except PerformanceViolation as pv:
                        pv.t = t
                        raise
            else:
                stage_u = control_override

            def deriv(t: float, xx: tuple) -> tuple:
                u = stage_u(t, xx)
                return tuple(
                    (xx[i + 1] if i + 1 < n else u) + dist[i](t) for i in range(n)
                )

            for j in range(nst):
                t0 = float(tgrid[j])
                log_row(r, t0, x)
                r += 1
                k1 = deriv(t0, x)
                k2 = deriv(t0 + half, tuple(x[i] + half * k1[i] for i in range(n)))
                k3 = deriv(t0 + half, tuple(x[i] + half * k2[i] for i in range(n)))
                k4 = deriv(t0 + hstep, tuple(x[i] + hstep * k3[i] for i in range(n)))
                x = tuple(
                    x[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) for i in range(n)
                )
        log_row(r, t_end, x)
        r += 1
    except PerformanceViolation as pv:
        pv.trace = make_trace(r)
        raise
    return make_trace(r)


@dataclass(frozen=True)
class RecoveryResult:
    """Post-jump recovery of the raw tracking error into the preset range."""

    jump_time: float
    recovered_at: Optional[float]
    recovery_time: Optional[float]
    within_window: bool


@dataclass(eq=False)
class ComplianceReport:
    """Machine-checkable verdicts for one trace.

    bound_ok:  every working error stays strictly inside the envelope at all
               sampled t > 0 (all channels).
    raw_ok:    outside the post-jump shift windows, the raw errors stay
               strictly inside the envelope as well.
    recoveries: after each jump, the first time the raw tracking error is
               back inside the preset range and stays there until the next
               jump, compared against the shift support length.
    """

    bound_ok: bool
    bound_violations: list
    raw_ok: bool
    raw_violations: list
    recoveries: tuple
    violation_event: Optional[PerformanceViolation] = None

    @property
    def all_ok(self) -> bool:
        return (
            self.bound_ok
            and self.raw_ok
            and all(rec.within_window for rec in self.recoveries)
            and self.violation_event is None
        )

    def to_dict(self) -> dict:
        ev = self.violation_event
        return {
            "passed": self.all_ok,
            "bound_check": {"ok": self.bound_ok, "violations": len(self.bound_violations),
                            "first": self.bound_violations[:5]},
            "raw_check": {"ok": self.raw_ok, "violations": len(self.raw_violations),
                          "first": self.raw_violations[:5]},
            "recoveries": [
                {"jump": rec.jump_time, "recovered_at": rec.recovered_at,
                 "recovery_time": rec.recovery_time, "within_window": rec.within_window}
                for rec in self.recoveries
            ],
            "violation_event": None if ev is None else {
                "time": ev.t, "channel": ev.channel, "psi": ev.psi,
            },
        }


def _recovery_results(times: np.ndarray, e1: np.ndarray, jumps: Sequence[float],
                      c: float, window: float) -> tuple:
    out = []
    t_last = float(times[-1])
    for idx, tk in enumerate(jumps):
        nxt = jumps[idx + 1] if idx + 1 < len(jumps) else math.inf
        m = (times > tk) & (times < nxt) if math.isfinite(nxt) else (times > tk)
        tt = times[m]
        ee = np.abs(e1[m])
        if tt.size == 0:
            out.append(RecoveryResult(tk, None, None, False))
            continue
        bad = np.nonzero(ee >= c)[0]
        if bad.size == 0:
            tau = float(tt[0])
        elif bad[-1] + 1 < tt.size:
            tau = float(tt[bad[-1] + 1])
        else:  # never settles before the next jump (or the end of the run)
            out.append(RecoveryResult(tk, None, None, False))
            continue
        rec_time = tau - tk
        out.append(RecoveryResult(tk, tau, rec_time, rec_time <= window))
    return tuple(out)


def check_compliance(trace: SimulationTrace, env: Envelope, sf: ShiftFunction,
                     jumps: Sequence[float],
                     violation: Optional[PerformanceViolation] = None) -> ComplianceReport:
    """Evaluate the envelope-compliance clauses on a completed trace.

    ``violation`` lets a caller attach the structured guard event of a run
    that stopped early, so a failed run still yields a report instead of an
    unexplained crash.
    """
    times = trace.times
    rho = np.array([rho_value(env, float(t)) for t in times])
    pos = times > 0.0

    bound_violations = []
    ok_a = True
    for i in range(trace.n):
        mask = pos & ~(np.abs(trace.z[:, i]) < rho)
        if mask.any():
            ok_a = False
            for r in np.nonzero(mask)[0][:5]:
                bound_violations.append(
                    {"t": float(times[r]), "channel": i + 1,
                     "z": float(trace.z[r, i]), "rho": float(rho[r])})

    outside = np.ones_like(times, dtype=bool)
    for tk in jumps:
        outside &= ~((times > tk) & (times <= tk + sf.T))
    raw_violations = []
    ok_b = True
    for i in range(trace.n):
        mask = outside & pos & ~(np.abs(trace.e[:, i]) < rho)
        if mask.any():
            ok_b = False
            for r in np.nonzero(mask)[0][:5]:
                raw_violations.append(
                    {"t": float(times[r]), "channel": i + 1,
                     "e": float(trace.e[r, i]), "rho": float(rho[r])})

    recoveries = _recovery_results(times, trace.e[:, 0], list(jumps), env.c, sf.T)
    return ComplianceReport(
        bound_ok=ok_a,
        bound_violations=bound_violations,
        raw_ok=ok_b,
        raw_violations=raw_violations,
        recoveries=recoveries,
        violation_event=violation,
    )


@dataclass(frozen=True)
class MetricsSummary:
    """Headline numbers for one run."""

    steady_windows: tuple  # (start, end, max_abs_e1) triples
    rms_e1: float
    recovery_times: tuple  # one entry per jump, None if never recovered
    max_abs_u: float

    def to_dict(self) -> dict:
        return {
            "steady_windows": [
                {"start": a, "end": b, "max_abs_e1": m} for a, b, m in self.steady_windows
            ],
            "rms_e1": self.rms_e1,
            "recovery_times": list(self.recovery_times),
            "max_abs_u": self.max_abs_u,
        }


def summarize_metrics(trace: SimulationTrace) -> MetricsSummary:
    """Steady-window peaks, RMS tracking error, recoveries, control peak.

    Steady windows are the spans where the envelope has settled and no shift
    window is active: [T1, first jump), then from each window's end to the
    next jump, ending at the final time.
    """
    times = trace.times
    e1 = trace.e[:, 0]
    t_end = float(times[-1])
    starts = [trace.T1] + [tk + trace.shift_T for tk in trace.jumps]
    ends = list(trace.jumps) + [t_end]
    windows = []
    for a, b in zip(starts, ends):
        if a >= b:
            continue
        m = (times >= a) & (times < b) if b < t_end else (times >= a)
        peak = float(np.max(np.abs(e1[m]))) if m.any() else math.nan
        windows.append((a, b, peak))
    recs = _recovery_results(times, e1, trace.jumps, trace.c, trace.shift_T)
    return MetricsSummary(
        steady_windows=tuple(windows),
        rms_e1=float(np.sqrt(np.mean(e1 * e1))),
        recovery_times=tuple(r.recovery_time for r in recs),
        max_abs_u=float(np.max(np.abs(trace.u))),
    )


def run_scenario(scenario):
    """Simulate and check in one call; never raises on a guard violation.

    Returns ``(trace, report)``.  If the run stops at the envelope boundary,
    the partial trace is returned and the report records the event (and is
    therefore failing).
    """
    sf = make_shift(scenario.shift_T, scenario.shift_grid_size)
    env = Envelope(scenario.T1, scenario.c)
    jumps = [j for j in scenario.jumps if j < scenario.sim.t_end]
    try:
        trace = simulate(scenario)
        return trace, check_compliance(trace, env, sf, jumps)
    except PerformanceViolation as pv:
        trace = pv.trace
        return trace, check_compliance(trace, env, sf, jumps, violation=pv)

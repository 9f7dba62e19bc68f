"""Scenario-free property suites for the shift, envelope, and transform layers.

Each suite re-derives its expectations independently (refined quadrature,
finite differences, round trips on seeded random samples) so the CLI can give
a quick machine-checked health verdict without any scenario file.  The pytest
suite runs the same checks plus frozen-value oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .envelope import Envelope, h_value, rho_value
from .shift import make_shift, eval_mu, eval_mu_dot, mu_derivative_fd, _kernel_array
from .transform import PerformanceViolation, inverse_transform, transform_channel

__all__ = ["SuiteResult", "shift_suite", "envelope_suite", "transform_suite", "run_selftest"]

_SEED = 20260810


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checks: tuple  # (label, ok, detail) triples

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def shift_suite(T: float = 2.0, grid_size: int = 4096) -> SuiteResult:
    sf = make_shift(T, grid_size)
    checks = []

    x2 = np.linspace(0.0, T, 2 * grid_size)
    c_refined = float(simpson(_kernel_array(x2, T), x=x2))
    rel = abs(sf.C - c_refined) / c_refined
    checks.append(("normalization vs doubled-resolution Simpson", rel < 1e-8, f"rel err {rel:.3e}"))

    mid = eval_mu(sf, T / 2.0)
    checks.append(("half point is 1/2", abs(mid - 0.5) < 1e-8, f"mu(T/2) = {mid!r}"))

    # strict increase where float64 resolves the growth, nondecrease everywhere
    delta = 0.01 * T
    inner = np.array([eval_mu(sf, t) for t in np.linspace(delta, T - delta, 10_000)])
    full = np.array([eval_mu(sf, t) for t in np.linspace(0.0, T, 10_000)])
    checks.append(("strictly increasing on the resolvable core",
                   bool(np.all(np.diff(inner) > 0.0)), f"grid [{delta}, {T - delta}]"))
    checks.append(("nondecreasing on [0, T]", bool(np.all(np.diff(full) >= 0.0)), ""))
    checks.append(("range stays in [0, 1]",
                   bool(np.all((full >= 0.0) & (full <= 1.0))), ""))

    s = np.linspace(1e-3 * T, T / 2 - 1e-3 * T, 2000)
    sym = max(abs(eval_mu(sf, T / 2 + v) + eval_mu(sf, T / 2 - v) - 1.0) for v in s)
    checks.append(("symmetric about the half point", sym < 1e-8, f"max defect {sym:.3e}"))

    flat = max(
        abs(mu_derivative_fd(sf, t0, order, 1e-3 * T / 2.0))
        for t0 in (0.005 * T, 0.995 * T)
        for order in (1, 2, 3)
    )
    checks.append(("flat near both endpoints (FD orders 1-3)", flat < 1e-6, f"max |fd| {flat:.3e}"))

    pts = np.linspace(0.05 * T, 0.95 * T, 100)
    rel_d = max(
        abs(mu_derivative_fd(sf, float(t), 1, 1e-4) - eval_mu_dot(sf, float(t)))
        / eval_mu_dot(sf, float(t))
        for t in pts
    )
    checks.append(("closed-form rate matches finite differences", rel_d < 1e-5, f"max rel {rel_d:.3e}"))
    return SuiteResult("shift", tuple(checks))


def envelope_suite() -> SuiteResult:
    rng = np.random.default_rng(_SEED)
    checks = []

    worst = 0.0
    for _ in range(100):
        T1 = float(rng.uniform(0.1, 10.0))
        c = float(rng.uniform(0.01, 1.0))
        env = Envelope(T1, c)
        worst = max(worst, abs(rho_value(env, T1) - c))
    checks.append(("bound lands exactly on the preset range at T1", worst < 1e-12, f"max |rho(T1)-c| {worst:.3e}"))

    env = Envelope(1.0, 0.1)
    grid = np.linspace(1e-6, env.T1, 10_000)
    r = np.array([rho_value(env, float(t)) for t in grid])
    checks.append(("bound is nonincreasing up to T1", bool(np.all(np.diff(r) <= 0.0)), ""))
    checks.append(("h spans [1, 1/l]",
                   h_value(env, 0.0) == 1.0 and abs(h_value(env, env.T1) - 1.0 / env.l) < 1e-12, ""))

    # |phi * h| < 1 exactly characterizes |z| < rho
    ok = True
    for _ in range(2000):
        t = float(rng.uniform(1e-3, 2.0))
        z = float(np.tan(rng.uniform(-0.49, 0.49) * math.pi))
        inside_psi = abs((2.0 / math.pi) * math.atan(z) * h_value(env, t)) < 1.0
        inside_rho = abs(z) < rho_value(env, t)
        if inside_psi != inside_rho:
            ok = False
            break
    checks.append(("scaled coordinate inside (-1,1) iff error inside the bound", ok, ""))
    return SuiteResult("envelope", tuple(checks))


def transform_suite() -> SuiteResult:
    rng = np.random.default_rng(_SEED + 1)
    checks = []

    worst = 0.0
    count = 0
    while count < 1000:
        z = float(np.tan(rng.uniform(-0.495, 0.495) * math.pi))
        h = float(rng.uniform(1.0, 15.0))
        ct_psi = (2.0 / math.pi) * math.atan(z) * h
        if abs(ct_psi) >= 0.99 or z == 0.0:
            continue
        count += 1
        ct = transform_channel(z, h)
        zr = inverse_transform(ct.varsigma, h)
        worst = max(worst, abs(zr - z) / abs(z))
    checks.append(("round trip through the barrier chain", worst < 1e-9, f"max rel {worst:.3e}"))

    # |z| < 1.5 keeps |psi| < 0.95 at h = 1.5, safely off the guard
    zs = np.sort(rng.uniform(-1.5, 1.5, size=200))
    vs = [transform_channel(float(z), 1.5).varsigma for z in zs]
    checks.append(("barrier coordinate strictly increasing in the error",
                   bool(np.all(np.diff(vs) > 0.0)), ""))

    try:
        transform_channel(1e12, 15.0)
        guarded = False
    except PerformanceViolation:
        guarded = True
    checks.append(("guard trips at the boundary", guarded, ""))

    ct = transform_channel(0.0, 7.0)
    checks.append(("origin maps to the origin",
                   ct.phi == 0.0 and ct.psi == 0.0 and ct.varsigma == 0.0 and ct.varrho == 1.0, ""))
    return SuiteResult("transform", tuple(checks))


def run_selftest() -> list:
    return [shift_suite(), envelope_suite(), transform_suite()]

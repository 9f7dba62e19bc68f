"""Singularity-free prescribed performance control toolkit.

A library and CLI for simulating strict-feedback chains under a
derivative-free backstepping law with a time-shrinking performance envelope,
a globally smooth post-jump shift function, and machine-checkable compliance
reports.
"""

from .signals import (
    Constant,
    PiecewiseReference,
    Ramp,
    Scaled,
    Segment,
    SignalExpr,
    Sinusoid,
    Sum,
    compile_signal,
    eval_reference,
    eval_signal,
    jump_instants,
    last_jump_before,
)
from .shift import (
    ShiftFunction,
    eval_mu,
    eval_mu_dot,
    make_shift,
    mu_derivative_fd,
    shift_kernel,
)
from .envelope import Envelope, h_value, rho_value
from .transform import (
    EPS_GUARD,
    ChannelTransform,
    PerformanceViolation,
    inverse_transform,
    shift_error,
    transform_channel,
)
from .controller import (
    ControllerConfig,
    ControlOutput,
    compute_control,
    lyapunov_diagnostics,
    run_cascade,
)
from .scenario import (
    Scenario,
    SimConfig,
    ValidationError,
    builtin_scenario_names,
    builtin_scenario_path,
    load_scenario,
    parse_scenario,
    resolve_scenario,
    scenario_from_dict,
    scenario_to_dict,
    serialize_scenario,
)
from .sim import (
    ComplianceReport,
    MetricsSummary,
    RecoveryResult,
    SimulationTrace,
    check_compliance,
    run_scenario,
    simulate,
    summarize_metrics,
)

__version__ = "0.1.0"

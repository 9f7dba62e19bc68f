import math

import hypothesis
import pytest

import ppcsim as P

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def benchmark_scenario():
    return P.load_scenario(P.builtin_scenario_path("paperV"))


@pytest.fixture(scope="session")
def shift_t2():
    return P.make_shift(2.0, 4096)


@pytest.fixture(scope="session")
def env_bench():
    return P.Envelope(1.0, 0.1)


@pytest.fixture
def mini_jump_scenario():
    """Fast first-order scenario with two reference jumps (runs in ~30 ms)."""
    return P.Scenario(
        order=1,
        gains=(30.0,),
        T1=0.1,
        c=0.15,
        shift_T=0.25,
        shift_grid_size=256,
        reference=P.PiecewiseReference((
            P.Segment(0.3, P.Constant(0.0)),
            P.Segment(0.6, P.Constant(0.3)),
            P.Segment(math.inf, P.Constant(-0.05)),
        )),
        disturbances=(P.Constant(0.0),),
        sim=P.SimConfig(dt=1e-3, t_end=1.0, x0=(0.0,)),
    )


@pytest.fixture
def mini_smooth_scenario():
    """Fast second-order scenario with a smooth reference and disturbances."""
    return P.Scenario(
        order=2,
        gains=(30.0, 30.0),
        T1=0.2,
        c=0.1,
        shift_T=0.5,
        shift_grid_size=256,
        reference=P.PiecewiseReference((
            P.Segment(math.inf, P.Sinusoid(0.2, 2.0, 0.0)),
        )),
        disturbances=(P.Constant(0.0), P.Sinusoid(0.3, 1.0, 0.0)),
        sim=P.SimConfig(dt=1e-3, t_end=1.0, x0=(0.0, 0.0)),
    )

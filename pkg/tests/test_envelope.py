import math

import numpy as np
import pytest

from ppcsim import Envelope, h_value, rho_value


class TestConstruction:
    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            Envelope(0.0, 0.1)
        with pytest.raises(ValueError):
            Envelope(1.0, 0.0)
        with pytest.raises(ValueError):
            Envelope(-1.0, 0.1)
        with pytest.raises(ValueError):
            Envelope(1.0, -0.1)

    def test_derived_constant(self):
        env = Envelope(1.0, 0.1)
        assert env.l == (2.0 / math.pi) * math.atan(0.1)
        assert 0.0 < env.l < 1.0

    @pytest.mark.parametrize("c", [0.01, 0.1, 0.5, 0.99, 10.0])
    def test_l_in_open_unit_interval(self, c):
        assert 0.0 < Envelope(1.0, c).l < 1.0


class TestHValue:
    def test_starts_at_one(self, env_bench):
        assert h_value(env_bench, 0.0) == 1.0

    def test_settled_value(self, env_bench):
        assert h_value(env_bench, 1.0) == 1.0 / env_bench.l
        assert h_value(env_bench, 5.0) == 1.0 / env_bench.l

    def test_halfway_point(self):
        # cos^2(pi/4) = 1/2 puts 1/h exactly halfway between 1 and l
        env = Envelope(1.0, 0.1)
        want_inv = (1.0 + env.l) / 2.0
        assert 1.0 / h_value(env, 0.5) == pytest.approx(want_inv, rel=1e-14)

    def test_range(self, env_bench):
        hs = [h_value(env_bench, t) for t in np.linspace(0.0, 3.0, 2000)]
        assert all(1.0 <= h <= 1.0 / env_bench.l + 1e-12 for h in hs)

    def test_monotone_nondecreasing(self, env_bench):
        hs = [h_value(env_bench, t) for t in np.linspace(0.0, 1.5, 5000)]
        assert np.all(np.diff(hs) >= 0.0)


class TestRhoValue:
    def test_unbounded_at_start(self, env_bench):
        assert rho_value(env_bench, 0.0) == math.inf

    def test_lands_on_preset_range(self, env_bench):
        assert abs(rho_value(env_bench, 1.0) - 0.1) < 1e-12

    def test_constant_tail(self, env_bench):
        assert rho_value(env_bench, 1.5) == 0.1
        assert rho_value(env_bench, 100.0) == 0.1

    def test_continuity_approaching_settling_time(self, env_bench):
        assert abs(rho_value(env_bench, 1.0 - 1e-9) - 0.1) < 1e-6

    def test_random_pairs_settle_exactly(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            T1 = float(rng.uniform(0.1, 10.0))
            c = float(rng.uniform(0.01, 1.0))
            env = Envelope(T1, c)
            assert abs(rho_value(env, T1) - c) < 1e-12

    def test_nonincreasing(self, env_bench):
        ts = np.linspace(1e-6, 1.0, 10_000)
        rs = [rho_value(env_bench, float(t)) for t in ts]
        assert np.all(np.diff(rs) <= 0.0)

    def test_boundary_equivalence(self, env_bench):
        # |(2/pi) arctan(z) h(t)| < 1 exactly when |z| < rho(t)
        rng = np.random.default_rng(7)
        for _ in range(3000):
            t = float(rng.uniform(1e-3, 3.0))
            z = float(math.tan(rng.uniform(-0.499, 0.499) * math.pi))
            lhs = abs((2.0 / math.pi) * math.atan(z) * h_value(env_bench, t)) < 1.0
            rhs = abs(z) < rho_value(env_bench, t)
            assert lhs == rhs

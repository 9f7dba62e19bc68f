import math

import numpy as np
import pytest
from scipy.integrate import simpson

from ppcsim import eval_mu, eval_mu_dot, make_shift, mu_derivative_fd, shift_kernel
from ppcsim.shift import _kernel_array

# normalization constant for T=2, frozen from an independent 40-digit quadrature
C_T2 = 0.4439938161680794


def _refined_simpson(T, grid_size):
    x = np.linspace(0.0, T, grid_size)
    return float(simpson(_kernel_array(x, T), x=x))


class TestConstruction:
    def test_rejects_bad_support(self):
        with pytest.raises(ValueError):
            make_shift(0.0)
        with pytest.raises(ValueError):
            make_shift(-1.0)
        with pytest.raises(ValueError):
            make_shift(math.inf)

    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            make_shift(2.0, 63)

    def test_normalization_against_refined_oracle(self, shift_t2):
        # doubled-resolution composite Simpson as the independent oracle
        oracle = _refined_simpson(2.0, 8192)
        assert abs(shift_t2.C - oracle) / oracle < 1e-8

    def test_normalization_frozen_value(self, shift_t2):
        assert shift_t2.C == pytest.approx(C_T2, rel=1e-14)

    def test_kernel_midpoint(self):
        # s(T-s) = 1 at the midpoint of [0, 2]
        assert shift_kernel(1.0, 2.0) == math.exp(-1.0)

    def test_kernel_vanishes_at_endpoints(self):
        for T in (0.5, 2.0, 7.0):
            assert shift_kernel(0.0, T) == 0.0
            assert shift_kernel(T, T) == 0.0
            # close enough to either endpoint the exponent underflows and the
            # limit value 0 is exact
            assert shift_kernel(T * 1e-6, T) == 0.0
            assert shift_kernel(T * (1.0 - 1e-6), T) == 0.0
        assert shift_kernel(0.02, 2.0) < 1e-10

    def test_table_shape_and_bounds(self, shift_t2):
        assert shift_t2.grid_size == 4096
        assert shift_t2.grid.shape == (4096,)
        assert shift_t2.table.shape == (4096,)
        assert shift_t2.table[0] == 0.0
        assert shift_t2.table[-1] == pytest.approx(shift_t2.C, rel=1e-12)

    def test_table_monotone(self, shift_t2):
        d = np.diff(shift_t2.table)
        assert np.all(d >= 0.0)
        # strictly increasing wherever the kernel is representable
        core = slice(100, 3996)
        assert np.all(d[core] > 0.0)


class TestEvalMu:
    def test_left_branch(self, shift_t2):
        assert eval_mu(shift_t2, -1.0) == 0.0
        assert eval_mu(shift_t2, 0.0) == 0.0

    def test_right_branch(self, shift_t2):
        assert eval_mu(shift_t2, 2.0) == 1.0
        assert eval_mu(shift_t2, 7.0) == 1.0

    def test_half_point(self, shift_t2):
        assert eval_mu(shift_t2, 1.0) == pytest.approx(0.5, abs=1e-8)

    def test_range(self, shift_t2):
        vals = np.array([eval_mu(shift_t2, t) for t in np.linspace(-0.5, 2.5, 4001)])
        assert np.all((vals >= 0.0) & (vals <= 1.0))

    def test_strictly_increasing_on_resolvable_core(self, shift_t2):
        # the outer ~1% of the support is flat at double precision (the
        # kernel underflows to 0 there), so strictness is asserted on the
        # region where float64 can represent the growth at all
        ts = np.linspace(0.02, 1.98, 10_000)
        vals = np.array([eval_mu(shift_t2, t) for t in ts])
        assert np.all(np.diff(vals) > 0.0)

    def test_nondecreasing_everywhere(self, shift_t2):
        ts = np.linspace(0.0, 2.0, 10_000)
        vals = np.array([eval_mu(shift_t2, t) for t in ts])
        assert np.all(np.diff(vals) >= 0.0)

    def test_symmetry(self, shift_t2):
        ss = np.linspace(1e-3, 1.0 - 1e-3, 3000)
        defect = max(abs(eval_mu(shift_t2, 1.0 + s) + eval_mu(shift_t2, 1.0 - s) - 1.0) for s in ss)
        assert defect < 1e-8

    def test_refinement_agreement(self, shift_t2):
        # doubling the table resolution moves no value by more than 1e-8
        fine = make_shift(2.0, 8192)
        ts = np.linspace(0.0, 2.0, 10_000)
        sup = max(abs(eval_mu(shift_t2, t) - eval_mu(fine, t)) for t in ts)
        assert sup < 1e-8

    def test_continuous_at_support_edges(self, shift_t2):
        assert eval_mu(shift_t2, 1e-12) < 1e-12
        assert eval_mu(shift_t2, 2.0 - 1e-12) > 1.0 - 1e-12


class TestDerivatives:
    def test_closed_form_at_midpoint(self, shift_t2):
        assert eval_mu_dot(shift_t2, 1.0) == math.exp(-1.0) / shift_t2.C

    def test_closed_form_outside_support(self, shift_t2):
        assert eval_mu_dot(shift_t2, 0.0) == 0.0
        assert eval_mu_dot(shift_t2, 2.0) == 0.0
        assert eval_mu_dot(shift_t2, -3.0) == 0.0

    def test_fd_matches_closed_form_at_midpoint(self, shift_t2):
        fd = mu_derivative_fd(shift_t2, 1.0, 1, 1e-4)
        assert fd == pytest.approx(eval_mu_dot(shift_t2, 1.0), rel=1e-5)

    def test_fd_matches_closed_form_on_interior(self, shift_t2):
        for t in np.linspace(0.1, 1.9, 100):
            want = eval_mu_dot(shift_t2, float(t))
            got = mu_derivative_fd(shift_t2, float(t), 1, 1e-4)
            assert abs(got - want) <= 1e-5 * want

    @pytest.mark.parametrize("t0", [0.01, 1.99])
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_flat_near_endpoints(self, shift_t2, t0, order):
        assert abs(mu_derivative_fd(shift_t2, t0, order, 1e-3)) < 1e-6

    def test_second_order_flatness_example(self, shift_t2):
        assert abs(mu_derivative_fd(shift_t2, 2.0 - 1e-2, 2, 1e-3)) < 1e-6

    def test_fd_on_constant_branch(self, shift_t2):
        assert mu_derivative_fd(shift_t2, -1.0, 1, 1e-3) == 0.0

    def test_rejects_unsupported_order(self, shift_t2):
        with pytest.raises(ValueError):
            mu_derivative_fd(shift_t2, 1.0, 0, 1e-3)
        with pytest.raises(ValueError):
            mu_derivative_fd(shift_t2, 1.0, 5, 1e-3)

    def test_rejects_bad_spacing(self, shift_t2):
        with pytest.raises(ValueError):
            mu_derivative_fd(shift_t2, 1.0, 1, 0.0)

    def test_fourth_order_supported(self, shift_t2):
        assert math.isfinite(mu_derivative_fd(shift_t2, 1.0, 4, 1e-3))


class TestOtherSupports:
    @pytest.mark.parametrize("T", [0.25, 1.0, 5.0])
    def test_basic_shape(self, T):
        sf = make_shift(T, 1024)
        assert eval_mu(sf, -0.1) == 0.0
        assert eval_mu(sf, T + 0.1) == 1.0
        assert eval_mu(sf, T / 2) == pytest.approx(0.5, abs=1e-8)
        assert sf.C == pytest.approx(_refined_simpson(T, 2048), rel=1e-8)

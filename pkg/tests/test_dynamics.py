import math

import numpy as np
import pytest

from latticedyn import (
    LatticeParams,
    QuasiPeriodicForcing,
    cocycle_property_check,
    integrate,
    make_finite_rhs,
    make_nonlinearity,
    make_reference_rhs,
    max_stable_step,
    project_forcing,
    rhs_finite,
    rhs_reference,
)
from latticedyn.dynamics import Nonlinearity, _line_laplacian, integrate_final
from latticedyn.errors import (
    BoundaryContaminationError,
    DimensionError,
    DivergenceError,
    NonlinearityConditionError,
    ParameterError,
)
from latticedyn.state import PaddedState


class TestParams:
    def test_valid(self):
        p = LatticeParams(nu=0.0, lam=0.5, n=3)
        assert p.dim == 7

    @pytest.mark.parametrize(
        "kwargs",
        [dict(nu=1.0, lam=0.0, n=2), dict(nu=-0.1, lam=1.0, n=2), dict(nu=1.0, lam=1.0, n=0)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            LatticeParams(**kwargs)


class TestNonlinearityContract:
    def test_catalog_registers(self):
        for name, alpha in (("linear", 1.0), ("cubic", 0.5), ("zero", 0.0)):
            nl = make_nonlinearity(name, alpha)
            assert nl.alpha == alpha

    def test_linear_values(self):
        nl = make_nonlinearity("linear", 2.0)
        assert np.array_equal(nl.func(np.array([1.0, -0.5])), [-2.0, 1.0])

    def test_positive_slope_fails_strict_margin(self):
        with pytest.raises(NonlinearityConditionError, match="strict sign margin"):
            make_nonlinearity("poly", alpha=0.5, coeffs=(1.0,))

    def test_positive_slope_fails_weak_sign(self):
        # F(s) = s has s*F(s) = s^2 > 0
        with pytest.raises(NonlinearityConditionError, match="weak sign"):
            make_nonlinearity("poly", alpha=0.0, coeffs=(1.0,))

    def test_zero_fixed_point_named(self):
        nl = Nonlinearity(
            name="offset",
            func=lambda s: -s + 1.0,
            alpha=0.0,
            mode="weak",
            lipschitz=lambda rho: 1.0,
        )
        with pytest.raises(NonlinearityConditionError, match="zero fixed point"):
            nl.verify()

    def test_understated_lipschitz_witness_named(self):
        nl = Nonlinearity(
            name="steep",
            func=lambda s: -4.0 * s,
            alpha=0.0,
            mode="weak",
            lipschitz=lambda rho: 1.0,
        )
        with pytest.raises(NonlinearityConditionError, match="Lipschitz"):
            nl.verify()

    def test_cubic_sampled_lipschitz_within_witness(self):
        make_nonlinearity("cubic", 1.0, rho_max=3.0).verify(rho_max=3.0)

    def test_weak_mode_rejects_margin(self):
        with pytest.raises(ParameterError):
            Nonlinearity(
                name="bad", func=lambda s: -s, alpha=1.0, mode="weak",
                lipschitz=lambda rho: 1.0,
            )


class TestFiniteRhs:
    def setup_method(self):
        self.params = LatticeParams(nu=1.0, lam=1.0, n=1)
        self.zero_f = QuasiPeriodicForcing.zero()

    def test_origin_is_fixed_point(self):
        nl = make_nonlinearity("cubic", 1.0)
        out = rhs_finite(np.zeros(3), 0.3, self.params, nl, self.zero_f)
        assert np.array_equal(out, np.zeros(3))

    def test_hand_evaluated_linear_part(self):
        nl = make_nonlinearity("zero")
        out = rhs_finite(np.array([1.0, 0.0, 0.0]), 0.0, self.params, nl, self.zero_f)
        assert np.array_equal(out, [-3.0, 1.0, 1.0])

    def test_hand_evaluated_with_linear_feedback(self):
        nl = make_nonlinearity("linear", 1.0)
        out = rhs_finite(np.array([1.0, 0.0, 0.0]), 0.0, self.params, nl, self.zero_f)
        assert np.array_equal(out, [-4.0, 1.0, 1.0])

    def test_dimension_mismatch(self):
        nl = make_nonlinearity("zero")
        with pytest.raises(DimensionError):
            rhs_finite(np.zeros(5), 0.0, self.params, nl, self.zero_f)

    def test_dissipativity_identity(self, rng):
        # <-nu A v, v> = -nu ||B v||^2 <= 0
        from latticedyn import apply_difference, apply_laplacian

        params = LatticeParams(nu=0.7, lam=1.0, n=6)
        v = rng.standard_normal(params.dim)
        lhs = float((-params.nu * apply_laplacian(v, 6)) @ v)
        rhs = -params.nu * float(np.sum(apply_difference(v, 6) ** 2))
        assert lhs == pytest.approx(rhs, rel=1e-12)
        assert lhs <= 0.0


class TestReferenceRhs:
    def test_line_stencil_of_delta(self):
        u = np.zeros(9)
        u[4] = 1.0
        out = _line_laplacian(u)
        assert np.array_equal(out, [0, 0, 0, 1.0, -2.0, 1.0, 0, 0, 0])

    def test_zero_state(self):
        params = LatticeParams(nu=1.0, lam=1.0, n=2)
        nl = make_nonlinearity("zero")
        out = rhs_reference(
            PaddedState(np.zeros(11), 5), 0.0, params, nl, QuasiPeriodicForcing.zero()
        )
        assert np.array_equal(out.values, np.zeros(11))

    def test_delta_state_with_decay(self):
        params = LatticeParams(nu=1.0, lam=1.0, n=2)
        nl = make_nonlinearity("zero")
        u = np.zeros(11)
        u[5] = 1.0
        out = rhs_reference(
            PaddedState(u, 5), 0.0, params, nl, QuasiPeriodicForcing.zero()
        )
        expected = np.zeros(11)
        expected[4], expected[5], expected[6] = 1.0, -3.0, 1.0  # stencil minus lam*u
        assert np.array_equal(out.values, expected)

    def test_interior_consistency_with_finite_system(self, rng, make_random_forcing):
        # state supported on |i| <= n-1 cannot see the wrap
        n = 5
        params = LatticeParams(nu=0.8, lam=1.2, n=n)
        nl = make_nonlinearity("cubic", 0.3)
        f = make_random_forcing(rng, support=2)
        v = np.zeros(2 * n + 1)
        v[2:-2] = rng.standard_normal(2 * n - 3)  # zero at |i| in {n-1? no: n, n-1}
        fin = rhs_finite(v, 0.7, params, nl, project_forcing(f, n))
        ref = rhs_reference(
            PaddedState(v.copy(), n), 0.7, params, nl, f
        )
        inner = slice(2, 2 * n - 1)  # |i| <= n-2 rows agree exactly
        assert np.allclose(fin[inner], ref.values[inner], atol=1e-14)

    def test_boundary_contamination_detected(self):
        params = LatticeParams(nu=1.0, lam=1.0, n=2)
        nl = make_nonlinearity("zero")
        rhs = make_reference_rhs(params, nl, QuasiPeriodicForcing.zero(), 4, 1e-8)
        u = np.zeros(9)
        u[0] = 1e-3
        with pytest.raises(BoundaryContaminationError):
            rhs(0.0, u)


class TestStableStep:
    def test_formula(self):
        params = LatticeParams(nu=1.0, lam=1.0, n=2)
        nl = make_nonlinearity("linear", 1.0)
        assert max_stable_step(params, nl, 2.0) == pytest.approx(0.5 / 6.0)

    def test_decoupled_scalar(self):
        params = LatticeParams(nu=0.0, lam=1.0, n=1)
        nl = make_nonlinearity("zero")
        assert max_stable_step(params, nl, 1.0) == pytest.approx(0.5)

    def test_roughly_halves_with_coupling(self):
        nl = make_nonlinearity("zero")
        h1 = max_stable_step(LatticeParams(nu=10.0, lam=0.1, n=1), nl, 1.0)
        h2 = max_stable_step(LatticeParams(nu=20.0, lam=0.1, n=1), nl, 1.0)
        assert h2 / h1 == pytest.approx(0.5, rel=0.02)


class TestIntegrate:
    def test_scalar_decay_single_step(self):
        traj = integrate(lambda t, y: -y, np.array([1.0]), 0.0, 0.1, 0.1)
        # RK4 growth factor 1 - h + h^2/2 - h^3/6 + h^4/24 at h = 0.1
        assert traj.final_state[0] == pytest.approx(0.9048375, abs=1e-12)
        assert abs(traj.final_state[0] - math.exp(-0.1)) < 1e-7

    def test_zero_rhs_constant(self):
        traj = integrate(lambda t, y: np.zeros_like(y), np.array([2.0, -1.0]), 0.0, 3.0, 0.17)
        assert np.array_equal(traj.states[0], traj.states[-1])
        assert traj.times[-1] == 3.0

    def test_fourth_order_on_fixed_horizon(self):
        # fixed endpoint T = 0.1; halving the step cuts the error ~16x
        errors = []
        for h in (0.1, 0.05, 0.025):
            traj = integrate(lambda t, y: -y, np.array([1.0]), 0.0, 0.1, h)
            errors.append(abs(traj.final_state[0] - math.exp(-0.1)))
        for e1, e2 in zip(errors, errors[1:]):
            assert e1 / e2 == pytest.approx(16.0, rel=0.2)

    def test_divergence_names_step(self):
        with np.errstate(over="ignore"), pytest.raises(DivergenceError, match="step"):
            integrate(lambda t, y: y * y, np.array([5.0]), 0.0, 10.0, 0.5)

    def test_degenerate_interval(self):
        traj = integrate(lambda t, y: -y, np.array([1.0, 2.0]), 1.0, 1.0, 0.1)
        assert len(traj.times) == 1
        assert np.array_equal(traj.states[0], [1.0, 2.0])

    def test_sampling_stride(self):
        traj = integrate(
            lambda t, y: -y, np.array([1.0]), 0.0, 1.0, 0.1, sample_stride=4
        )
        assert np.all(np.diff(traj.times) > 0)
        assert traj.times[-1] == 1.0

    def test_partial_final_step_lands_exactly(self):
        traj = integrate(lambda t, y: -y, np.array([1.0]), 0.0, 0.25, 0.1)
        assert traj.times[-1] == 0.25
        assert traj.final_state[0] == pytest.approx(math.exp(-0.25), abs=1e-6)

    def test_ensemble_rows_match_single_runs(self, rng):
        params = LatticeParams(nu=1.0, lam=1.0, n=3)
        nl = make_nonlinearity("linear", 0.5)
        f = project_forcing(QuasiPeriodicForcing.geometric(0.5, 0.5, 1.0), 3)
        rhs = make_finite_rhs(params, nl, f)
        v0 = rng.standard_normal((4, params.dim))
        batch = integrate_final(rhs, v0, 0.0, 2.0, 0.01)
        for row in range(4):
            single = integrate_final(rhs, v0[row], 0.0, 2.0, 0.01)
            assert np.allclose(batch[row], single, atol=1e-13)


def _cocycle_setup():
    params = LatticeParams(nu=1.0, lam=1.0, n=4)
    nl = make_nonlinearity("linear", 1.0)
    f = QuasiPeriodicForcing.finite([0.3, 1.0, 0.5], 1.3, 0.4)
    fn = project_forcing(f, params.n)
    v0 = np.random.default_rng(7).standard_normal(params.dim) * 0.3
    return params, nl, fn, v0


class TestCocycle:
    def test_zero_intermediate_time(self):
        params, nl, fn, v0 = _cocycle_setup()
        assert cocycle_property_check(v0, fn, 1.0, 0.0, params, nl, 0.01) < 1e-14

    def test_two_path_defect_small(self):
        params, nl, fn, v0 = _cocycle_setup()
        d = cocycle_property_check(v0, fn, 1.0, 1.0, params, nl, 1e-3)
        assert d < 1e-8

    def test_defect_shrinks_at_fourth_order(self):
        # against a refined direct path the composed path shows its full
        # fourth-order error; equally resolved paths nearly cancel instead
        params, nl, fn, v0 = _cocycle_setup()
        defects = [
            cocycle_property_check(v0, fn, 1.0, 1.0, params, nl, h, direct_step=h / 20)
            for h in (1e-2, 5e-3, 2.5e-3)
        ]
        slopes = [
            math.log(d1 / d2) / math.log(2.0) for d1, d2 in zip(defects, defects[1:])
        ]
        for s in slopes:
            assert 3.7 <= s <= 4.3

    def test_rejects_negative_times(self):
        params, nl, fn, v0 = _cocycle_setup()
        with pytest.raises(ParameterError):
            cocycle_property_check(v0, fn, -1.0, 0.5, params, nl, 0.01)


class TestFlowProperties:
    def test_linear_contraction_between_trajectories(self, rng):
        # with F = -alpha s two solutions contract at least like e^-(lam+alpha)t
        params = LatticeParams(nu=1.0, lam=1.0, n=6)
        nl = make_nonlinearity("linear", 1.0)
        f = project_forcing(QuasiPeriodicForcing.geometric(1.0, 0.5, 1.0), params.n)
        rhs = make_finite_rhs(params, nl, f)
        a = rng.standard_normal(params.dim)
        b = rng.standard_normal(params.dim)
        t_end = 2.0
        fa = integrate_final(rhs, a, 0.0, t_end, 0.005)
        fb = integrate_final(rhs, b, 0.0, t_end, 0.005)
        gap0 = np.linalg.norm(a - b)
        gap1 = np.linalg.norm(fa - fb)
        assert gap1 <= 1.05 * math.exp(-2.0 * t_end) * gap0

    def test_translation_identity(self, rng):
        # driving with shift(s, f) from t0 equals driving with f from t0 + s
        params = LatticeParams(nu=0.6, lam=1.1, n=4)
        nl = make_nonlinearity("cubic", 0.4)
        f = project_forcing(QuasiPeriodicForcing.geometric(0.8, 0.5, 1.7, 0.2), params.n)
        s = 0.83
        v0 = rng.standard_normal(params.dim) * 0.2
        shifted = integrate_final(
            make_finite_rhs(params, nl, f.shift(s)), v0, 0.0, 1.5, 0.003
        )
        direct = integrate_final(make_finite_rhs(params, nl, f), v0, s, s + 1.5, 0.003)
        assert np.linalg.norm(shifted - direct) < 1e-9

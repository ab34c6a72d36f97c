import math

import pytest
from hypothesis import given, strategies as st

from tiltrotor.errors import DomainError, FeasibilityError
from tiltrotor.airframe_aero import (
    fixed_wing_forces,
    free_wing_forces,
    gyroscopic_moment,
    oswald_factor,
    reactive_torque,
    stall_rate_limit,
    thrust_vector_moment,
    wing_moments,
)


@pytest.fixture(scope="module")
def wp(params):
    return params.wing


class TestOswald:
    def test_low_aspect_ratio(self):
        assert oswald_factor(4) == pytest.approx(1.114395171210, rel=1e-10)

    def test_high_aspect_ratio(self):
        assert oswald_factor(12) == pytest.approx(0.886013956421, rel=1e-10)

    def test_limit_at_zero(self):
        assert oswald_factor(1e-9) == pytest.approx(1.32, abs=1e-6)


class TestFreeWing:
    def test_pure_downwash_zero_incidence(self, wp):
        f = free_wing_forces(15.0, 0.0, 0.0, 0.0, 0.0, wp, 1.225)
        assert f.alpha_f == 0.0
        assert f.L == 0.0
        assert f.D > 0.0  # zero-incidence drag on the wetted wing

    def test_tilt_airflow_incidence(self, wp):
        beta_dot = 0.3
        v_i = 12.0
        f = free_wing_forces(v_i, 0.0, 0.0, beta_dot, 0.0, wp, 1.225)
        assert f.alpha_f == pytest.approx(math.atan(wp.tilt_arm * beta_dot / v_i))

    def test_reference_lift_value(self, wp):
        # S_fi = 4.3795, C_f = 0.5, alpha 0.1 rad at V_rt = 20 m/s
        v = 20.0 * math.cos(0.1)
        u = 20.0 * math.sin(0.1)
        f = free_wing_forces(v, u, 0.0, 0.0, 0.0, wp, 1.225)
        assert f.V_rt == pytest.approx(20.0)
        assert f.alpha_f == pytest.approx(0.1)
        assert f.L == pytest.approx(53.648875, rel=1e-9)

    def test_zero_axial_flow_flagged(self, wp):
        f = free_wing_forces(0.0, 5.0, 0.0, 0.0, 0.0, wp, 1.225)
        assert f.alpha_f == pytest.approx(math.pi / 2)
        assert f.stalled

    def test_rear_wing_split_reassembles(self, wp):
        f = free_wing_forces(10.0, 6.0, 1.0, 0.1, 0.2, wp, 1.225)
        assert f.L_flap + f.L_alpha == pytest.approx(f.L, rel=1e-12)

    def test_stall_flag_threshold(self, wp):
        steep = free_wing_forces(1.0, 5.0, 0.0, 0.0, 0.0, wp, 1.225)
        assert steep.stalled
        shallow = free_wing_forces(10.0, 1.0, 0.0, 0.0, 0.0, wp, 1.225)
        assert not shallow.stalled


class TestStallRateLimit:
    def test_symmetric_at_zero_speed(self, wp):
        fwd = stall_rate_limit(10.0, 0.0, 0.0, +1, wp)
        bwd = stall_rate_limit(10.0, 0.0, 0.0, -1, wp)
        assert fwd == pytest.approx(bwd)
        assert fwd == pytest.approx(2.062281643672, rel=1e-9)

    def test_backward_boundary_infeasible(self, wp):
        V_bX = 10.0 * math.tan(wp.alpha_max)
        with pytest.raises(FeasibilityError):
            stall_rate_limit(10.0, 0.0, V_bX, -1, wp)

    def test_forward_monotone_in_speed(self, wp):
        base = stall_rate_limit(10.0, 0.0, 5.0, +1, wp)
        assert stall_rate_limit(10.0, 0.0, 10.0, +1, wp) > base

    def test_requires_positive_axial_flow(self, wp):
        with pytest.raises(DomainError):
            stall_rate_limit(0.0, 0.0, 1.0, +1, wp)


class TestFixedWing:
    def test_zero_lift_incidence(self, wp):
        alpha0 = -wp.C_w0 / wp.C_w_alpha  # -0.64 rad with the reference slopes
        f = fixed_wing_forces(80.0, alpha0, (0.0, 0.0), wp, 1.225)
        assert f.L5 == pytest.approx(0.0, abs=1e-9)
        q = 0.5 * 1.225 * wp.S_ri * 80.0**2
        assert f.D5 == pytest.approx(q * wp.C_Dw0, rel=1e-12)

    def test_reference_lift_value(self, wp):
        f = fixed_wing_forces(100.0, 0.0, (0.0, 0.0), wp, 1.225)
        assert f.L5 == pytest.approx(42875.0, rel=1e-12)
        assert f.L6 == pytest.approx(42875.0, rel=1e-12)

    def test_aileron_differential(self, wp):
        f = fixed_wing_forces(60.0, 0.05, (0.1, -0.1), wp, 1.225)
        assert f.L5 > f.L6


class TestGyroscopic:
    def test_equal_speeds_cancel(self):
        assert gyroscopic_moment(0.4, 0.3, (100.0,) * 4, 8.5) == (0.0, 0.0, 0.0)

    def test_zero_tilt_rate(self):
        assert gyroscopic_moment(0.4, 0.0, (100, 90, 100, 90), 8.5) == (0.0, 0.0, 0.0)

    def test_unbalanced_speed_magnitude(self):
        G = gyroscopic_moment(0.0, 0.3, (100, 100, 100, 90), 8.5)
        assert G[0] == pytest.approx(25.5, rel=1e-12)
        assert G[1] == 0.0 and G[2] == pytest.approx(0.0, abs=1e-12)

    @given(st.floats(0, math.pi / 2), st.floats(-1, 1))
    def test_counter_rotating_pairs(self, beta, beta_dot):
        G = gyroscopic_moment(beta, beta_dot, (95.4, 95.4, 95.4, 95.4), 8.5)
        assert G == (0.0, 0.0, 0.0)


class TestThrustVectorMoment:
    def test_hover_pitch_residual(self, wp):
        tau = thrust_vector_moment((8117.0,) * 4, 0.0, wp)
        assert tau[0] == 0.0
        assert tau[1] == pytest.approx(2 * 8117 * (wp.l_4 - wp.l_3), rel=1e-12)
        assert tau[2] == pytest.approx(0.0, abs=1e-9)

    def test_level_tilt_kills_roll_and_pitch(self, wp):
        tau = thrust_vector_moment((9000, 8000, 7000, 6000), math.pi / 2, wp)
        assert tau[0] == pytest.approx(0.0, abs=1e-9)
        assert tau[1] == pytest.approx(0.0, abs=1e-9)

    def test_equal_thrust_pitch_scaling(self, wp):
        T = 5000.0
        tau = thrust_vector_moment((T,) * 4, 0.3, wp)
        assert tau[1] == pytest.approx(2 * T * (wp.l_4 - wp.l_3) * math.cos(0.3))


class TestReactiveTorque:
    def test_equal_torques_cancel(self):
        assert reactive_torque((10.0,) * 4, 0.7) == (0.0, 0.0, 0.0)

    def test_hover_yaw(self):
        assert reactive_torque((10, 8, 10, 8), 0.0) == pytest.approx((0.0, 0.0, 4.0))

    def test_level_roll(self):
        q = reactive_torque((10, 8, 10, 8), math.pi / 2)
        assert q[0] == pytest.approx(4.0)
        assert q[2] == pytest.approx(0.0, abs=1e-12)


class TestWingMoments:
    def test_symmetric_fixed_wing_lift(self, wp):
        tau_delta, _, _, _ = wing_moments(
            (0, 0, 0, 0), 1000.0, 1000.0, 0.05, 0.3, wp, 0.0, 50.0, 0.0
        )
        assert tau_delta == (0.0, 0.0, 0.0)

    def test_balanced_free_wing_pitch(self, wp):
        # L1 = L2, L3 = L4 chosen so (L1+L2) l4 = (L3+L4) l3
        L_front = 500.0
        L_rear = L_front * wp.l_4 / wp.l_3
        _, tau_f, _, _ = wing_moments(
            (L_front, L_front, L_rear, L_rear), 0, 0, 0.0, 0.8, wp, 0.0, 50.0, 0.0
        )
        assert tau_f == pytest.approx((0.0, 0.0, 0.0), abs=1e-9)

    def test_tilt_reaction_pitch_moment(self, wp):
        _, _, _, tau_beta = wing_moments(
            (0, 0, 0, 0), 0, 0, 0.0, 0.0, wp, 0.0, 50.0, 0.0628
        )
        assert tau_beta[1] == pytest.approx(3.14, rel=1e-3)

    def test_tail_moment_arm(self, wp):
        _, _, tau_t, _ = wing_moments((0, 0, 0, 0), 0, 0, 0, 0, wp, 12.0, 50.0, 0.0)
        assert tau_t == (0.0, 0.0, 12.0 * wp.l_3)

    def test_mirror_symmetry_flips_roll_and_yaw(self, wp):
        L = (400.0, 600.0, 300.0, 500.0)
        mirrored = (600.0, 400.0, 500.0, 300.0)
        _, tau, _, _ = wing_moments(L, 800, 900, 0.05, 0.6, wp, 0.0, 50.0, 0.0)
        _, tau_m, _, _ = wing_moments(mirrored, 900, 800, 0.05, 0.6, wp, 0.0, 50.0, 0.0)
        assert tau_m[0] == pytest.approx(-tau[0])
        assert tau_m[2] == pytest.approx(-tau[2])
        assert tau_m[1] == pytest.approx(tau[1])

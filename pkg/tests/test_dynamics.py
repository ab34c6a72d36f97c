import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tiltrotor.dynamics import (
    ControlInput,
    DisturbanceModel,
    RigidState,
    ZERO_DISTURBANCE,
    aero_state,
    assemble_forces,
    assemble_moments,
    integrate,
    rk4_step,
    rotation_beta,
    rotation_bg,
    state_derivative,
    thrust_direction,
    uncertainty_signals,
)

angles = st.floats(-1.2, 1.2)


def hover_trim_thrusts(params):
    """Closed-form hover trim: front/rear split zeroing the pitch moment."""
    mg = params.m * params.g
    l3, l4 = params.wing.l_3, params.wing.l_4
    T_front = mg * l3 / (2.0 * (l3 + l4))
    T_rear = mg * l4 / (2.0 * (l3 + l4))
    return (T_front, T_front, T_rear, T_rear)


class TestRotations:
    def test_identity_at_zero(self):
        assert np.allclose(rotation_bg(0, 0, 0), np.eye(3))
        assert np.allclose(rotation_beta(0), np.eye(3))

    @given(angles, angles, angles)
    def test_orthonormal_proper(self, phi, theta, psi):
        R = rotation_bg(phi, theta, psi)
        assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)

    def test_pitch_sine_placement(self):
        eps = 1e-6
        R = rotation_bg(0.0, math.pi / 2 - eps, 0.0)
        assert R[2, 0] == pytest.approx(1.0, abs=1e-5)  # sin(theta) lower-left
        assert R[0, 2] == pytest.approx(-1.0, abs=1e-5)
        assert R[1, 1] == pytest.approx(1.0)

    def test_tilt_maps_rotor_thrust_forward(self):
        R = rotation_beta(math.pi / 2)
        thrust_body = R @ np.array([0.0, 0.0, 1.0])
        assert np.allclose(thrust_body, [1.0, 0.0, 0.0], atol=1e-12)

    @given(st.floats(0, math.pi / 2))
    def test_tilt_inverse_is_transpose(self, beta):
        R = rotation_beta(beta)
        assert np.allclose(R @ rotation_beta(-beta), np.eye(3), atol=1e-12)
        assert np.allclose(R.T, rotation_beta(-beta), atol=1e-12)


class TestThrustDirection:
    def test_unit_norm_on_random_grid(self):
        rng = np.random.default_rng(42)
        for _ in range(10_000):
            phi, theta, psi = rng.uniform(-1.4, 1.4, 3)
            beta = rng.uniform(0, math.pi / 2)
            n = thrust_direction(phi, theta, psi, beta)
            assert math.hypot(math.hypot(n[0], n[1]), n[2]) == pytest.approx(
                1.0, abs=1e-12
            )

    @given(angles, angles, angles, st.floats(0, math.pi / 2))
    def test_matches_matrix_composition(self, phi, theta, psi, beta):
        n = thrust_direction(phi, theta, psi, beta)
        ref = rotation_bg(phi, theta, psi) @ rotation_beta(beta) @ np.array([0, 0, 1.0])
        assert np.allclose(n, ref, atol=1e-12)


class TestUncertaintySignals:
    def test_initial_values(self):
        dp, da = uncertainty_signals(0.0)
        assert dp == pytest.approx((50.0, 100.0, 150.0))
        assert da == pytest.approx((16.0, 10.0, 10.0))

    def test_decay(self):
        dp, da = uncertainty_signals(40.0)
        assert max(abs(v) for v in dp + da) < 1e-6

    def test_scaling(self):
        dp1, _ = uncertainty_signals(0.3)
        dp0, _ = uncertainty_signals(0.3, scale=0.0)
        dph, _ = uncertainty_signals(0.3, scale=0.5)
        assert dp0 == (0.0, 0.0, 0.0)
        assert dph == pytest.approx(tuple(0.5 * v for v in dp1))


class TestForceAssembly:
    def test_hover_thrust_vertical(self, params):
        state = RigidState()
        inp = ControlInput(T=(8000.0,) * 4)
        aero = aero_state(state, inp, params)
        u_p, Gamma_p = assemble_forces(state, inp, params, aero)
        assert u_p == pytest.approx((0.0, 0.0, 32000.0))
        # no airflow: only gravity acts in Gamma_p
        assert Gamma_p == pytest.approx((0.0, 0.0, -params.m * params.g))

    def test_level_tilt_thrust_forward(self, params):
        state = RigidState(beta=math.pi / 2)
        inp = ControlInput(T=(2000.0,) * 4)
        aero = aero_state(state, inp, params)
        u_p, _ = assemble_forces(state, inp, params, aero)
        assert u_p == pytest.approx((8000.0, 0.0, 0.0), abs=1e-9)

    def test_thrust_magnitude_preserved(self, params):
        rng = np.random.default_rng(3)
        for _ in range(50):
            state = RigidState(
                v_p=tuple(rng.uniform(-30, 30, 3)),
                x_a=tuple(rng.uniform(-0.8, 0.8, 3)),
                beta=rng.uniform(0, math.pi / 2),
            )
            inp = ControlInput(T=tuple(rng.uniform(0, 9000, 4)))
            aero = aero_state(state, inp, params)
            u_p, _ = assemble_forces(state, inp, params, aero)
            T_total = sum(inp.T)
            assert math.sqrt(sum(c * c for c in u_p)) == pytest.approx(
                T_total, rel=1e-12
            )

    def test_nose_up_flight_gives_positive_incidence(self, params):
        theta = 0.08
        state = RigidState(v_p=(100.0, 0.0, 0.0), x_a=(0.0, theta, 0.0))
        aero = aero_state(state, ControlInput(), params)
        assert aero.alpha == pytest.approx(theta, abs=1e-12)

    def test_steady_cruise_drag_opposes_motion(self, params):
        # sign audit: with every lift source zeroed, the net aerodynamic
        # force (gravity removed) must be exactly anti-parallel to the motion
        from dataclasses import replace

        p = replace(params, wing=replace(params.wing, C_w0=0.0))
        V = 80.0
        state = RigidState(v_p=(V, 0.0, 0.0), beta=math.pi / 2)
        aero = aero_state(state, ControlInput(), p)
        assert aero.alpha == 0.0
        _, Gamma_p = assemble_forces(state, ControlInput(), p, aero)
        aero_force = np.array(Gamma_p) - np.array([0, 0, -p.m * p.g])
        v_hat = np.array(state.v_p) / V
        drag_along = float(aero_force @ v_hat)
        lateral = aero_force - drag_along * v_hat
        assert drag_along < 0.0
        assert np.linalg.norm(lateral) < 1e-9 * abs(drag_along)

    def test_steady_cruise_lift_perpendicular_to_motion(self, params):
        # dual audit: with every drag source zeroed, the aero force must be
        # perpendicular to the motion and point upward at positive incidence
        from dataclasses import replace

        # C_f = 0 also drops the free wings, whose lift is tied to the tilt
        # plane rather than the local flow and would not be perpendicular
        p = replace(
            params,
            wing=replace(params.wing, C_w0=0.0, C_f=0.0, C_Df0=0.0, C_Dw0=0.0,
                         A_f=1e12, A_w=1e12),
        )
        V, alpha = 80.0, 0.1
        state = RigidState(
            v_p=(V * math.cos(alpha), 0.0, -V * math.sin(alpha)),
            beta=math.pi / 2,
        )
        aero = aero_state(state, ControlInput(), p)
        assert aero.alpha == pytest.approx(alpha, abs=1e-12)
        _, Gamma_p = assemble_forces(state, ControlInput(), p, aero)
        aero_force = np.array(Gamma_p) - np.array([0, 0, -p.m * p.g])
        v_hat = np.array(state.v_p) / V
        assert abs(float(aero_force @ v_hat)) < 1e-9 * np.linalg.norm(aero_force)
        assert aero_force[2] > 0.0


class TestMomentAssembly:
    def test_tilt_split_identity(self, params):
        rng = np.random.default_rng(11)
        for _ in range(30):
            state = RigidState(
                v_p=tuple(rng.uniform(-20, 20, 3)),
                x_a=tuple(rng.uniform(-0.5, 0.5, 3)),
                beta=rng.uniform(0, math.pi / 2),
                beta_dot=rng.uniform(-0.3, 0.3),
            )
            inp = ControlInput(T=tuple(rng.uniform(0, 9000, 4)),
                               delta=rng.uniform(-0.4, 0.4))
            aero = aero_state(state, inp, params)
            u_a, _, _, u_ac, u_as = assemble_moments(state, inp, params, aero)
            cb, sb = math.cos(state.beta), math.sin(state.beta)
            recon = tuple(cb * u_ac[i] + sb * u_as[i] for i in range(3))
            assert u_a == pytest.approx(recon, rel=1e-15, abs=1e-12)
            # structural ties between the two allocations
            assert u_as[0] == u_ac[2]
            assert u_as[2] == -u_ac[0]

    def test_hover_symmetric_no_moment(self, params):
        state = RigidState()
        inp = ControlInput(T=hover_trim_thrusts(params))
        aero = aero_state(state, inp, params)
        u_a, u_beta, Gamma_a, _, _ = assemble_moments(state, inp, params, aero)
        assert u_a == pytest.approx((0.0, 0.0, 0.0), abs=1e-9)
        assert u_beta == (0.0, 0.0, 0.0)
        assert Gamma_a == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)

    def test_tilt_torque_reaction(self, params):
        state = RigidState()
        inp = ControlInput(T=(0.0,) * 4, M_beta=25.0)
        aero = aero_state(state, inp, params)
        _, u_beta, _, _, _ = assemble_moments(state, inp, params, aero)
        assert u_beta == (0.0, 25.0, 0.0)
        y = state.as_vector()
        dy = state_derivative(y, inp, ZERO_DISTURBANCE, params, 0.0)
        assert dy[13] == pytest.approx(-25.0 / params.J_4)


class TestStateDerivative:
    def test_free_fall(self, params):
        dy = state_derivative(
            RigidState().as_vector(), ControlInput(), ZERO_DISTURBANCE, params, 0.0
        )
        assert dy[3:6] == pytest.approx((0.0, 0.0, -params.g))
        assert dy[9:12] == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)

    def test_tilt_acceleration_sign(self, params):
        c = 0.7
        inp = ControlInput(M_beta=-params.J_4 * c)
        dy = state_derivative(RigidState().as_vector(), inp, None, params, 0.0)
        assert dy[13] == pytest.approx(c)

    def test_hover_trim_is_fixed_point(self, params):
        inp = ControlInput(T=hover_trim_thrusts(params))
        dy = state_derivative(RigidState().as_vector(), inp, None, params, 0.0)
        assert max(abs(v) for v in dy) < 1e-9

    def test_singularity_guard(self, params):
        from tiltrotor.errors import IntegrationError

        state = RigidState(x_a=(0.0, 1.56, 0.0))
        with pytest.raises(IntegrationError):
            state_derivative(state.as_vector(), ControlInput(), None, params, 0.0)


class TestRK4:
    def test_harmonic_oscillator_energy_drift(self):
        # x'' = -x; energy must be conserved to ~1e-8 over 100 s at 1 ms
        y = (1.0, 0.0)
        dt = 1e-3

        def deriv(t, s):
            return (s[1], -s[0])

        for k in range(100_000):
            y = rk4_step(deriv, y, k * dt, dt)
        energy = 0.5 * (y[0] ** 2 + y[1] ** 2)
        assert abs(energy - 0.5) <= 1e-8

    def test_fourth_order_convergence(self):
        def deriv(t, s):
            return (s[1], -s[0])

        def final_error(dt):
            y = (1.0, 0.0)
            n = int(round(10.0 / dt))
            for k in range(n):
                y = rk4_step(deriv, y, k * dt, dt)
            return abs(y[0] - math.cos(10.0))

        e_coarse = final_error(0.02)
        e_fine = final_error(0.01)
        assert e_coarse / e_fine == pytest.approx(16.0, rel=0.15)

    def test_trimmed_hover_stays_put(self, params):
        inp = ControlInput(T=hover_trim_thrusts(params))
        final = integrate(
            RigidState(x_p=(0, 0, 100.0)),
            lambda t, s: inp,
            None,
            params,
            dt=1e-3,
            t_end=10.0,
        )
        y0 = RigidState(x_p=(0, 0, 100.0)).as_vector()
        assert max(abs(a - b) for a, b in zip(final.as_vector(), y0)) < 1e-6

    def test_integration_determinism(self, params):
        T_f, _, T_r, _ = hover_trim_thrusts(params)
        inp = ControlInput(T=(T_f * 1.01, T_f * 0.99, T_r, T_r), M_beta=2.0)
        dist = DisturbanceModel(scale=1.0)

        def run():
            return integrate(
                RigidState(x_p=(1.0, -1.0, 102.0), x_a=(0.02, 0.02, -0.02)),
                lambda t, s: inp,
                dist,
                params,
                dt=1e-3,
                t_end=0.5,
            )

        assert run().as_vector() == run().as_vector()

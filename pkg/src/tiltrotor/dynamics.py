"""Frames, generalized forces, 6-DOF + tilt equations of motion, integration.

State layout (14 components, SI units, radians):

    (X, Y, Z, Vx, Vy, Vz, phi, theta, psi, phi_dot, theta_dot, psi_dot,
     beta, beta_dot)

The attitude block integrates the Euler angles directly (the model treats
the Euler rates as the angular coordinates; no body-rate conversion), and
the inertial z axis points up, so gravity enters as -mg.

The tilt angle beta is 0 in helicopter mode and pi/2 in airplane mode; its
actuator torque M_beta reacts onto the airframe pitch axis with opposite
sign to the tilt acceleration it produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import airframe_aero, rotor_aero
from .errors import IntegrationError
from .params import AircraftParams

# airspeed below which the fixed-wing angle of attack is pinned to zero
ALPHA_AIRSPEED_FLOOR = 0.5  # m/s

STATE_SIZE = 14


@dataclass
class RigidState:
    """Convenience view over the 14-component state vector."""

    x_p: tuple[float, float, float] = (0.0, 0.0, 0.0)
    v_p: tuple[float, float, float] = (0.0, 0.0, 0.0)
    x_a: tuple[float, float, float] = (0.0, 0.0, 0.0)
    w_a: tuple[float, float, float] = (0.0, 0.0, 0.0)
    beta: float = 0.0
    beta_dot: float = 0.0

    def as_vector(self) -> tuple[float, ...]:
        return (*self.x_p, *self.v_p, *self.x_a, *self.w_a, self.beta, self.beta_dot)

    @classmethod
    def from_vector(cls, y) -> "RigidState":
        return cls(
            x_p=(y[0], y[1], y[2]),
            v_p=(y[3], y[4], y[5]),
            x_a=(y[6], y[7], y[8]),
            w_a=(y[9], y[10], y[11]),
            beta=y[12],
            beta_dot=y[13],
        )


@dataclass
class ControlInput:
    """Actuator set: four thrusts, tilt torque, rear flap, fixed-wing flaps."""

    T: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    M_beta: float = 0.0
    delta: float = 0.0  # shared rear free-wing flap bias (rad)
    delta_56: tuple[float, float] = (0.0, 0.0)  # fixed-wing flaps (rad)


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

def rotation_bg(phi: float, theta: float, psi: float) -> np.ndarray:
    """Body-to-inertial rotation matrix of the model's Euler convention."""
    cph, sph = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cps, sps = math.cos(psi), math.sin(psi)
    return np.array([
        [cth * cps, cph * sps + sph * sth * cps, sph * sps - cph * sth * cps],
        [-cth * sps, cph * cps - sph * sth * sps, sph * cps + cph * sth * sps],
        [sth, -sph * cth, cph * cth],
    ])


def rotation_beta(beta: float) -> np.ndarray:
    """Rotor-frame-to-body rotation: tilt about the body y axis."""
    cb, sb = math.cos(beta), math.sin(beta)
    return np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])


def _frame_columns(phi, theta, psi):
    """Columns of rotation_bg: body (x, y, z) axes expressed inertially."""
    cph, sph = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cps, sps = math.cos(psi), math.sin(psi)
    ax = (cth * cps, -cth * sps, sth)
    ay = (cph * sps + sph * sth * cps, cph * cps - sph * sth * sps, -sph * cth)
    az = (sph * sps - cph * sth * cps, sph * cps + cph * sth * sps, cph * cth)
    return ax, ay, az


def thrust_direction(phi: float, theta: float, psi: float, beta: float):
    """Unit vector of total rotor thrust in the inertial frame."""
    ax, _, az = _frame_columns(phi, theta, psi)
    cb, sb = math.cos(beta), math.sin(beta)
    return (
        sb * ax[0] + cb * az[0],
        sb * ax[1] + cb * az[1],
        sb * ax[2] + cb * az[2],
    )


# ---------------------------------------------------------------------------
# Disturbances
# ---------------------------------------------------------------------------

def uncertainty_signals(t: float, scale: float = 1.0):
    """Bounded analytic disturbance signals used by the reference runs.

    Both vectors and their first derivatives are bounded and decay to zero,
    which is what the observer gain conditions require.
    """
    e1 = math.exp(-t)
    e2 = math.exp(-2.0 * t)
    eh = math.exp(-0.5 * t)
    s3 = math.sin(3.0 * t)
    c1 = math.cos(t)
    dp = (
        50.0 * scale * (2.0 * e2 * s3 + e1 * c1),
        50.0 * scale * (e1 * s3 + 2.0 * eh * c1),
        50.0 * scale * (0.5 * e1 * s3 + 3.0 * e2 * c1),
    )
    da = (
        20.0 * scale * (0.5 * e2 * s3 + 0.8 * e1 * c1),
        20.0 * scale * (0.5 * e1 * s3 + 0.5 * eh * c1),
        20.0 * scale * (2.0 * e2 * s3 + 0.5 * e1 * c1),
    )
    return dp, da


@dataclass
class DisturbanceModel:
    """Lumped uncertainty entering the translational and attitude channels."""

    scale: float = 1.0
    include_gyroscopic: bool = False
    rotor_speed_offsets: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    wind: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def forces(self, t: float) -> tuple[float, float, float]:
        return uncertainty_signals(t, self.scale)[0]

    def moments(self, t: float, state: RigidState | None, params: AircraftParams):
        da = uncertainty_signals(t, self.scale)[1]
        if self.include_gyroscopic and state is not None:
            Om = params.rotor.Omega
            speeds = tuple(Om + off for off in self.rotor_speed_offsets)
            G = airframe_aero.gyroscopic_moment(
                state.beta, state.beta_dot, speeds, params.rotor.J_r
            )
            da = (da[0] + G[0], da[1] + G[1], da[2] + G[2])
        return da


ZERO_DISTURBANCE = DisturbanceModel(scale=0.0)


# ---------------------------------------------------------------------------
# Aerodynamic environment and generalized forces
# ---------------------------------------------------------------------------

@dataclass
class AeroState:
    """All airflow-dependent quantities at one instant."""

    V_b: tuple[float, float, float]
    V_mag: float
    alpha: float
    sideslip: float
    V_beta: tuple[float, float, float]
    rotors: list
    free: list
    fixed: airframe_aero.FixedWingForces
    f_rl: float
    f_rd: float


def airflow(state: RigidState, params: AircraftParams, wind=(0.0, 0.0, 0.0)):
    """Body- and rotor-frame airspeed, incidence and sideslip.

    The angle of attack is the nose-up incidence atan2(-V_bZ, V_bX); it is
    held at zero below a small airspeed floor where its value is pure noise.
    The sign choice keeps fixed-wing lift perpendicular to (and drag along)
    the relative wind in the force assembly.
    """
    phi, theta, psi = state.x_a
    rel = (
        state.v_p[0] - wind[0],
        state.v_p[1] - wind[1],
        state.v_p[2] - wind[2],
    )
    ax, ay, az = _frame_columns(phi, theta, psi)
    V_b = (
        ax[0] * rel[0] + ax[1] * rel[1] + ax[2] * rel[2],
        ay[0] * rel[0] + ay[1] * rel[1] + ay[2] * rel[2],
        az[0] * rel[0] + az[1] * rel[1] + az[2] * rel[2],
    )
    V_mag = math.sqrt(V_b[0] ** 2 + V_b[1] ** 2 + V_b[2] ** 2)
    if V_mag < ALPHA_AIRSPEED_FLOOR:
        alpha = 0.0
        sideslip = 0.0
    else:
        alpha = math.atan2(-V_b[2], V_b[0])
        sideslip = math.asin(max(-1.0, min(1.0, V_b[1] / V_mag)))
    cb, sb = math.cos(state.beta), math.sin(state.beta)
    V_beta = (
        cb * V_b[0] - sb * V_b[2],
        V_b[1],
        sb * V_b[0] + cb * V_b[2],
    )
    return V_b, V_mag, alpha, sideslip, V_beta


def aero_state(
    state: RigidState, inp: ControlInput, params: AircraftParams,
    wind=(0.0, 0.0, 0.0),
) -> AeroState:
    """Evaluate rotors, wings and tail at the current state and controls."""
    V_b, V_mag, alpha, sideslip, V_beta = airflow(state, params, wind)
    rp = params.rotor
    rotors = [
        rotor_aero.rotor_output(max(T_i, 0.0), V_beta, state.beta_dot, rp)
        for T_i in inp.T
    ]
    # Free-wing inflow policy: rotor/wing interference is booked as part of
    # the lumped disturbance unless explicitly enabled.
    if params.wing_inflow == "rotor-wake":
        wing_vi = [out.v_i for out in rotors]
    else:
        wing_vi = [0.0, 0.0, 0.0, 0.0]
    deltas = (0.0, 0.0, inp.delta, inp.delta)  # rear pair carries the flap bias
    free = [
        airframe_aero.free_wing_forces(
            wing_vi[i], V_beta[0], V_beta[2], state.beta_dot, deltas[i],
            params.wing, rp.rho,
        )
        for i in range(4)
    ]
    fixed = airframe_aero.fixed_wing_forces(
        V_mag, alpha, inp.delta_56, params.wing, rp.rho
    )
    f_rl, f_rd = airframe_aero.tail_forces(
        V_mag, sideslip, params.tail.S_t, params.tail.C_Dt, params.tail.C_Ltb, rp.rho
    )
    return AeroState(
        V_b=V_b, V_mag=V_mag, alpha=alpha, sideslip=sideslip, V_beta=V_beta,
        rotors=rotors, free=free, fixed=fixed, f_rl=f_rl, f_rd=f_rd,
    )


def assemble_forces(
    state: RigidState, inp: ControlInput, params: AircraftParams, aero: AeroState
):
    """Inertial-frame thrust vector u_p and aerodynamic + gravity forces Gamma_p."""
    phi, theta, psi = state.x_a
    ax, ay, az = _frame_columns(phi, theta, psi)
    cb, sb = math.cos(state.beta), math.sin(state.beta)
    ca, sa = math.cos(aero.alpha), math.sin(aero.alpha)

    T_total = sum(out.T for out in aero.rotors)
    L56 = aero.fixed.L5 + aero.fixed.L6
    D56 = aero.fixed.D5 + aero.fixed.D6
    L_free = sum(f.L for f in aero.free)
    D_free = sum(f.D for f in aero.free)

    u_p = tuple(T_total * (sb * ax[i] + cb * az[i]) for i in range(3))
    Gamma_p = tuple(
        L56 * (sa * ax[i] + ca * az[i])
        + D56 * (-ca * ax[i] + sa * az[i])
        + L_free * (-cb * ax[i] + sb * az[i])
        + D_free * (-sb * ax[i] - cb * az[i])
        - aero.f_rl * ay[i]
        - aero.f_rd * ax[i]
        - (params.m * params.g if i == 2 else 0.0)
        for i in range(3)
    )
    return u_p, Gamma_p


def assemble_moments(
    state: RigidState, inp: ControlInput, params: AircraftParams, aero: AeroState
):
    """Attitude control moment u_a (tilt-split form), tilt reaction u_beta,
    and the airframe moments Gamma_a.

    Returns ``(u_a, u_beta, Gamma_a, u_ac, u_as)``.  The rear free wings'
    flap lift share lives in the control channel (u_as pitch row), while
    their incidence share stays in Gamma_a.
    """
    wp = params.wing
    cb, sb = math.cos(state.beta), math.sin(state.beta)
    ca, sa = math.cos(aero.alpha), math.sin(aero.alpha)
    T = [out.T for out in aero.rotors]
    Q = [out.Q for out in aero.rotors]
    L = [f.L for f in aero.free]
    L5, L6 = aero.fixed.L5, aero.fixed.L6

    roll_arm = (T[1] - T[0]) * wp.l_1 + (T[2] - T[3]) * wp.l_2
    pitch_arm = (T[0] + T[1]) * wp.l_4 - (T[2] + T[3]) * wp.l_3
    q_alt = Q[0] - Q[1] + Q[2] - Q[3]
    u_22 = (aero.free[2].L_flap + aero.free[3].L_flap) * wp.l_3

    u_ac = (roll_arm, pitch_arm, q_alt)
    u_as = (q_alt, u_22, -roll_arm)
    u_a = tuple(cb * u_ac[i] + sb * u_as[i] for i in range(3))
    u_beta = (0.0, inp.M_beta, 0.0)

    free_roll_arm = (L[1] - L[0]) * wp.l_1 + (L[2] - L[3]) * wp.l_2
    rear_alpha_lift = aero.free[2].L_alpha + aero.free[3].L_alpha
    Gamma_a = (
        (L6 - L5) * wp.l_5 * ca + free_roll_arm * sb,
        (L[0] + L[1]) * wp.l_4 * sb - rear_alpha_lift * wp.l_3 * sb,
        (L5 - L6) * wp.l_5 * sa + free_roll_arm * cb + aero.f_rl * wp.l_3,
    )
    return u_a, u_beta, Gamma_a, u_ac, u_as


def state_derivative(
    y,
    inp: ControlInput,
    disturbance: DisturbanceModel | None,
    params: AircraftParams,
    t: float,
):
    """Time derivative of the 14-component state vector."""
    state = RigidState.from_vector(y)
    if abs(state.x_a[1]) >= 1.55:  # ~ 88.8 deg: Euler pitch singularity guard
        raise IntegrationError(
            f"pitch angle {state.x_a[1]:.3f} rad hit the attitude singularity guard",
            t=t,
        )
    aero = aero_state(state, inp, params)
    u_p, Gamma_p = assemble_forces(state, inp, params, aero)
    u_a, u_beta, Gamma_a, _, _ = assemble_moments(state, inp, params, aero)
    if disturbance is None:
        dp = da = (0.0, 0.0, 0.0)
    else:
        dp = disturbance.forces(t)
        da = disturbance.moments(t, state, params)

    inv_m = 1.0 / params.m
    J = (params.J_1, params.J_2, params.J_3)
    acc = tuple((u_p[i] + Gamma_p[i] + dp[i]) * inv_m for i in range(3))
    ang_acc = tuple((u_a[i] + u_beta[i] + Gamma_a[i] + da[i]) / J[i] for i in range(3))
    beta_ddot = -inp.M_beta / params.J_4

    return (
        y[3], y[4], y[5],
        acc[0], acc[1], acc[2],
        y[9], y[10], y[11],
        ang_acc[0], ang_acc[1], ang_acc[2],
        y[13], beta_ddot,
    )


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

def rk4_step(deriv, y, t: float, dt: float):
    """One classical Runge-Kutta step of a generic first-order system."""
    k1 = deriv(t, y)
    y2 = tuple(yi + 0.5 * dt * ki for yi, ki in zip(y, k1))
    k2 = deriv(t + 0.5 * dt, y2)
    y3 = tuple(yi + 0.5 * dt * ki for yi, ki in zip(y, k2))
    k3 = deriv(t + 0.5 * dt, y3)
    y4 = tuple(yi + dt * ki for yi, ki in zip(y, k3))
    k4 = deriv(t + dt, y4)
    return tuple(
        yi + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def integrate(
    state: RigidState,
    controller,
    disturbance: DisturbanceModel | None,
    params: AircraftParams,
    dt: float,
    t_end: float,
    on_step=None,
):
    """Fixed-step closed-loop integration.

    ``controller(t, state) -> ControlInput`` is evaluated once per step and
    held over the step (zero-order hold).  ``on_step(k, t, state, inp)``
    fires after the controls are computed and before the state advances,
    so the first call sees the initial state.  Identical inputs produce
    bit-identical trajectories.

    Returns the final RigidState.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    n_steps = int(round(t_end / dt))
    y = state.as_vector()
    for k in range(n_steps):
        t = k * dt
        current = RigidState.from_vector(y)
        inp = controller(t, current)
        if on_step is not None:
            on_step(k, t, current, inp)
        y = rk4_step(
            lambda tau, yy: state_derivative(yy, inp, disturbance, params, tau),
            y, t, dt,
        )
        if not all(math.isfinite(v) for v in y):
            raise IntegrationError("non-finite state", step=k + 1, t=t + dt)
    final = RigidState.from_vector(y)
    if on_step is not None:
        inp = controller(n_steps * dt, final)
        on_step(n_steps, n_steps * dt, final, inp)
    return final

"""Switched transition control: attitude, position, tilt and allocation.

The attitude loop commands a body moment that cancels the modeled airframe
moments and the observer's disturbance estimate, leaving linear
double-integrator error dynamics.  The moment is realized differently on
the two sides of the switching tilt angle (45 deg, where the two
allocation matrices carry equal gain):

* low tilt: pitch through the front/rear thrust differential, yaw through
  the rotor drag-torque imbalance, rear flaps parked at zero;
* high tilt: the thrust pitch row is constrained to zero, pitch moves to
  the rear free-wing flap bias, roll is carried by the drag-torque
  imbalance and yaw by the thrust differential.

The mixer turns (total thrust, moment targets) into four rotor thrusts by
solving the corresponding 4x4 linear system, with the drag torque of each
rotor modeled as affine in its thrust at the current inflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics, rotor_aero
from .airframe_aero import stall_rate_limit
from .errors import AllocationError, ConfigError, FeasibilityError
from .observers import (
    ObserverBank,
    ObserverGains,
    attitude_observer_step,
    position_observer_step,
)
from .params import AircraftParams, WingParams

BETA_SWITCH = math.pi / 4.0  # tilt angle where the allocation switches
SWITCH_HYSTERESIS = math.radians(0.5)
FLAP_MIN_AIRSPEED = 5.0  # m/s of free-wing flow below which the flap holds


@dataclass(frozen=True)
class ControllerGains:
    k_1: float = 5.0  # attitude stiffness
    k_2: float = 5.0  # attitude damping
    k_3: float = 2.5  # position stiffness
    k_4: float = 4.5  # position damping
    k_5: float = 2.63  # tilt stiffness
    k_6: float = 4.55  # tilt damping

    def validate(self) -> None:
        if min(self.k_1, self.k_2, self.k_3, self.k_4, self.k_5, self.k_6) <= 0:
            raise ConfigError("controller gains must be positive")


# ---------------------------------------------------------------------------
# Tilt trajectory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TiltProfile:
    """Bang-bang tilt schedule: constant +-M_t over two half-phases.

    ``direction`` is "hover_to_level" (0 to pi/2) or "level_to_hover"
    (pi/2 to 0); the magnitude M_t = pi / (2 t_1^2) makes the angle sweep
    exactly a quarter turn over 2 t_1.
    """

    direction: str
    t_1: float
    t_0: float = 0.0

    def __post_init__(self):
        if self.direction not in ("hover_to_level", "level_to_hover"):
            raise ConfigError(f"unknown tilt direction {self.direction!r}")
        if self.t_1 <= 0:
            raise ConfigError("t_1 must be positive")

    @property
    def M_t(self) -> float:
        return math.pi / (2.0 * self.t_1**2)

    @property
    def forward(self) -> bool:
        return self.direction == "hover_to_level"

    def eval(self, t: float) -> tuple[float, float, float]:
        """(beta_d, beta_dot_d, beta_ddot_d) at absolute time ``t``."""
        tau = t - self.t_0
        M, t1 = self.M_t, self.t_1
        if tau <= 0.0:
            beta, rate, acc = 0.0, 0.0, 0.0
        elif tau <= t1:
            beta, rate, acc = 0.5 * M * tau**2, M * tau, M
        elif tau <= 2.0 * t1:
            dt2 = tau - t1
            beta = 0.5 * M * t1**2 + M * t1 * dt2 - 0.5 * M * dt2**2
            rate, acc = M * t1 - M * dt2, -M
        else:
            # exact terminal value: M t1^2 reassociates away from pi/2 in floats
            beta, rate, acc = math.pi / 2.0, 0.0, 0.0
        if self.forward:
            return beta, rate, acc
        return math.pi / 2.0 - beta, -rate, -acc


@dataclass(frozen=True)
class TiltFeasibility:
    peak_rate: float  # scheduled |beta_dot| maximum (rad/s)
    rate_bound: float  # stall-incidence rate bound at the peak (rad/s)
    t1_minimum: float  # smallest feasible half-phase time (s)
    feasible: bool

    @property
    def margin(self) -> float:
        return self.rate_bound - self.peak_rate


def tilt_feasibility(
    profile: TiltProfile,
    v_i: float,
    V_bX: float,
    V_bZ: float,
    wp: WingParams,
) -> TiltFeasibility:
    """Check the scheduled peak tilt rate against the free-wing stall bound.

    The flight condition is the one scheduled at t_0 + t_1, where the rate
    peaks.  An infeasible backward bound is reported, not raised.
    """
    peak = profile.M_t * profile.t_1
    try:
        bound = stall_rate_limit(
            v_i, V_bZ, V_bX, +1.0 if profile.forward else -1.0, wp
        )
    except FeasibilityError:
        return TiltFeasibility(peak, 0.0, math.inf, False)
    t1_min = 0.5 * math.pi / bound if bound > 0 else math.inf
    return TiltFeasibility(peak, bound, t1_min, peak < bound)


def tilt_control(
    beta: float,
    beta_dot: float,
    profile_point: tuple[float, float, float],
    J_4: float,
    gains: ControllerGains,
    accel_limit: float = 5.0,
) -> float:
    """Tilt actuator torque tracking the scheduled profile.

    The tilt plant is J_4 beta'' = -M_beta, so the positive-feedback-looking
    sign here closes the loop as beta_err'' = -k_5 err - k_6 err'.
    """
    beta_d, rate_d, acc_d = profile_point
    e = beta - beta_d
    e_dot = beta_dot - rate_d
    M = J_4 * (gains.k_5 * e + gains.k_6 * e_dot - acc_d)
    limit = J_4 * accel_limit
    return max(-limit, min(limit, M))


# ---------------------------------------------------------------------------
# Attitude and position laws
# ---------------------------------------------------------------------------

def attitude_control(
    x_a: tuple[float, float, float],
    att_ref: tuple[tuple[float, float, float], ...],
    rate_est: tuple[float, float, float],
    dist_est: tuple[float, float, float],
    u_beta: tuple[float, float, float],
    Gamma_a: tuple[float, float, float],
    J: tuple[float, float, float],
    gains: ControllerGains,
) -> tuple[float, float, float]:
    """Desired body moment: linear error shaping + model/disturbance cancellation.

    ``att_ref`` is (angles, rates, accelerations); ``dist_est`` is the
    inertia-scaled disturbance estimate (N m).
    """
    a_d, da_d, dda_d = att_ref
    return tuple(
        -J[i] * (gains.k_1 * (x_a[i] - a_d[i]) + gains.k_2 * (rate_est[i] - da_d[i])
                 - dda_d[i])
        - u_beta[i] - Gamma_a[i] - dist_est[i]
        for i in range(3)
    )


def position_control(
    x_p: tuple[float, float, float],
    pos_ref: tuple[tuple[float, float, float], ...],
    vel_est: tuple[float, float, float],
    dist_est: tuple[float, float, float],
    Gamma_p: tuple[float, float, float],
    m: float,
    gains: ControllerGains,
) -> tuple[float, float, float]:
    """Desired inertial force vector for trajectory tracking."""
    x_d, v_d, a_d = pos_ref
    return tuple(
        -m * (gains.k_3 * (x_p[i] - x_d[i]) + gains.k_4 * (vel_est[i] - v_d[i]))
        - Gamma_p[i] - dist_est[i] + m * a_d[i]
        for i in range(3)
    )


def extract_thrust(
    u_p_desired: tuple[float, float, float],
    n_hat: tuple[float, float, float],
) -> tuple[float, tuple[float, float, float], bool]:
    """Project the force demand onto the achievable thrust direction.

    Returns (total thrust >= 0, unactuated residual force, clamped flag).
    The residual is the demand component the single thrust direction cannot
    produce; it is logged, not silently dropped.
    """
    T = sum(u * n for u, n in zip(u_p_desired, n_hat))
    clamped = T < 0.0
    T = max(0.0, T)
    residual = tuple(u - T * n for u, n in zip(u_p_desired, n_hat))
    return T, residual, clamped


# ---------------------------------------------------------------------------
# Allocation and mixing
# ---------------------------------------------------------------------------

def allocation_matrix(beta: float, regime: str) -> np.ndarray:
    """M_c (low tilt) or M_s (high tilt) mapping targets to body moments."""
    cb, sb = math.cos(beta), math.sin(beta)
    if regime == "low":
        return np.array([[cb, 0.0, sb], [0.0, cb, 0.0], [-sb, 0.0, cb]])
    if regime == "high":
        return np.array([[sb, 0.0, -cb], [0.0, sb, 0.0], [cb, 0.0, sb]])
    raise AllocationError(f"unknown regime {regime!r}")


def allocate(
    u_a_desired: tuple[float, float, float], beta: float, regime: str
) -> tuple[float, float, float]:
    """Solve M u = u_a_desired for the regime's target vector u.

    The analytic inverse has the transposed rotation block and a 1/cos
    (or 1/sin) middle entry; the determinant stays >= sqrt(2)/2 within each
    regime, which is asserted rather than assumed.
    """
    cb, sb = math.cos(beta), math.sin(beta)
    u1, u2, u3 = u_a_desired
    if regime == "low":
        if cb < 0.5:
            raise AllocationError(
                f"low-tilt allocation at beta = {beta:.3f} rad is ill-conditioned"
            )
        return (cb * u1 - sb * u3, u2 / cb, sb * u1 + cb * u3)
    if regime == "high":
        if sb < 0.5:
            raise AllocationError(
                f"high-tilt allocation at beta = {beta:.3f} rad is ill-conditioned"
            )
        return (sb * u1 + cb * u3, u2 / sb, -cb * u1 + sb * u3)
    raise AllocationError(f"unknown regime {regime!r}")


@dataclass(frozen=True)
class MixerResult:
    T: tuple[float, float, float, float]
    saturated: bool
    T_total_achieved: float
    residual: float  # max |achieved - target| over the four rows, unclamped


def mixer(
    T_total: float,
    targets: tuple[float, float, float],
    regime: str,
    q_coeffs: tuple[tuple[float, float], ...],
    wp: WingParams,
    thrust_min: float,
    thrust_max: float,
) -> MixerResult:
    """Solve four rotor thrusts from total-thrust and moment targets.

    ``targets`` is the allocation output: low tilt (roll row, pitch row,
    torque-imbalance row), high tilt (torque-imbalance row, flap demand --
    handled separately -- and negated roll row).  ``q_coeffs`` are per-rotor
    (a_i, b_i) with Q_i = a_i T_i + b_i at the current inflow.

    Saturation policy: moments win over total thrust.  The solution is
    affine in the total-thrust target, so when the demanded total pushes a
    rotor outside its range, the total is pulled back to the nearest value
    keeping every rotor in range at intact moment rows (blowing the pitch
    row instead would swing the vehicle through the front/rear arm
    asymmetry).  Only if no total can satisfy the moment rows are the
    thrusts simply clamped.
    """
    a = [c[0] for c in q_coeffs]
    b = [c[1] for c in q_coeffs]
    if regime == "low":
        roll_rhs, pitch_rhs, qalt_rhs = targets
    else:
        qalt_rhs = targets[0]
        pitch_rhs = 0.0  # front/rear balance constraint at high tilt
        roll_rhs = -targets[2]
    A = np.array([
        [1.0, 1.0, 1.0, 1.0],
        [-wp.l_1, wp.l_1, wp.l_2, -wp.l_2],
        [wp.l_4, wp.l_4, -wp.l_3, -wp.l_3],
        [a[0], -a[1], a[2], -a[3]],
    ])
    rhs = np.array([
        T_total,
        roll_rhs,
        pitch_rhs,
        qalt_rhs - (b[0] - b[1] + b[2] - b[3]),
    ])
    try:
        sols = np.linalg.solve(A, np.column_stack([rhs, [1.0, 0.0, 0.0, 0.0]]))
    except np.linalg.LinAlgError as exc:
        raise AllocationError(f"mixer system singular: {exc}") from exc
    T = sols[:, 0]
    direction = sols[:, 1]  # dT_i / dT_total at fixed moment targets
    residual = float(np.max(np.abs(A @ T - rhs)))

    in_range = all(thrust_min - 1e-9 <= Ti <= thrust_max + 1e-9 for Ti in T)
    if in_range:
        T_box = np.clip(T, thrust_min, thrust_max)
        return MixerResult(T=tuple(map(float, T_box)), saturated=False,
                           T_total_achieved=float(T_box.sum()), residual=residual)

    # feasible interval of total thrust preserving the moment rows
    lo, hi = -math.inf, math.inf
    feasible = True
    for Ti, di in zip(T, direction):
        if abs(di) < 1e-12:
            if not (thrust_min - 1e-9 <= Ti <= thrust_max + 1e-9):
                feasible = False
                break
            continue
        bounds = sorted(
            ((thrust_min - Ti) / di + T_total, (thrust_max - Ti) / di + T_total)
        )
        lo, hi = max(lo, bounds[0]), min(hi, bounds[1])
    if feasible and lo <= hi:
        T_tot_new = min(max(T_total, lo), hi)
        T_new = T + (T_tot_new - T_total) * direction
        T_box = np.clip(T_new, thrust_min, thrust_max)
        return MixerResult(T=tuple(map(float, T_box)), saturated=True,
                           T_total_achieved=float(T_box.sum()), residual=residual)
    T_box = np.clip(T, thrust_min, thrust_max)
    return MixerResult(T=tuple(map(float, T_box)), saturated=True,
                       T_total_achieved=float(T_box.sum()), residual=residual)


def delta_from_pitch_demand(
    u22_target: float,
    V_rt: float,
    wp: WingParams,
    rho: float,
    flap_limit: float,
    min_airspeed: float = FLAP_MIN_AIRSPEED,
) -> tuple[float, bool]:
    """Rear-flap bias producing the demanded flap pitch term.

    Returns (delta, effective).  Below the airspeed floor the flap has no
    authority worth using and the caller holds its previous value.
    """
    if V_rt < min_airspeed:
        return 0.0, False
    delta = u22_target / (rho * wp.S_fi * V_rt**2 * wp.C_r * wp.l_3)
    return max(-flap_limit, min(flap_limit, delta)), True


# ---------------------------------------------------------------------------
# Full transition controller
# ---------------------------------------------------------------------------

@dataclass
class ControllerDiagnostics:
    regime: str = "low"
    thrust_saturated_steps: int = 0
    flap_saturated_steps: int = 0
    thrust_clamp_steps: int = 0
    flap_hold_steps: int = 0
    max_mixer_residual: float = 0.0
    max_lateral_residual: float = 0.0


class TransitionController:
    """Observer-based switched controller for the mode-transition scenarios.

    One instance drives one simulation: it owns the observer bank, the
    previously applied actuator set (used for the feedforward terms and as
    the observers' known input) and the flap hold latch.  The object is a
    plain callable compatible with :func:`tiltrotor.dynamics.integrate`.
    """

    def __init__(
        self,
        params: AircraftParams,
        gains: ControllerGains,
        obs_gains: ObserverGains,
        profile: TiltProfile,
        pos_ref,  # callable t -> (x_d, v_d, a_d)
        att_ref: tuple[float, float, float],
        initial_thrusts: tuple[float, float, float, float],
        observer_substeps: int = 20,
        dt: float = 1e-3,
        beta_switch: float = BETA_SWITCH,
        hysteresis: float = SWITCH_HYSTERESIS,
    ):
        gains.validate()
        obs_gains.validate()
        self.params = params
        self.gains = gains
        self.obs_gains = obs_gains
        self.profile = profile
        self.pos_ref = pos_ref
        self.att_ref = (tuple(att_ref), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
        # measured channels get seeded from the first measurement; the
        # unmeasured velocity/disturbance estimates start at zero
        self.bank: ObserverBank | None = None
        self.last_input = dynamics.ControlInput(T=initial_thrusts)
        self.delta_hold = 0.0
        self.regime = "low" if profile.forward else "high"
        self.beta_switch = beta_switch
        self.hysteresis = hysteresis
        self.observer_substeps = observer_substeps
        self.dt = dt
        self.diag = ControllerDiagnostics(regime=self.regime)

    # -- helpers -----------------------------------------------------------

    def _update_regime(self, beta: float) -> None:
        if self.regime == "low" and beta > self.beta_switch + self.hysteresis:
            self.regime = "high"
        elif self.regime == "high" and beta < self.beta_switch - self.hysteresis:
            self.regime = "low"
        self.diag.regime = self.regime

    def _observer_update(self, state: dynamics.RigidState, aero) -> None:
        if self.bank is None:
            self.bank = ObserverBank(
                pos=tuple((state.x_p[i], 0.0, 0.0) for i in range(3)),
                att=tuple((state.w_a[i], 0.0) for i in range(3)),
            )
        u_p, Gamma_p = dynamics.assemble_forces(state, self.last_input, self.params, aero)
        u_a, u_beta, Gamma_a, _, _ = dynamics.assemble_moments(
            state, self.last_input, self.params, aero
        )
        inv_m = 1.0 / self.params.m
        known_acc = tuple((u_p[i] + Gamma_p[i]) * inv_m for i in range(3))
        J = self.params.J
        known_ang = tuple((u_a[i] + u_beta[i] + Gamma_a[i]) / J[i] for i in range(3))
        self.bank = position_observer_step(
            self.bank, state.x_p, known_acc, self.obs_gains, self.dt,
            self.observer_substeps,
        )
        self.bank = attitude_observer_step(
            self.bank, state.w_a, known_ang, self.obs_gains, self.dt,
            self.observer_substeps,
        )
        self._known_forces = (u_p, Gamma_p, u_a, u_beta, Gamma_a)

    # -- main entry ---------------------------------------------------------

    def __call__(self, t: float, state: dynamics.RigidState) -> dynamics.ControlInput:
        params = self.params
        aero = dynamics.aero_state(state, self.last_input, params)
        self._observer_update(state, aero)
        _, Gamma_p, _, _, Gamma_a = self._known_forces

        # tilt loop first: its torque reaction enters the attitude law
        profile_point = self.profile.eval(t)
        M_beta = tilt_control(
            state.beta, state.beta_dot, profile_point, params.J_4, self.gains,
            params.limits.tilt_accel_limit,
        )
        u_beta = (0.0, M_beta, 0.0)

        J = params.J
        dist_a = tuple(J[i] * self.bank.disturbance_angular[i] for i in range(3))
        u_a_des = attitude_control(
            state.x_a, self.att_ref, self.bank.rates, dist_a, u_beta, Gamma_a,
            J, self.gains,
        )

        self._update_regime(state.beta)
        targets = allocate(u_a_des, state.beta, self.regime)

        dist_p = tuple(params.m * d for d in self.bank.disturbance_accel)
        u_p_des = position_control(
            state.x_p, self.pos_ref(t), self.bank.velocity, dist_p, Gamma_p,
            params.m, self.gains,
        )
        n_hat = dynamics.thrust_direction(*state.x_a, state.beta)
        T_total, residual_force, clamped = extract_thrust(u_p_des, n_hat)
        if clamped:
            self.diag.thrust_clamp_steps += 1
        self.diag.max_lateral_residual = max(
            self.diag.max_lateral_residual,
            math.sqrt(sum(r * r for r in residual_force)),
        )

        # flap bias carries the pitch demand at high tilt
        if self.regime == "high":
            V_rt_rear = aero.free[2].V_rt
            delta, effective = delta_from_pitch_demand(
                targets[1], V_rt_rear, params.wing, params.rotor.rho,
                params.limits.flap_limit,
            )
            if effective:
                self.delta_hold = delta
                if abs(abs(delta) - params.limits.flap_limit) < 1e-12:
                    self.diag.flap_saturated_steps += 1
            else:
                self.diag.flap_hold_steps += 1
            delta_cmd = self.delta_hold
        else:
            delta_cmd = 0.0
            self.delta_hold = 0.0

        # Per-rotor affine torque model linearized on the *composed* map
        # T -> Q(T, v_i(T)) (the induced velocity rides with the thrust, so
        # the fixed-inflow slope alone understates the yaw sensitivity),
        # refined once after the first solve so the linearization point
        # matches the commanded thrusts.
        def exact_torque(T_i: float) -> float:
            v_i = rotor_aero.induced_velocity(
                max(T_i, 0.0), *aero.V_beta, params.rotor.rho, params.rotor.R
            )
            inflow = rotor_aero.InflowState.from_velocity(
                aero.V_beta, v_i, state.beta_dot, params.rotor
            )
            return rotor_aero.torque_from_thrust(max(T_i, 0.0), inflow, params.rotor)

        T_new = self.last_input.T
        for _ in range(2):
            q_coeffs = []
            for i in range(4):
                T_i = max(T_new[i], 0.0)
                h = max(1.0, 1e-4 * T_i)
                Q_mid = exact_torque(T_i)
                slope = (exact_torque(T_i + h) - exact_torque(max(T_i - h, 0.0))) / (
                    h + min(h, T_i)
                )
                q_coeffs.append((slope, Q_mid - slope * T_i))
            mix = mixer(
                T_total, targets, self.regime, tuple(q_coeffs), params.wing,
                params.limits.thrust_min, params.limits.thrust_max,
            )
            T_new = mix.T
        if mix.saturated:
            self.diag.thrust_saturated_steps += 1
        self.diag.max_mixer_residual = max(self.diag.max_mixer_residual, mix.residual)

        inp = dynamics.ControlInput(T=mix.T, M_beta=M_beta, delta=delta_cmd)
        self.last_input = inp
        return inp

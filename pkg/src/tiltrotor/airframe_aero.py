"""Wing, tail and rotor-group forces and moments on the airframe.

The four free wings co-tilt with their rotors; their incidence mixes the
in-plane airflow, the tilt-rate-induced airflow and (optionally) the rotor
downwash.  The rear pair doubles as the pitch effector at high tilt
through the shared flap bias angle.  The fixed wings carry the vehicle in
airplane mode and their ailerons enter through per-side flap angles.

Sign conventions follow the body frame used by the motion equations:
x forward, z up along the hover thrust axis, y completing the right-handed
set.  Moments are (roll, pitch, yaw) about (x, y, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, FeasibilityError
from .params import WingParams


@dataclass(frozen=True)
class FreeWingForce:
    """Aerodynamic state of one free wing."""

    L: float  # lift (N)
    D: float  # drag (N)
    alpha_f: float  # incidence (rad)
    V_rt: float  # resultant airflow speed (m/s)
    L_flap: float  # flap-bias share of the lift (N)
    L_alpha: float  # incidence share of the lift (N)
    stalled: bool  # |alpha_f| exceeded the stall bound (forces still linear)


@dataclass(frozen=True)
class FixedWingForces:
    L5: float
    L6: float
    D5: float
    D6: float


def oswald_factor(A: float) -> float:
    """Oswald efficiency estimate 1.78 (1 - 0.045 A^0.68) - 0.46."""
    if A <= 0:
        raise DomainError("aspect ratio must be positive")
    return 1.78 * (1.0 - 0.045 * A**0.68) - 0.46


def free_wing_forces(
    v_i: float,
    V_bX: float,
    V_bZ: float,
    beta_dot: float,
    delta_i: float,
    wp: WingParams,
    rho: float,
) -> FreeWingForce:
    """Lift and drag of one free wing.

    ``V_bX``/``V_bZ`` are the rotor-frame airflow components and ``v_i``
    the downwash fed to the wing (zero when interference is booked as a
    disturbance).  A zero axial flow with nonzero in-plane flow puts the
    incidence at +-pi/2, which is reported through the stall flag rather
    than raised.
    """
    V_bt = wp.tilt_arm * beta_dot
    num = V_bX + V_bt
    den = v_i + V_bZ
    V_rt = math.hypot(num, den)
    alpha_f = math.atan2(num, den) if V_rt > 0.0 else 0.0
    stalled = abs(alpha_f) > wp.alpha_max
    q = 0.5 * rho * wp.S_fi * V_rt**2
    C_L = wp.C_f * alpha_f + wp.C_r * delta_i
    C_D = wp.C_Df0 + C_L**2 / (math.pi * wp.A_f * oswald_factor(wp.A_f))
    return FreeWingForce(
        L=q * C_L,
        D=q * C_D,
        alpha_f=alpha_f,
        V_rt=V_rt,
        L_flap=q * wp.C_r * delta_i,
        L_alpha=q * wp.C_f * alpha_f,
        stalled=stalled,
    )


def stall_rate_limit(
    v_i: float, V_bZ: float, V_bX: float, direction: float, wp: WingParams
) -> float:
    """Largest tilt rate keeping the free wings below their stall incidence.

    ``direction`` >= 0 selects the forward (hover-to-level) bound, < 0 the
    backward one, which tightens with forward speed and can become
    infeasible.
    """
    axial = v_i + V_bZ
    if axial <= 0:
        raise DomainError("axial flow v_i + V_bZ must be positive")
    if direction >= 0:
        return (axial * math.tan(wp.alpha_max) + V_bX) / wp.tilt_arm
    bound = (axial * math.tan(wp.alpha_max) - V_bX) / wp.tilt_arm
    if bound <= 0:
        raise FeasibilityError(
            "backward tilt infeasible: forward speed exceeds the stall margin "
            f"({V_bX:.2f} m/s vs {axial * math.tan(wp.alpha_max):.2f} m/s)"
        )
    return bound


def fixed_wing_forces(
    V_b: float, alpha: float, deltas: tuple[float, float], wp: WingParams, rho: float
) -> FixedWingForces:
    """Lift and drag of the two fixed-wing sides at airspeed ``V_b``."""
    e_w = oswald_factor(wp.A_w)
    q = 0.5 * rho * wp.S_ri * V_b**2
    out = []
    for delta in deltas:
        C_L = wp.C_w0 + wp.C_w_alpha * alpha + wp.C_w_delta * delta
        C_D = wp.C_Dw0 + C_L**2 / (math.pi * wp.A_w * e_w)
        out.append((q * C_L, q * C_D))
    (L5, D5), (L6, D6) = out
    return FixedWingForces(L5=L5, L6=L6, D5=D5, D6=D6)


def gyroscopic_moment(
    beta: float,
    beta_dot: float,
    Omegas: tuple[float, float, float, float],
    J_r: float,
) -> tuple[float, float, float]:
    """Body-frame gyroscopic moment of the tilting rotor group.

    Counter-rotating pairs cancel exactly when all rotors spin at the same
    speed, so this vanishes in nominal operation.
    """
    alt = Omegas[0] - Omegas[1] + Omegas[2] - Omegas[3]
    g = J_r * alt * beta_dot
    return (math.cos(beta) * g, 0.0, -math.sin(beta) * g)


def thrust_vector_moment(
    T: tuple[float, float, float, float], beta: float, wp: WingParams
) -> tuple[float, float, float]:
    """Moment of the four tilted thrust vectors about the center of mass."""
    cb, sb = math.cos(beta), math.sin(beta)
    roll_arm = (T[1] - T[0]) * wp.l_1 + (T[2] - T[3]) * wp.l_2
    pitch_arm = (T[0] + T[1]) * wp.l_4 - (T[2] + T[3]) * wp.l_3
    return (roll_arm * cb, pitch_arm * cb, -roll_arm * sb)


def reactive_torque(
    Q: tuple[float, float, float, float], beta: float
) -> tuple[float, float, float]:
    """Rotor drag-torque reaction in the body frame."""
    alt = Q[0] - Q[1] + Q[2] - Q[3]
    return (math.sin(beta) * alt, 0.0, math.cos(beta) * alt)


def wing_moments(
    L_free: tuple[float, float, float, float],
    L5: float,
    L6: float,
    alpha: float,
    beta: float,
    wp: WingParams,
    f_rl: float,
    J_4: float,
    beta_ddot: float,
) -> tuple[tuple[float, float, float], ...]:
    """Standalone wing/tail/tilt moments: (tau_delta, tau_f, tau_t, tau_beta).

    ``tau_f`` uses the full free-wing lifts; the motion-equation assembly
    instead splits the rear flap share into the control channel.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    L1, L2, L3, L4 = L_free
    tau_delta = ((L6 - L5) * wp.l_5 * ca, 0.0, (L5 - L6) * wp.l_5 * sa)
    roll_arm = (L2 - L1) * wp.l_1 + (L3 - L4) * wp.l_2
    tau_f = (
        roll_arm * sb,
        (L1 + L2) * wp.l_4 * sb - (L3 + L4) * wp.l_3 * sb,
        roll_arm * cb,
    )
    tau_t = (0.0, 0.0, f_rl * wp.l_3)
    tau_beta = (0.0, J_4 * beta_ddot, 0.0)
    return tau_delta, tau_f, tau_t, tau_beta


def tail_forces(
    V_b: float, sideslip: float, S_t: float, C_Dt: float, C_Ltb: float, rho: float
) -> tuple[float, float]:
    """(f_rl, f_rd): vertical-tail side force and drag.

    The reference model never specifies the tail law; this is the plain
    quadratic with the side-force slope acting on sideslip, and it is off
    by default (zero area).
    """
    q = 0.5 * rho * V_b**2 * S_t
    return (q * C_Ltb * sideslip, q * C_Dt)

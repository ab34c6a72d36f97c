"""Per-rotor aerodynamics: inflow, thrust/pitch and torque/pitch maps.

The thrust and torque of each rotor are closed-form integrals of the
blade-element loading over radius and azimuth, linear in the blade pitch
angle phi_7 (the collective measured at 70% radius):

    C_T = (p b1 a / 3 pi) * [ phi_7 * D  + E ]
    C_Q = d1_bar * phi_7 + d2_bar

with the advance-ratio dependent factors written out in
:func:`thrust_from_pitch` and :func:`torque_from_pitch`.  Both maps use the
"factor 2" coefficient convention

    C_T = 2 T / (rho Omega^2 R^2 A),     C_Q = Q / (0.5 rho Omega^2 R^2 A R)

(A = pi R^2), *not* the more common 0.5 rho A (Omega R)^2 form -- keep that
in mind when comparing numbers against other rotor codes.

Induced velocity comes from the momentum-theory quartic, solved with a
safeguarded Newton iteration, except inside the vortex-ring region where
momentum theory fails and an empirical cubic fit takes over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .params import RotorParams


@dataclass(frozen=True)
class InflowState:
    """Normalized airflow through one rotor disk."""

    mu_x: float  # in-plane advance ratio V_bX / (Omega R)
    mu_y: float  # lateral advance ratio V_bY / (Omega R)
    mu_z: float  # axial advance ratio V_bZ / (Omega R)
    rho_beta: float  # tilt-rate ratio beta_dot / Omega
    v_bar_i: float  # normalized induced velocity v_i / (Omega R)

    @classmethod
    def from_velocity(
        cls, V_beta: tuple[float, float, float], v_i: float, beta_dot: float,
        rp: RotorParams,
    ) -> "InflowState":
        vt = rp.tip_speed
        return cls(
            mu_x=V_beta[0] / vt,
            mu_y=V_beta[1] / vt,
            mu_z=V_beta[2] / vt,
            rho_beta=beta_dot / rp.Omega,
            v_bar_i=v_i / vt,
        )


HOVER_INFLOW = InflowState(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RotorOutput:
    """Thrust, torque and the blade pitch that produces them."""

    T: float  # thrust (N)
    Q: float  # drag torque (N m)
    phi_7: float  # blade pitch at 0.7 R (rad)
    v_i: float  # induced velocity (m/s)
    C_T: float
    C_Q: float


# ---------------------------------------------------------------------------
# Induced velocity
# ---------------------------------------------------------------------------

def hover_induced_velocity(T: float, rho: float, R: float) -> float:
    """Mean induced velocity at hover, sqrt(T / (2 rho A))."""
    if T < 0:
        raise DomainError("thrust must be non-negative")
    return math.sqrt(T / (2.0 * rho * math.pi * R * R))


def in_vortex_ring(V_bXh: float, V_bZh: float) -> bool:
    """Vortex-ring regime test in hover-normalized velocity units.

    The boundary itself is assigned to the empirical branch; momentum theory
    is only trusted strictly outside.
    """
    return (2.0 * V_bZh + 3.0) ** 2 + V_bXh**2 <= 1.0


def johnson_induced_velocity(V_bXh: float, V_bZh: float) -> float:
    """Empirical normalized induced velocity inside the vortex-ring region."""
    return V_bZh * (0.373 * V_bZh**2 + 0.598 * V_bXh**2 - 1.991)


def induced_velocity_normalized(
    V_bXh: float, V_bZh: float, max_iter: int = 50, tol: float = 1e-13
) -> float:
    """Positive root of v^4 + 2 Vz v^3 + (Vx^2 + Vz^2) v^2 = 1.

    Safeguarded Newton iteration: iterates are confined to a sign-changing
    bracket and fall back to bisection whenever a Newton step leaves it.
    """
    if in_vortex_ring(V_bXh, V_bZh):
        return johnson_induced_velocity(V_bXh, V_bZh)

    a = 2.0 * V_bZh
    b = V_bXh**2 + V_bZh**2

    def f(v: float) -> float:
        return ((v + a) * v + b) * v * v - 1.0

    def fprime(v: float) -> float:
        return (4.0 * v + 3.0 * a) * v * v + 2.0 * b * v

    lo, hi = 0.0, 2.0 + abs(V_bZh)
    for _ in range(60):
        if f(hi) > 0.0:
            break
        hi *= 2.0
    # initial guess: positive root with the cubic term dropped,
    # v^2 = (-b + sqrt(b^2 + 4))/2 = 2/(b + sqrt(b^2 + 4)), written in the
    # cancellation-free form.  Exact at hover and edgewise, and the right
    # order of magnitude at any advance ratio (the plain hover guess
    # strands Newton hundreds of halvings away when b is large).
    if b > 1e12:  # also dodges b*b overflow at extreme advance ratios
        v = 1.0 / math.sqrt(b)
    else:
        v = math.sqrt(2.0 / (b + math.sqrt(b * b + 4.0)))
    v = min(max(v, lo), hi)

    def scale(v: float) -> float:
        return 1.0 + v * v * (v * v + abs(a) * v + b)

    for _ in range(max_iter):
        fv = f(v)
        if abs(fv) <= tol * scale(v):
            return v
        if fv > 0.0:
            hi = v
        else:
            lo = v
        dv = fprime(v)
        step_ok = dv != 0.0
        if step_ok:
            v_new = v - fv / dv
            step_ok = lo < v_new < hi
        v = v_new if step_ok else 0.5 * (lo + hi)
    residual = f(v)
    if abs(residual) <= 1e-10 * scale(v):
        return v
    raise ConvergenceError(
        f"induced-velocity iteration stalled (residual {residual:.3e})",
        residual=residual,
    )


def induced_velocity(
    T: float, V_bX: float, V_bY: float, V_bZ: float, rho: float, R: float,
    max_iter: int = 50,
) -> float:
    """Induced velocity of a rotor at thrust ``T`` in oblique flow.

    Outside the vortex-ring region this is the positive momentum-theory
    root; inside, the empirical approximation.  Sideslip folds into the
    in-plane component.
    """
    if T < 0:
        raise DomainError("thrust must be non-negative")
    v_h = hover_induced_velocity(T, rho, R)
    speed = math.sqrt(V_bX**2 + V_bY**2 + V_bZ**2)
    if v_h <= 1e-12 * max(1.0, speed):
        return 0.0  # no meaningful wake at (numerically) zero thrust
    V_xh = math.hypot(V_bX, V_bY) / v_h
    V_zh = V_bZ / v_h
    return v_h * induced_velocity_normalized(V_xh, V_zh, max_iter=max_iter)


# ---------------------------------------------------------------------------
# Thrust <-> pitch
# ---------------------------------------------------------------------------

def _thrust_factors(inflow: InflowState, rp: RotorParams) -> tuple[float, float, float]:
    """(k, D, E) with C_T = k (phi_7 D + E), k = p b1 a / (3 pi)."""
    k = rp.p * rp.b_bar1 * rp.a_inf / (3.0 * math.pi)
    mu2 = inflow.mu_x**2 + inflow.mu_y**2
    D = 1.0 + 1.5 * mu2
    E = (
        (0.05 - 0.3 * mu2) * rp.delta_phi_star
        - 1.5 * (inflow.v_bar_i + inflow.mu_z)
        - 0.75 * inflow.mu_y * inflow.rho_beta
    )
    return k, D, E


def thrust_normalization(rp: RotorParams) -> float:
    """T / C_T under the factor-2 coefficient convention."""
    return 0.5 * rp.rho * rp.tip_speed**2 * rp.disk_area


def thrust_from_pitch(
    phi_7: float, inflow: InflowState, rp: RotorParams
) -> tuple[float, float, float, float]:
    """Thrust of one rotor at blade pitch ``phi_7``.

    Returns ``(C_T, T, h1, h2)`` where ``T = h1 * phi_7 + h2`` holds
    identically (h1, h2 are the dimensional affine coefficients).
    """
    k, D, E = _thrust_factors(inflow, rp)
    C_T = k * (phi_7 * D + E)
    scale = thrust_normalization(rp)
    h1 = scale * k * D
    h2 = scale * k * E
    return C_T, scale * C_T, h1, h2


def pitch_from_thrust(C_T: float, inflow: InflowState, rp: RotorParams) -> float:
    """Blade pitch producing thrust coefficient ``C_T`` (inverse of the above)."""
    k, D, E = _thrust_factors(inflow, rp)
    return (C_T / k - E) / D


# ---------------------------------------------------------------------------
# Torque <-> pitch
# ---------------------------------------------------------------------------

def torque_normalization(rp: RotorParams) -> float:
    """Q / C_Q under the factor-2 coefficient convention."""
    return 0.5 * rp.rho * rp.tip_speed**2 * rp.disk_area * rp.R


def torque_from_pitch(
    phi_7: float, inflow: InflowState, rp: RotorParams
) -> tuple[float, float, float, float]:
    """Drag torque of one rotor at blade pitch ``phi_7``.

    Returns ``(C_Q, Q, d1, d2)`` with ``Q = d1 * phi_7 + d2``.  The axial
    through-flow w = v_bar_i + mu_z (plus the tilt-rate term) sets the sign
    of the pitch-proportional part.
    """
    base = rp.p * rp.b_bar1 * rp.a_inf / math.pi
    w = inflow.v_bar_i + inflow.mu_z + 0.5 * inflow.mu_y * inflow.rho_beta
    d1_bar = base / 3.0 * w
    d2_bar = base * (
        rp.C_d0 / (4.0 * rp.a_inf) * (1.0 + inflow.mu_x**2 + inflow.mu_y**2)
        + w * rp.delta_phi_star / 60.0
        - 0.5 * ((inflow.v_bar_i + inflow.mu_z) ** 2 + 0.25 * inflow.rho_beta**2)
    )
    C_Q = d1_bar * phi_7 + d2_bar
    scale = torque_normalization(rp)
    return C_Q, scale * C_Q, scale * d1_bar, scale * d2_bar


def torque_from_thrust(T: float, inflow: InflowState, rp: RotorParams) -> float:
    """Drag torque at thrust ``T``: the affine thrust->pitch->torque composition."""
    _, _, h1, h2 = thrust_from_pitch(0.0, inflow, rp)
    if h1 == 0.0:
        raise DomainError("thrust/pitch map is singular (h1 = 0)")
    _, _, d1, d2 = torque_from_pitch(0.0, inflow, rp)
    return d1 * T / h1 + (d2 - d1 * h2 / h1)


def rotor_output(
    T_command: float,
    V_beta: tuple[float, float, float],
    beta_dot: float,
    rp: RotorParams,
) -> RotorOutput:
    """Resolve a thrust command into pitch, induced velocity and torque."""
    v_i = induced_velocity(max(T_command, 0.0), V_beta[0], V_beta[1], V_beta[2],
                           rp.rho, rp.R)
    inflow = InflowState.from_velocity(V_beta, v_i, beta_dot, rp)
    C_T = T_command / thrust_normalization(rp)
    phi_7 = pitch_from_thrust(C_T, inflow, rp)
    C_Q, Q, _, _ = torque_from_pitch(phi_7, inflow, rp)
    return RotorOutput(T=T_command, Q=Q, phi_7=phi_7, v_i=v_i, C_T=C_T, C_Q=C_Q)


# ---------------------------------------------------------------------------
# Power
# ---------------------------------------------------------------------------

def power_coefficients(
    C_T: float, rp: RotorParams, kappa: float
) -> tuple[float, float, float]:
    """(induced, profile, total) power coefficients at thrust coefficient C_T."""
    if C_T < 0:
        raise DomainError("C_T must be non-negative")
    C_Pi = 0.5 * kappa * C_T**1.5
    C_P0 = rp.solidity * rp.C_d0 / 4.0
    return C_Pi, C_P0, C_Pi + C_P0

"""Finite-time convergent observers for velocities and lumped disturbances.

Position channels run a third-order sign-injection observer per axis
(measuring position, estimating velocity and the mass-scaled disturbance);
attitude channels run a super-twisting pair per axis (measuring the Euler
rate, estimating the inertia-scaled disturbance):

    x1' = x2 + ( -k_p1 |e|^(2/3) sgn e )        e = x1 - y
    x2' = x3 + u_known - k_p2 |e|^(1/3) sgn e
    x3' = -k_p3 sgn e

    z1' = z2 + u_known - k_a1 |e|^(1/2) sgn e   e = z1 - y
    z2' = -k_a2 sgn e

Gains are admissible when the associated polynomials are Hurwitz and the
sign-injection gain dominates the scaled disturbance derivative.  The
continuous-time theory gives exact finite-time convergence; in discrete
time the estimates chatter in a band set by the gain times the integration
substep, which is why the step functions sub-divide the plant step and
advance the sampled measurement quadratically across the substeps (a plain
zero-order hold leaves a velocity-proportional bias through the
fractional-power terms).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class ObserverGains:
    k_p1: float
    k_p2: float
    k_p3: float
    k_a1: float
    k_a2: float
    # k_a3 is the disturbance-derivative margin parameter from the design
    # tables; it does not enter the attitude observer dynamics.
    k_a3: float = 6.0

    def validate(self) -> None:
        if min(self.k_p1, self.k_p2, self.k_p3, self.k_a1, self.k_a2) <= 0:
            raise ConfigError("observer gains must be positive")


TABLE_GAINS = ObserverGains(k_p1=6.0, k_p2=11.0, k_p3=6.0, k_a1=6.0, k_a2=11.0, k_a3=6.0)


@dataclass(frozen=True)
class ObserverBank:
    """Estimates for the three position axes and three attitude axes.

    ``pos[i] = (position, velocity, disturbance/m)`` per inertial axis,
    ``att[i] = (rate, disturbance/J_i)`` per Euler axis.  The previous
    measurements ride along so the step functions can extrapolate the
    held measurement across their substeps (see module docstring).
    """

    pos: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 0.0),) * 3
    att: tuple[tuple[float, float], ...] = ((0.0, 0.0),) * 3
    prev_y_p: tuple[tuple[float, float, float], ...] = ()  # up to 2 past samples
    prev_y_a: tuple[tuple[float, float, float], ...] = ()

    @property
    def velocity(self) -> tuple[float, float, float]:
        return (self.pos[0][1], self.pos[1][1], self.pos[2][1])

    @property
    def disturbance_accel(self) -> tuple[float, float, float]:
        return (self.pos[0][2], self.pos[1][2], self.pos[2][2])

    @property
    def rates(self) -> tuple[float, float, float]:
        return (self.att[0][0], self.att[1][0], self.att[2][0])

    @property
    def disturbance_angular(self) -> tuple[float, float, float]:
        return (self.att[0][1], self.att[1][1], self.att[2][1])


def _powsign(e: float, exponent: float, band: float = 0.0) -> float:
    """Sign-preserving |e|^exponent, linearized inside |e| < band.

    The linearization slope band**(exponent - 1) matches the fractional
    power at the band edge, so inside the layer the whole observer becomes
    the same Hurwitz chain sped up by band**(-1/3) -- exponential instead
    of sliding.  Outside the layer the exact homogeneous injection (and its
    finite-time reaching) is untouched.
    """
    if e > band:
        return e**exponent
    if e < -band:
        return -((-e) ** exponent)
    if band == 0.0:
        return 0.0
    return e * band ** (exponent - 1.0)


def _extrapolators(y: float, history, i: int, dt: float):
    """(rate, accel) finite-difference extrapolation coefficients for y_i."""
    if len(history) >= 2:
        y1, y2 = history[-1][i], history[-2][i]
        return (3.0 * y - 4.0 * y1 + y2) / (2.0 * dt), (y - 2.0 * y1 + y2) / (dt * dt)
    if len(history) == 1:
        return (y - history[-1][i]) / dt, 0.0
    return 0.0, 0.0


def position_observer_step(
    bank: ObserverBank,
    y_p: tuple[float, float, float],
    known_acc: tuple[float, float, float],
    gains: ObserverGains,
    dt: float,
    substeps: int = 20,
) -> ObserverBank:
    """Advance the three position observers by one plant step.

    ``known_acc`` is the modeled specific force (u_p + Gamma_p)/m held over
    the step.  The sampled measurement is advanced across the substeps by a
    one-sided quadratic extrapolation from its last two samples; holding it
    constant instead biases the fractional-power injections by the vehicle
    velocity.
    """
    h = dt / substeps
    k1, k2, k3 = gains.k_p1, gains.k_p2, gains.k_p3
    new_pos = []
    for i in range(3):
        x1, x2, x3 = bank.pos[i]
        y = y_p[i]
        u = known_acc[i]
        y_rate, y_acc = _extrapolators(y, bank.prev_y_p, i, dt)
        for j in range(substeps):
            tau = j * h
            e = x1 - (y + y_rate * tau + 0.5 * y_acc * tau * tau)
            x1 += h * (x2 - k1 * _powsign(e, 2.0 / 3.0, SIGN_BAND))
            x2 += h * (x3 + u - k2 * _powsign(e, 1.0 / 3.0, SIGN_BAND))
            x3 += h * (-k3 * _sgn(e))
        new_pos.append((x1, x2, x3))
    history = (bank.prev_y_p + (tuple(y_p),))[-2:]
    return ObserverBank(pos=tuple(new_pos), att=bank.att,
                        prev_y_p=history, prev_y_a=bank.prev_y_a)


def attitude_observer_step(
    bank: ObserverBank,
    y_a: tuple[float, float, float],
    known_ang_acc: tuple[float, float, float],
    gains: ObserverGains,
    dt: float,
    substeps: int = 20,
) -> ObserverBank:
    """Advance the three attitude-rate observers by one plant step.

    ``known_ang_acc`` is (u_a + u_beta + Gamma_a)/J per axis; the measured
    inputs are the Euler angle rates, advanced across substeps the same way
    as the position measurements.
    """
    h = dt / substeps
    k1, k2 = gains.k_a1, gains.k_a2
    new_att = []
    for i in range(3):
        z1, z2 = bank.att[i]
        y = y_a[i]
        u = known_ang_acc[i]
        y_rate, y_acc = _extrapolators(y, bank.prev_y_a, i, dt)
        for j in range(substeps):
            tau = j * h
            e = z1 - (y + y_rate * tau + 0.5 * y_acc * tau * tau)
            z1 += h * (z2 + u - k1 * _powsign(e, 0.5, SIGN_BAND))
            z2 += h * (-k2 * _sgn(e))
        new_att.append((z1, z2))
    history = (bank.prev_y_a + (tuple(y_a),))[-2:]
    return ObserverBank(pos=bank.pos, att=tuple(new_att),
                        prev_y_p=bank.prev_y_p, prev_y_a=history)


# Width of the proportional band replacing the homogeneous injections near
# zero error.  The exact relay parks the discrete estimates up to one plant
# step of slew away from the truth whenever the loop settles (the overshoot
# of the last crossing), which shows up as a standing moment bias of
# k * dt * J; the thin linear band removes the overshoot while leaving the
# finite-time reaching phase (|e| >> band) untouched.
SIGN_BAND = 5e-5


def _sgn(e: float, band: float = SIGN_BAND) -> float:
    if e > band:
        return 1.0
    if e < -band:
        return -1.0
    return e / band if band > 0.0 else 0.0


# ---------------------------------------------------------------------------
# Gain admissibility and Lyapunov certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GainReport:
    roots_p: tuple[complex, ...]
    roots_a: tuple[complex, ...]
    hurwitz_p: bool
    hurwitz_a: bool
    margin_p: float  # k_p3 minus the scaled disturbance-derivative bound
    margin_a: float  # k_a2 minus the scaled disturbance-derivative bound
    ok: bool

    def as_text(self) -> str:
        lines = [
            f"position cubic roots : {', '.join(f'{r:.4g}' for r in self.roots_p)}"
            f"  hurwitz={self.hurwitz_p}",
            f"attitude quad roots  : {', '.join(f'{r:.4g}' for r in self.roots_a)}"
            f"  hurwitz={self.hurwitz_a}",
            f"disturbance margins  : position {self.margin_p:.4g}, "
            f"attitude {self.margin_a:.4g}",
            f"admissible           : {self.ok}",
        ]
        return "\n".join(lines)


def validate_gains(
    gains: ObserverGains, bound_p: float = 0.0, bound_a: float = 0.0
) -> GainReport:
    """Check the Hurwitz conditions and disturbance-derivative margins.

    ``bound_p`` is sup|d Delta_p / dt| / m over the channels, ``bound_a``
    the inertia-scaled counterpart for the attitude channels.
    """
    roots_p = tuple(np.roots([1.0, gains.k_p1, gains.k_p2, gains.k_p3]))
    roots_a = tuple(np.roots([1.0, gains.k_a1, gains.k_a2]))
    hurwitz_p = all(r.real < 0 for r in roots_p)
    hurwitz_a = all(r.real < 0 for r in roots_a)
    margin_p = gains.k_p3 - bound_p
    margin_a = gains.k_a2 - bound_a
    return GainReport(
        roots_p=roots_p,
        roots_a=roots_a,
        hurwitz_p=hurwitz_p,
        hurwitz_a=hurwitz_a,
        margin_p=margin_p,
        margin_a=margin_a,
        ok=hurwitz_p and hurwitz_a and margin_p > 0 and margin_a > 0,
    )


def lyapunov_certificates(gains: ObserverGains):
    """Candidate Lyapunov matrices of both observer families and their spectra.

    Returns ``(P_p, P_a, eig_p, eig_a)``; positive eigenvalues certify the
    quadratic forms used in the finite-time convergence argument.
    """
    k1, k2, k3 = gains.k_p1, gains.k_p2, gains.k_p3
    P_p = 0.5 * np.array([
        [2.0 * k3 + k1**2 + k2**2, -k1, -k2],
        [-k1, 2.0, 0.0],
        [-k2, 0.0, 2.0],
    ])
    a1, a2 = gains.k_a1, gains.k_a2
    P_a = 0.5 * np.array([
        [4.0 * a2 + a1**2, -a1],
        [-a1, 2.0],
    ])
    eig_p = np.linalg.eigvalsh(P_p)
    eig_a = np.linalg.eigvalsh(P_a)
    return P_p, P_a, eig_p, eig_a


def disturbance_derivative_bounds(
    m: float, J: tuple[float, float, float], scale: float = 1.0,
    t_end: float = 30.0, n: int = 30_000,
):
    """Numerical sup of the scaled disturbance derivatives over a run.

    Differentiates the analytic disturbance signals on a dense grid; used
    to confirm the gain margins actually hold for the bundled signals.
    """
    from .dynamics import uncertainty_signals

    ts = np.linspace(0.0, t_end, n)
    dt = ts[1] - ts[0]
    dp = np.array([uncertainty_signals(float(t), scale)[0] for t in ts])
    da = np.array([uncertainty_signals(float(t), scale)[1] for t in ts])
    ddp = np.max(np.abs(np.diff(dp, axis=0)), axis=0) / dt
    dda = np.max(np.abs(np.diff(da, axis=0)), axis=0) / dt
    bound_p = float(np.max(ddp)) / m
    bound_a = float(np.max(dda / np.array(J)))
    return bound_p, bound_a

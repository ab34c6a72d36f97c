"""Scenario configuration, references, trim solvers and simulation runs.

A scenario wires the plant, the observer bank and the switched controller
together, integrates at a fixed step and writes the trajectory to CSV with
one row per log interval plus a structured-text summary next to it.

Reference design: the forward-speed reference is a time-shifted, scaled
copy of the tilt-angle profile shape (quadratic S-curve), integrated
analytically for the position reference.  Output files are byte-identical
across runs with identical configuration.
"""

from __future__ import annotations

import math
import pathlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import dynamics
from .control import ControllerGains, TiltProfile, TransitionController, tilt_feasibility
from .dynamics import ControlInput, DisturbanceModel, RigidState
from .errors import ConfigError, ConvergenceError, FeasibilityError
from .observers import ObserverGains
from .params import AircraftParams, angle_from
from .sizing import load_params

CSV_COLUMNS = (
    "t,X,Y,Z,Vx,Vy,Vz,phi,theta,psi,p_rate,q_rate,r_rate,"
    "beta,beta_dot,beta_ddot,T1,T2,T3,T4,M_beta,delta,"
    "dhat_p1,dhat_p2,dhat_p3,dhat_a1,dhat_a2,dhat_a3"
)


# ---------------------------------------------------------------------------
# References
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpeedRamp:
    """S-curve speed reference (same quadratic family as the tilt profile)."""

    v0: float
    v1: float
    t_start: float
    duration: float

    def speed(self, t: float) -> tuple[float, float]:
        """(v_d, a_d) at time t."""
        tau = t - self.t_start
        T = self.duration
        dv = self.v1 - self.v0
        if tau <= 0.0:
            return self.v0, 0.0
        if tau >= T:
            return self.v1, 0.0
        x = tau / T
        if x <= 0.5:
            return self.v0 + dv * 2.0 * x * x, dv * 4.0 * tau / (T * T)
        return (
            self.v0 + dv * (1.0 - 2.0 * (1.0 - x) ** 2),
            dv * 4.0 * (T - tau) / (T * T),
        )

    def distance(self, t: float) -> float:
        """Integral of the speed reference from 0 to t."""
        tau = min(max(t - self.t_start, 0.0), self.duration)
        T = self.duration
        dv = self.v1 - self.v0
        base = self.v0 * t
        if tau <= 0.0:
            return base
        if tau <= 0.5 * T:
            s = (2.0 / 3.0) * tau**3 / (T * T)
        else:
            s = (
                T / 12.0
                + (tau - 0.5 * T)
                + (2.0 * T / 3.0) * ((1.0 - tau / T) ** 3 - 0.125)
            )
        extra = (self.v1 - self.v0) * max(t - self.t_start - self.duration, 0.0)
        return base + dv * s + extra


@dataclass(frozen=True)
class PositionReference:
    """Straight-line track at constant altitude with an S-curve speed law."""

    ramp: SpeedRamp
    Z_d: float
    X_0: float = 0.0
    Y_d: float = 0.0

    def __call__(self, t: float):
        v, a = self.ramp.speed(t)
        x = self.X_0 + self.ramp.distance(t)
        return ((x, self.Y_d, self.Z_d), (v, 0.0, 0.0), (a, 0.0, 0.0))


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    direction: str  # hover_to_level | level_to_hover
    Z_d: float
    speed_start: float
    speed_target: float
    att_ref: tuple[float, float, float]
    initial_state: RigidState
    initial_thrusts: tuple[float, float, float, float]
    disturbance_scale: float
    t_1: float
    tilt_t0: float
    ramp_start: float
    ramp_duration: float
    dt: float
    t_end: float
    log_interval: float
    out: str
    controller_gains: ControllerGains = ControllerGains()
    observer_gains: ObserverGains = ObserverGains(6.0, 11.0, 6.0, 6.0, 11.0, 6.0)
    observer_substeps: int = 20
    beta_switch: float = math.pi / 4.0
    switch_hysteresis: float = math.radians(0.5)

    def validate(self) -> None:
        if self.direction not in ("hover_to_level", "level_to_hover"):
            raise ConfigError(f"unknown scenario direction {self.direction!r}")
        if self.dt <= 0 or self.t_end <= 0:
            raise ConfigError("dt and t_end must be positive")
        if not all(map(math.isfinite, self.initial_state.as_vector())):
            raise ConfigError("initial state must be finite")


def load_scenario(source, base_dir: pathlib.Path | None = None):
    """Load (ScenarioConfig, AircraftParams) from a scenario TOML file."""
    from .sizing import _load_toml

    raw = _load_toml(source)
    if "scenario" not in raw:
        raise ConfigError("missing key 'scenario'")
    sc = raw["scenario"]
    if "direction" not in sc:
        raise ConfigError("missing key 'direction' in [scenario]")
    base = base_dir or (pathlib.Path(source).parent if not isinstance(source, dict)
                        else pathlib.Path("."))
    params_file = sc.get("params_file", "aircraft.toml")
    params = load_params(base / params_file)
    if "limits" in raw:  # scenario-level actuator overrides
        lt = raw["limits"]
        limits = replace(
            params.limits,
            flap_limit=angle_from(lt, "flap_limit", "limits",
                                  default=params.limits.flap_limit),
            tilt_accel_limit=float(lt.get("tilt_accel_limit",
                                          params.limits.tilt_accel_limit)),
        )
        params = replace(params, limits=limits)

    ini = sc.get("initial", {})
    state = RigidState(
        x_p=tuple(float(v) for v in ini.get("position", (0.0, 0.0, 100.0))),
        v_p=tuple(float(v) for v in ini.get("velocity", (0.0, 0.0, 0.0))),
        x_a=tuple(math.radians(float(v)) for v in ini.get("attitude_deg", (0, 0, 0))),
        w_a=tuple(math.radians(float(v)) for v in ini.get("rates_deg", (0, 0, 0))),
        beta=angle_from(ini, "beta", "scenario.initial", default=0.0),
        beta_dot=float(ini.get("beta_dot", 0.0)),
    )
    thrusts = tuple(float(v) for v in sc.get("initial_thrusts", (0.0,) * 4))
    att = tuple(math.radians(float(v)) for v in sc.get("attitude_ref_deg", (0, 0, 0)))

    ctl_t = raw.get("controller", {})
    gains_t = ctl_t
    gains = ControllerGains(
        k_1=float(gains_t.get("k_1", 5.0)),
        k_2=float(gains_t.get("k_2", 5.0)),
        k_3=float(gains_t.get("k_3", 2.5)),
        k_4=float(gains_t.get("k_4", 4.5)),
        k_5=float(gains_t.get("k_5", 2.63)),
        k_6=float(gains_t.get("k_6", 4.55)),
    )
    obs_t = raw.get("observer", {})
    obs = ObserverGains(
        k_p1=float(obs_t.get("k_p1", 6.0)),
        k_p2=float(obs_t.get("k_p2", 11.0)),
        k_p3=float(obs_t.get("k_p3", 6.0)),
        k_a1=float(obs_t.get("k_a1", 6.0)),
        k_a2=float(obs_t.get("k_a2", 11.0)),
        k_a3=float(obs_t.get("k_a3", 6.0)),
    )

    cfg = ScenarioConfig(
        name=str(sc.get("name", "scenario")),
        direction=str(sc["direction"]),
        Z_d=float(sc.get("Z_d", 100.0)),
        speed_start=float(sc.get("speed_start", 0.0)),
        speed_target=float(sc.get("speed_target", 100.0)),
        att_ref=att,
        initial_state=state,
        initial_thrusts=thrusts,
        disturbance_scale=float(sc.get("disturbance_scale", 1.0)),
        t_1=float(sc.get("t_1", 5.0)),
        tilt_t0=float(sc.get("tilt_t0", 0.0)),
        ramp_start=float(sc.get("ramp_start", 0.0)),
        ramp_duration=float(sc.get("ramp_duration", 14.0)),
        dt=float(sc.get("dt", 1e-3)),
        t_end=float(sc.get("t_end", 40.0)),
        log_interval=float(sc.get("log_interval", 0.01)),
        out=str(sc.get("out", "runs/" + str(sc.get("name", "scenario")) + ".csv")),
        controller_gains=gains,
        observer_gains=obs,
        observer_substeps=int(obs_t.get("substeps", 20)),
        beta_switch=angle_from(ctl_t, "beta_w", "controller",
                               default=math.pi / 4.0),
        switch_hysteresis=angle_from(ctl_t, "hysteresis", "controller",
                                     default=math.radians(0.5)),
    )
    cfg.validate()
    return cfg, params


# ---------------------------------------------------------------------------
# Simulation run
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    config: ScenarioConfig
    rows: list  # logged rows, matching CSV_COLUMNS
    summary: dict
    csv_path: pathlib.Path | None


def _fmt(x: float) -> str:
    return repr(float(x))


def run_scenario(
    cfg: ScenarioConfig,
    params: AircraftParams,
    write: bool = True,
    dt: float | None = None,
    t_end: float | None = None,
    disturbance_scale: float | None = None,
    out: str | None = None,
) -> RunResult:
    """Integrate one mode-transition scenario and write CSV + summary."""
    cfg.validate()
    dt = cfg.dt if dt is None else dt
    t_end = cfg.t_end if t_end is None else t_end
    scale = cfg.disturbance_scale if disturbance_scale is None else disturbance_scale
    out_path = pathlib.Path(cfg.out if out is None else out)

    profile = TiltProfile(cfg.direction, t_1=cfg.t_1, t_0=cfg.tilt_t0)
    ramp = SpeedRamp(cfg.speed_start, cfg.speed_target, cfg.ramp_start,
                     cfg.ramp_duration)
    pos_ref = PositionReference(ramp, cfg.Z_d, X_0=0.0)
    controller = TransitionController(
        params, cfg.controller_gains, cfg.observer_gains, profile, pos_ref,
        cfg.att_ref, cfg.initial_thrusts, observer_substeps=cfg.observer_substeps,
        dt=dt, beta_switch=cfg.beta_switch, hysteresis=cfg.switch_hysteresis,
    )
    disturbance = DisturbanceModel(scale=scale)

    log_every = max(1, int(round(cfg.log_interval / dt)))
    rows: list[tuple] = []
    track = {
        "max_abs_z_err": 0.0,
        "max_vx": -math.inf,
        "t_speed_reached": None,
        "t_beta_done": None,
        "last_estimate_violation": 0.0,
        "beta_at_completion": None,
        "state_t1": None,
        "input_t1": None,
    }
    beta_goal = math.pi / 2 if cfg.direction == "hover_to_level" else 0.0
    t1_abs = cfg.tilt_t0 + cfg.t_1
    t_complete = cfg.tilt_t0 + 2.0 * cfg.t_1
    J = (params.J_1, params.J_2, params.J_3)

    def on_step(k, t, state, inp):
        track["max_abs_z_err"] = max(track["max_abs_z_err"],
                                     abs(state.x_p[2] - cfg.Z_d))
        track["max_vx"] = max(track["max_vx"], state.v_p[0])
        bank_now = controller.bank
        if bank_now is not None:
            state_err = max(
                max(abs(bank_now.velocity[i] - state.v_p[i]) for i in range(3)),
                max(abs(bank_now.rates[i] - state.w_a[i]) for i in range(3)),
            )
            if state_err >= 1e-3:
                track["last_estimate_violation"] = t
        if track["t_speed_reached"] is None and abs(state.v_p[0] - cfg.speed_target) <= 1.0:
            track["t_speed_reached"] = t
        if track["t_beta_done"] is None and abs(state.beta - beta_goal) <= 1e-3:
            track["t_beta_done"] = t
        if track["beta_at_completion"] is None and t >= t_complete:
            track["beta_at_completion"] = state.beta
        if track["state_t1"] is None and t >= t1_abs:
            track["state_t1"] = state
            track["input_t1"] = inp
        if k % log_every == 0:
            bank = controller.bank
            dhat_p = tuple(params.m * v for v in bank.disturbance_accel)
            dhat_a = tuple(J[i] * bank.disturbance_angular[i] for i in range(3))
            rows.append(
                (t, *state.x_p, *state.v_p, *state.x_a, *state.w_a,
                 state.beta, state.beta_dot, -inp.M_beta / params.J_4,
                 *inp.T, inp.M_beta, inp.delta, *dhat_p, *dhat_a)
            )

    final = dynamics.integrate(
        cfg.initial_state, controller, disturbance, params, dt, t_end,
        on_step=on_step,
    )

    ref_end = pos_ref(t_end)
    summary = {
        "name": cfg.name,
        "direction": cfg.direction,
        "t_end": t_end,
        "dt": dt,
        "final_Z": final.x_p[2],
        "final_Z_error": final.x_p[2] - cfg.Z_d,
        "final_speed": final.v_p[0],
        "final_speed_error": final.v_p[0] - cfg.speed_target,
        "final_X_error": final.x_p[0] - ref_end[0][0],
        "max_abs_Z_error": track["max_abs_z_err"],
        "max_forward_speed": track["max_vx"],
        "t_speed_reached": track["t_speed_reached"],
        "t_beta_done": track["t_beta_done"],
        "beta_at_completion": track["beta_at_completion"],
        "tilt_completion_time": t_complete,
        "final_beta": final.beta,
        "final_attitude_error_deg": tuple(
            math.degrees(final.x_a[i] - cfg.att_ref[i]) for i in range(3)
        ),
        # first time the observer state-estimate errors drop below 1e-3
        # and stay there (the documented convergence-time statistic)
        "observer_convergence_time": track["last_estimate_violation"] + dt,
        "thrust_saturated_steps": controller.diag.thrust_saturated_steps,
        "thrust_clamp_steps": controller.diag.thrust_clamp_steps,
        "flap_saturated_steps": controller.diag.flap_saturated_steps,
        "flap_hold_steps": controller.diag.flap_hold_steps,
        "max_mixer_residual": controller.diag.max_mixer_residual,
        "max_lateral_residual": controller.diag.max_lateral_residual,
    }

    # tilt feasibility evaluated at the simulated condition at t_0 + t_1,
    # where the scheduled tilt rate peaks
    if track["state_t1"] is not None:
        s1, i1 = track["state_t1"], track["input_t1"]
        aero = dynamics.aero_state(s1, i1, params)
        v_i = sum(out_.v_i for out_ in aero.rotors) / 4.0
        rep = tilt_feasibility(profile, v_i, aero.V_beta[0], aero.V_beta[2],
                               params.wing)
        summary["tilt_feasible"] = rep.feasible
        summary["tilt_rate_margin"] = rep.margin
        summary["tilt_t1_minimum"] = rep.t1_minimum

    csv_path = None
    if write:
        csv_path = out_path
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        with open(csv_path, "w", newline="\n") as fh:
            fh.write(CSV_COLUMNS + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        with open(csv_path.with_suffix(".summary.txt"), "w", newline="\n") as fh:
            for key, val in summary.items():
                fh.write(f"{key} = {val}\n")
    return RunResult(config=cfg, rows=rows, summary=summary, csv_path=csv_path)


# ---------------------------------------------------------------------------
# Trim solvers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrimResult:
    thrusts: tuple[float, float, float, float]
    pitch: float  # commanded pitch attitude (rad)
    residual_force: float  # N
    residual_moment: float  # N m
    iterations: int
    extras: dict = field(default_factory=dict)

    @property
    def total_thrust(self) -> float:
        return sum(self.thrusts)

    @property
    def mean_thrust(self) -> float:
        return self.total_thrust / 4.0


def _hover_residual(T, params: AircraftParams):
    state = RigidState()
    inp = ControlInput(T=tuple(T))
    aero = dynamics.aero_state(state, inp, params)
    u_p, Gamma_p = dynamics.assemble_forces(state, inp, params, aero)
    u_a, _, Gamma_a, _, _ = dynamics.assemble_moments(state, inp, params, aero)
    return np.array([
        u_p[2] + Gamma_p[2],
        u_a[0] + Gamma_a[0],
        u_a[1] + Gamma_a[1],
        u_a[2] + Gamma_a[2],
    ])


def trim_hover(params: AircraftParams, tol: float = 1e-9, max_iter: int = 60) -> TrimResult:
    """Damped-Newton hover trim: vertical balance and zero body moments.

    The front/rear arms differ, so zero pitch moment forces an asymmetric
    front/rear thrust split around the mg/4 mean.
    """
    T = np.full(4, params.m * params.g / 4.0)
    res = _hover_residual(T, params)
    for it in range(1, max_iter + 1):
        if np.max(np.abs(res)) <= tol:
            return TrimResult(
                thrusts=tuple(float(v) for v in T),
                pitch=0.0,
                residual_force=abs(float(res[0])),
                residual_moment=float(np.max(np.abs(res[1:]))),
                iterations=it - 1,
                extras={"front_rear_split": (float(T[0]), float(T[2]))},
            )
        Jac = np.zeros((4, 4))
        h = 1e-3
        for j in range(4):
            Tp = T.copy()
            Tp[j] += h
            Jac[:, j] = (_hover_residual(Tp, params) - res) / h
        step = np.linalg.solve(Jac, -res)
        lam = 1.0
        for _ in range(20):  # damping: accept only residual-reducing steps
            T_new = T + lam * step
            res_new = _hover_residual(T_new, params)
            if np.max(np.abs(res_new)) < np.max(np.abs(res)):
                T, res = T_new, res_new
                break
            lam *= 0.5
        else:
            break
    raise ConvergenceError(
        f"hover trim stalled at residual {np.max(np.abs(res)):.3e}",
        residual=float(np.max(np.abs(res))),
    )


def _cruise_residual(x, V, beta, params: AircraftParams):
    T, theta = x
    state = RigidState(v_p=(V, 0.0, 0.0), x_a=(0.0, theta, 0.0), beta=beta)
    inp = ControlInput(T=(T,) * 4)
    aero = dynamics.aero_state(state, inp, params)
    u_p, Gamma_p = dynamics.assemble_forces(state, inp, params, aero)
    return np.array([u_p[0] + Gamma_p[0], u_p[2] + Gamma_p[2]]), aero


def trim_cruise(
    params: AircraftParams, V: float, beta: float = math.pi / 2,
    tol: float = 1e-9, max_iter: int = 80,
) -> TrimResult:
    """Level-flight trim at speed ``V``: thrust = drag, lift = weight.

    Solves (per-rotor thrust, pitch attitude) by damped Newton iteration.
    The pitch that balances lift can be strongly negative when the wing's
    zero-incidence lift exceeds the weight at speed; the solver reports
    whatever attitude closes the force balance (see the README notes).
    """
    if V <= 1.0:
        raise FeasibilityError("cruise trim needs a meaningful airspeed")
    x = np.array([params.m * params.g / 8.0, 0.0])
    res, _ = _cruise_residual(x, V, beta, params)
    for it in range(1, max_iter + 1):
        if np.max(np.abs(res)) <= tol:
            T, theta = float(x[0]), float(x[1])
            if T < -1.0 or abs(theta) >= 1.5:  # tolerate a numerically zero T
                raise FeasibilityError(
                    f"no feasible cruise trim at V = {V} m/s "
                    f"(T = {T:.1f} N, pitch = {theta:.3f} rad)"
                )
            _, aero = _cruise_residual(x, V, beta, params)
            state = RigidState(v_p=(V, 0, 0), x_a=(0, theta, 0), beta=beta)
            inp = ControlInput(T=(T,) * 4)
            u_a, _, Gamma_a, _, _ = dynamics.assemble_moments(state, inp, params, aero)
            pitch_moment = u_a[1] + Gamma_a[1]
            # rear-flap bias that would zero the residual pitch moment
            denom = (params.rotor.rho * params.wing.S_fi
                     * aero.free[2].V_rt**2 * params.wing.C_r * params.wing.l_3
                     * math.sin(beta))
            delta_trim = -pitch_moment / denom if denom > 1e-9 else 0.0
            return TrimResult(
                thrusts=(T,) * 4,
                pitch=theta,
                residual_force=float(np.max(np.abs(res))),
                residual_moment=abs(pitch_moment),
                iterations=it - 1,
                extras={"alpha": aero.alpha, "delta_trim": delta_trim,
                        "airspeed": V},
            )
        Jac = np.zeros((2, 2))
        for j, h in enumerate((1.0, 1e-5)):
            xp = x.copy()
            xp[j] += h
            Jac[:, j] = (_cruise_residual(xp, V, beta, params)[0] - res) / h
        step = np.linalg.solve(Jac, -res)
        lam = 1.0
        for _ in range(25):
            x_new = x + lam * step
            res_new, _ = _cruise_residual(x_new, V, beta, params)
            if np.max(np.abs(res_new)) < np.max(np.abs(res)):
                x, res = x_new, res_new
                break
            lam *= 0.5
        else:
            break
    raise ConvergenceError(
        f"cruise trim stalled at residual {np.max(np.abs(res)):.3e}",
        residual=float(np.max(np.abs(res))),
    )

"""Vehicle sizing from gross weight and design targets.

The chain goes: disk loading fixes the rotor radius, blade aspect ratio and
solidity fix chord and blade count, wing loadings fix the fixed-wing and
free-wing areas, and the maneuverability ratio fixes the rated thrust.

Note on units: the bundled design tables quote disk loading in kg/m^2
(mass-based).  ``rotor_radius`` therefore takes the gross *mass* directly;
a weight-based loading in N/m^2 would need dividing by g first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, DesignError, DomainError
from .params import (
    GRAVITY,
    ActuatorLimits,
    AircraftParams,
    RotorParams,
    TailParams,
    WingParams,
    angle_from,
)


@dataclass(frozen=True)
class DesignTargets:
    """Inputs of the sizing chain."""

    m: float  # gross mass (kg)
    rho_mT: float  # maneuverability thrust ratio (4 T_e / (m g))
    rho_e: float  # engine thrust-to-weight ratio
    m_e: float  # engine mass (kg)
    DL_QT: float  # design disk loading (kg/m^2)
    rho_b: float  # blade aspect ratio R/b
    sigma: float  # rotor solidity
    A_w: float  # fixed-wing aspect ratio
    WL_w: float  # fixed-wing loading (kg/m^2)
    WL_ws: float  # all-wings loading (kg/m^2)
    S_front: float  # front fixed-wing-root area (m^2)
    kappa: float  # induced power factor
    C_d0: float  # blade profile drag coefficient

    def validate(self) -> None:
        for name in (
            "m", "rho_mT", "rho_e", "m_e", "DL_QT", "rho_b", "sigma",
            "A_w", "WL_w", "WL_ws", "S_front", "kappa", "C_d0",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"design target {name!r} must be positive")
        if self.rho_mT < 1.0:
            raise ConfigError("rho_mT must be >= 1 (thrust must exceed weight)")
        if not 0.04 <= self.sigma <= 0.2:
            raise ConfigError("sigma outside the sane solidity range [0.04, 0.2]")
        if self.WL_ws > self.WL_w:
            raise ConfigError("WL_ws must not exceed WL_w (all wings >= fixed wing)")


@dataclass(frozen=True)
class SizingResult:
    R: float  # rotor radius (m)
    b: float  # blade chord (m)
    p: int  # blade count
    T_e: float  # per-rotor rated thrust (N)
    S_w: float  # fixed-wing area (m^2)
    l_w: float  # fixed-wing span (m)
    c_w: float  # fixed-wing chord (m)
    S_fi: float  # per-free-wing area (m^2)
    C_T_opt: float  # optimum thrust coefficient

    def as_text(self) -> str:
        rows = [
            ("rotor radius R", self.R, "m"),
            ("blade chord b", self.b, "m"),
            ("blade count p", self.p, ""),
            ("rated thrust T_e", self.T_e, "N"),
            ("fixed-wing area S_w", self.S_w, "m^2"),
            ("fixed-wing span l_w", self.l_w, "m"),
            ("fixed-wing chord c_w", self.c_w, "m"),
            ("free-wing area S_fi", self.S_fi, "m^2"),
            ("optimum C_T", self.C_T_opt, ""),
        ]
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{name:<{width}}  {value:12.4f} {unit}" for name, value, unit in rows)


def rotor_radius(m: float, DL: float) -> float:
    """Radius of one of the four rotors from gross mass and disk loading.

    Each rotor carries a quarter of the vehicle, so the quad radius is
    1/sqrt(2) of the equivalent two-rotor machine at the same loading.
    """
    if m <= 0 or DL <= 0:
        raise DomainError("mass and disk loading must be positive")
    return math.sqrt(m / (math.pi * DL)) / 2.0


def blade_geometry(R: float, rho_b: float, sigma: float) -> tuple[float, int]:
    """Blade chord and count from radius, blade aspect ratio and solidity.

    The count is rounded to the nearest integer; anything below a two-blade
    rotor is rejected as an infeasible design.
    """
    if R <= 0 or rho_b <= 0 or sigma <= 0:
        raise DomainError("R, rho_b and sigma must be positive")
    b = R / rho_b
    p = round(sigma * math.pi * R / b)
    if p < 2:
        raise DesignError(f"blade count p = {p} < 2; raise solidity or aspect ratio")
    return b, int(p)


def wing_geometry(
    m: float, WL_w: float, WL_ws: float, A_w: float, S_front: float
) -> tuple[float, float, float, float]:
    """Fixed-wing area/span/chord and per-free-wing area from the loadings."""
    if WL_ws > WL_w:
        raise DomainError("WL_ws must not exceed WL_w")
    S_w = m / WL_w
    l_w = math.sqrt(A_w * S_w)
    c_w = math.sqrt(S_w / A_w)
    S_fi = (m / WL_ws - S_w - S_front) / 4.0
    if S_fi < 0:
        raise DesignError(
            f"free-wing area came out negative (S_fi = {S_fi:.4f} m^2); "
            "the all-wings loading is infeasible"
        )
    return S_w, l_w, c_w, S_fi


def rated_thrust(m: float, rho_mT: float) -> float:
    """Per-rotor rated thrust T_e = rho_mT * m * g / 4."""
    if m <= 0 or rho_mT <= 0:
        raise DomainError("mass and rho_mT must be positive")
    return rho_mT * m * GRAVITY / 4.0


def optimum_thrust_coefficient(sigma: float, C_d0: float, kappa: float) -> float:
    """Thrust coefficient minimizing power per unit thrust for rectangular blades."""
    if sigma <= 0 or C_d0 <= 0 or kappa <= 0:
        raise DomainError("sigma, C_d0 and kappa must be positive")
    return (sigma * C_d0 / kappa) ** (2.0 / 3.0)


def disk_loading(C_T: float, rho: float, tip_speed: float) -> float:
    """Disk loading (kg/m^2) sustained at a thrust coefficient and tip speed.

    The aerodynamic loading 0.5 rho (Omega R)^2 C_T comes out in N/m^2 and is
    divided by g to match the mass-based convention of the design tables.
    """
    return 0.5 * rho * tip_speed**2 * C_T / GRAVITY


def size_aircraft(targets: DesignTargets) -> SizingResult:
    """Run the full sizing chain."""
    targets.validate()
    R = rotor_radius(targets.m, targets.DL_QT)
    b, p = blade_geometry(R, targets.rho_b, targets.sigma)
    S_w, l_w, c_w, S_fi = wing_geometry(
        targets.m, targets.WL_w, targets.WL_ws, targets.A_w, targets.S_front
    )
    T_e = rated_thrust(targets.m, targets.rho_mT)
    C_T_opt = optimum_thrust_coefficient(targets.sigma, targets.C_d0, targets.kappa)
    return SizingResult(R=R, b=b, p=p, T_e=T_e, S_w=S_w, l_w=l_w, c_w=c_w,
                        S_fi=S_fi, C_T_opt=C_T_opt)


# ---------------------------------------------------------------------------
# Config loading
# ---------------------------------------------------------------------------

def _load_toml(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
        import tomli as tomllib
    with open(source, "rb") as fh:
        return tomllib.load(fh)


def design_targets_from_config(raw: dict) -> DesignTargets:
    """Build DesignTargets from a ``[design]`` table.

    Areas take precedence over loadings: when ``S_w`` (and ``S_fi``) are
    given, the corresponding loadings are back-solved so the sizing chain
    reproduces the stated areas exactly.
    """
    d = raw.get("design")
    if d is None:
        raise ConfigError("missing key 'design'")

    def need(key):
        if key not in d:
            raise ConfigError(f"missing key {key!r} in [design]")
        return float(d[key])

    m = need("m")
    if "S_w" in d:
        WL_w = m / float(d["S_w"])
    elif "WL_w" in d:
        WL_w = float(d["WL_w"])
    else:
        raise ConfigError("missing key 'S_w' or 'WL_w' in [design]")
    S_front = need("S_front")
    if "S_fi" in d:
        S_total = m / WL_w + S_front + 4.0 * float(d["S_fi"])
        WL_ws = m / S_total
    elif "WL_ws" in d:
        WL_ws = float(d["WL_ws"])
    else:
        raise ConfigError("missing key 'S_fi' or 'WL_ws' in [design]")

    return DesignTargets(
        m=m,
        rho_mT=need("rho_mT"),
        rho_e=need("rho_e"),
        m_e=need("m_e"),
        DL_QT=need("DL_QT"),
        rho_b=need("rho_b"),
        sigma=need("sigma"),
        A_w=need("A_w"),
        WL_w=WL_w,
        WL_ws=WL_ws,
        S_front=S_front,
        kappa=float(d.get("kappa", 1.15)),
        C_d0=float(d.get("C_d0", 0.008)),
    )


def load_params(source) -> AircraftParams:
    """Load and validate a full aircraft description.

    ``source`` is a TOML file path or an equivalent nested dict.  Values
    missing from the ``[rotor]``/``[wing]`` tables are filled from the
    sizing chain; explicit entries win over derived ones.
    """
    raw = _load_toml(source)
    targets = design_targets_from_config(raw)
    sized = size_aircraft(targets)

    ac = raw.get("aircraft", {})
    rt = raw.get("rotor", {})
    wt = raw.get("wing", {})

    def need(table: dict, key: str, where: str) -> float:
        if key not in table:
            raise ConfigError(f"missing key {key!r} in [{where}]")
        return float(table[key])

    R = float(rt.get("R", sized.R))
    b = float(rt.get("b", sized.b))
    p = int(rt.get("p", sized.p))
    if "Omega" in rt and "tip_speed" in rt:
        raise ConfigError("give either 'Omega' or 'tip_speed' in [rotor], not both")
    if "Omega" in rt:
        Omega = float(rt["Omega"])
    else:
        # Rotor speed is not tabulated in the reference set; the default pins
        # the tip speed at 200 m/s.
        Omega = float(rt.get("tip_speed", 200.0)) / R
    rotor = RotorParams(
        R=R,
        p=p,
        b_bar1=b / R,
        a_inf=need(rt, "a_inf", "rotor"),
        C_d0=float(rt.get("C_d0", targets.C_d0)),
        delta_phi_star=angle_from(rt, "delta_phi_star", "rotor", default=0.0),
        Omega=Omega,
        rho=float(rt.get("rho", 1.225)),
        J_r=need(rt, "J_r", "rotor"),
    )

    wing = WingParams(
        S_fi=float(wt.get("S_fi", sized.S_fi)),
        S_ri=float(wt.get("S_ri", sized.S_w / 2.0)),
        C_f=need(wt, "C_f", "wing"),
        C_r=need(wt, "C_r", "wing"),
        C_Df0=need(wt, "C_Df0", "wing"),
        A_f=need(wt, "A_f", "wing"),
        C_w0=need(wt, "C_w0", "wing"),
        C_w_alpha=need(wt, "C_w_alpha", "wing"),
        C_w_delta=need(wt, "C_w_delta", "wing"),
        C_Dw0=need(wt, "C_Dw0", "wing"),
        A_w=float(wt.get("A_w", targets.A_w)),
        alpha_max=angle_from(wt, "alpha_max", "wing"),
        d_f=need(wt, "d_f", "wing"),
        d_r=need(wt, "d_r", "wing"),
        l_1=need(wt, "l_1", "wing"),
        l_2=need(wt, "l_2", "wing"),
        l_3=need(wt, "l_3", "wing"),
        l_4=need(wt, "l_4", "wing"),
        l_5=need(wt, "l_5", "wing"),
    )

    tt = raw.get("tail", {})
    tail = TailParams(
        S_t=float(tt.get("S_t", 0.0)),
        C_Dt=float(tt.get("C_Dt", 0.0)),
        C_Ltb=float(tt.get("C_Ltb", 0.0)),
    )

    lt = raw.get("limits", {})
    thrust_margin = float(lt.get("thrust_margin", 1.2))
    limits = ActuatorLimits(
        thrust_min=float(lt.get("thrust_min", 0.0)),
        thrust_max=sized.T_e * thrust_margin,
        flap_limit=angle_from(lt, "flap_limit", "limits", default=math.radians(30.0)),
        tilt_accel_limit=float(lt.get("tilt_accel_limit", 5.0)),
    )

    params = AircraftParams(
        m=targets.m,
        g=float(ac.get("g", GRAVITY)),
        J_1=need(ac, "J_1", "aircraft"),
        J_2=need(ac, "J_2", "aircraft"),
        J_3=need(ac, "J_3", "aircraft"),
        J_4=need(ac, "J_4", "aircraft"),
        rotor=rotor,
        wing=wing,
        tail=tail,
        limits=limits,
        m_e=targets.m_e,
        rho_e=targets.rho_e,
        rho_mT=targets.rho_mT,
        DL_QT=targets.DL_QT,
        rho_b=targets.rho_b,
        S_w=sized.S_w,
        S_front=targets.S_front,
        l_w=sized.l_w,
        c_w=sized.c_w,
        kappa=targets.kappa,
        C_T_opt=sized.C_T_opt,
        wing_inflow=str(ac.get("wing_inflow", "none")),
    )
    params.validate()
    return params


def dump_params_toml(params: AircraftParams, sized: SizingResult) -> str:
    """Emit a merged parameter file reproducing the sized aircraft."""
    lines = ["[design]"]
    for key, val in (
        ("m", params.m), ("rho_mT", params.rho_mT), ("rho_e", params.rho_e),
        ("m_e", params.m_e), ("DL_QT", params.DL_QT), ("rho_b", params.rho_b),
        ("sigma", params.rotor.solidity), ("A_w", params.wing.A_w),
        ("S_front", params.S_front), ("kappa", params.kappa),
        ("C_d0", params.rotor.C_d0), ("S_w", sized.S_w), ("S_fi", sized.S_fi),
    ):
        lines.append(f"{key} = {val!r}")
    lines += ["", "[aircraft]"]
    for key in ("g", "J_1", "J_2", "J_3", "J_4"):
        lines.append(f"{key} = {getattr(params, key)!r}")
    lines.append(f'wing_inflow = "{params.wing_inflow}"')
    lines += ["", "[rotor]"]
    rt = params.rotor
    for key, val in (
        ("R", rt.R), ("b", rt.b_bar1 * rt.R), ("p", rt.p), ("a_inf", rt.a_inf),
        ("C_d0", rt.C_d0), ("delta_phi_star", rt.delta_phi_star),
        ("Omega", rt.Omega), ("rho", rt.rho), ("J_r", rt.J_r),
    ):
        lines.append(f"{key} = {val!r}")
    lines += ["", "[wing]"]
    for f in (
        "S_fi", "S_ri", "C_f", "C_r", "C_Df0", "A_f", "C_w0", "C_w_alpha",
        "C_w_delta", "C_Dw0", "A_w", "alpha_max", "d_f", "d_r",
        "l_1", "l_2", "l_3", "l_4", "l_5",
    ):
        lines.append(f"{f} = {getattr(params.wing, f)!r}")
    return "\n".join(lines) + "\n"

"""Parameter containers for the aircraft, rotor, wings and actuator limits.

All angles are stored in radians and all quantities in SI units. Config
files may give angles in degrees through keys carrying a ``_deg`` suffix;
the loaders convert on entry.

Disk loading follows the mass-based convention (kg/m^2) used by the
reference design tables, so gravity cancels out of the radius formula.
Gravity itself is fixed at 9.8 m/s^2 to stay consistent with the bundled
parameter set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import ConfigError

GRAVITY = 9.8  # m/s^2, value used throughout the bundled parameter set


@dataclass(frozen=True)
class RotorParams:
    """Geometry and aerodynamic constants of one rotor (all four are identical)."""

    R: float  # rotor radius (m)
    p: int  # blade count
    b_bar1: float  # normalized chord b/R
    a_inf: float  # blade lift-curve slope (1/rad)
    C_d0: float  # constant section profile drag coefficient
    delta_phi_star: float  # linear blade twist (rad)
    Omega: float  # rotor speed (rad/s), held constant in flight
    rho: float  # air density (kg/m^3)
    J_r: float  # rotor spin inertia (kg m^2)

    @property
    def tip_speed(self) -> float:
        return self.Omega * self.R

    @property
    def disk_area(self) -> float:
        return math.pi * self.R**2

    @property
    def solidity(self) -> float:
        return self.p * self.b_bar1 / math.pi

    def validate(self) -> None:
        for name in ("R", "p", "b_bar1", "a_inf", "C_d0", "Omega", "rho", "J_r"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"rotor parameter {name!r} must be positive")


@dataclass(frozen=True)
class WingParams:
    """Free-wing and fixed-wing aerodynamic constants plus moment arms."""

    S_fi: float  # area of one free wing (m^2)
    S_ri: float  # area of one fixed-wing side (m^2)
    C_f: float  # free-wing lift slope vs alpha_f (1/rad)
    C_r: float  # free-wing lift slope vs flap bias (1/rad)
    C_Df0: float  # free-wing zero-incidence drag coefficient
    A_f: float  # free-wing aspect ratio
    C_w0: float  # fixed-wing lift coefficient at alpha = 0
    C_w_alpha: float  # fixed-wing lift slope (1/rad)
    C_w_delta: float  # fixed-wing flap lift slope (1/rad)
    C_Dw0: float  # fixed-wing zero-incidence drag coefficient
    A_w: float  # fixed-wing aspect ratio
    alpha_max: float  # free-wing stall incidence bound (rad)
    d_f: float  # rotor center to free-wing leading edge (m)
    d_r: float  # free-wing chord-wise reference length (m)
    l_1: float  # front rotor lateral arm (m)
    l_2: float  # rear rotor lateral arm (m)
    l_3: float  # rear rotor/wing longitudinal arm (m)
    l_4: float  # front rotor/wing longitudinal arm (m)
    l_5: float  # fixed-wing (aileron) lateral moment arm (m)

    @property
    def tilt_arm(self) -> float:
        """Effective arm of the tilt-induced airflow at the free wing."""
        return self.d_f + 0.25 * self.d_r

    def validate(self) -> None:
        positive = (
            "S_fi", "S_ri", "A_f", "A_w", "d_f", "d_r",
            "l_1", "l_2", "l_3", "l_4", "l_5",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"wing parameter {name!r} must be positive")
        if not 0.0 < self.alpha_max < math.pi / 2:
            raise ConfigError("alpha_max must lie in (0, pi/2)")


@dataclass(frozen=True)
class TailParams:
    """Vertical-tail constitutive constants.

    The reference simulations carry no sideslip, so the defaults switch the
    tail forces off entirely.
    """

    S_t: float = 0.0  # tail area (m^2)
    C_Dt: float = 0.0  # tail drag coefficient
    C_Ltb: float = 0.0  # tail side-force slope vs sideslip (1/rad)


@dataclass(frozen=True)
class ActuatorLimits:
    """Engineering actuator bounds (not part of the reference model)."""

    thrust_min: float = 0.0  # N
    thrust_max: float = math.inf  # N, set from rated thrust by the loader
    flap_limit: float = math.radians(30.0)  # rad
    tilt_accel_limit: float = 5.0  # rad/s^2, bounds |M_beta| / J_4


@dataclass(frozen=True)
class AircraftParams:
    """Complete physical description of the aircraft.

    Groups the rigid-body constants with the rotor, wing and tail models.
    Every row of the reference parameter table maps onto exactly one field
    here or in the gain/scenario containers.
    """

    m: float  # gross mass (kg)
    g: float  # gravity (m/s^2)
    J_1: float  # roll inertia (kg m^2)
    J_2: float  # pitch inertia (kg m^2)
    J_3: float  # yaw inertia (kg m^2)
    J_4: float  # tilt-group inertia (kg m^2)
    rotor: RotorParams
    wing: WingParams
    tail: TailParams = TailParams()
    limits: ActuatorLimits = ActuatorLimits()

    # book-keeping constants from the sizing stage
    m_e: float = 0.0  # engine mass (kg)
    rho_e: float = 0.0  # engine thrust-to-weight ratio
    rho_mT: float = 1.0  # maneuverability thrust ratio
    DL_QT: float = 0.0  # design disk loading (kg/m^2)
    rho_b: float = 0.0  # blade aspect ratio
    S_w: float = 0.0  # fixed-wing area, both sides (m^2)
    S_front: float = 0.0  # front fixed-wing-root area (m^2)
    l_w: float = 0.0  # fixed-wing span (m)
    c_w: float = 0.0  # fixed-wing chord (m)
    kappa: float = 1.15  # induced power factor
    C_T_opt: float = 0.0  # optimum thrust coefficient

    # modeling switch: rotor-wake inflow seen by the free wings.  The
    # nominal plant treats rotor/wing interference as part of the lumped
    # disturbance, which keeps hover an exact thrust = weight equilibrium;
    # "rotor-wake" feeds each rotor's induced velocity into its wing.
    wing_inflow: str = "none"

    @property
    def weight(self) -> float:
        return self.m * self.g

    @property
    def J(self) -> tuple[float, float, float]:
        return (self.J_1, self.J_2, self.J_3)

    @property
    def rated_thrust(self) -> float:
        return self.rho_mT * self.m * self.g / 4.0

    def validate(self) -> None:
        if self.m <= 0 or self.g <= 0:
            raise ConfigError("mass and gravity must be positive")
        for name in ("J_1", "J_2", "J_3", "J_4"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"inertia {name!r} must be positive")
        if self.wing_inflow not in ("none", "rotor-wake"):
            raise ConfigError("wing_inflow must be 'none' or 'rotor-wake'")
        self.rotor.validate()
        self.wing.validate()


def _get(table: dict, key: str, where: str):
    try:
        return table[key]
    except KeyError:
        raise ConfigError(f"missing key {key!r} in [{where}]") from None


def angle_from(table: dict, key: str, where: str, default: float | None = None) -> float:
    """Read an angle, accepting either ``key`` (radians) or ``key_deg``."""
    if key in table and f"{key}_deg" in table:
        raise ConfigError(f"give either {key!r} or '{key}_deg' in [{where}], not both")
    if f"{key}_deg" in table:
        return math.radians(float(table[f"{key}_deg"]))
    if key in table:
        return float(table[key])
    if default is None:
        raise ConfigError(f"missing angle {key!r} (or '{key}_deg') in [{where}]")
    return default


def dataclass_field_names(cls) -> list[str]:
    return [f.name for f in fields(cls)]

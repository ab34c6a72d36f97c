"""Grid-search the transition reference timing with a 3-DOF surrogate.

Point-mass longitudinal model (X, Z, vx, vz) with the same wing forces,
thrust-projection extraction and position-loop gains as the full
simulation, but no attitude/rotor dynamics (three orders of magnitude
faster).  Used offline to pick (ramp_start, ramp_duration, tilt_t0,
speed_target); the winners go into the scenario TOML files and are then
verified with the full 6-DOF run.
"""

import itertools
import math
import sys

M = 3313.0
G = 9.8
MG = M * G
THETA = math.radians(5.0)
TMAX = 4 * 13775.0
K3, K4 = 2.5, 4.5
RHO = 1.225
S_W = 43.75  # both fixed-wing sides
S_F = 4.3795
QW = 0.5 * RHO * S_W
QF = 0.5 * RHO * S_F


def wing_forces(vx, vz):
    """(Fx, Fz) from fixed + free wings at pitch THETA, beta ~ any (free
    wings approximated at their streamlined incidence)."""
    V2 = vx * vx + vz * vz
    V = math.sqrt(V2)
    if V < 0.5:
        return 0.0, 0.0
    alpha = THETA - math.atan2(vz, vx)  # incidence = pitch - flight path
    C_L = 0.32 + 0.5 * alpha
    C_D = 0.008 + C_L**2 / (math.pi * 12 * 0.886)
    L = QW * C_L * V2
    D = QW * C_D * V2
    # free wings: incidence ~ alpha (streamlined with rotor frame at high
    # tilt); lift vertical-ish, drag along -v
    C_Lf = 0.5 * alpha
    C_Df = 0.008 + C_Lf**2 / (math.pi * 4 * 1.114)
    L += 4 * QF * C_Lf * V2
    D += 4 * QF * C_Df * V2
    ca, sa = vx / V, vz / V
    Fx = -L * sa - D * ca
    Fz = L * ca - D * sa
    return Fx, Fz


def beta_d(t, t0, t1):
    tau = t - t0
    Mt = math.pi / (2 * t1 * t1)
    if tau <= 0:
        return 0.0
    if tau <= t1:
        return 0.5 * Mt * tau * tau
    if tau <= 2 * t1:
        d = tau - t1
        return 0.5 * Mt * t1 * t1 + Mt * t1 * d - 0.5 * Mt * d * d
    return math.pi / 2


def ramp(t, v1, ts, T):
    tau = t - ts
    if tau <= 0:
        return 0.0, 0.0, 0.0
    if tau >= T:
        dist = v1 * (tau - T) + v1 * T / 2.0
        return dist, v1, 0.0
    x = tau / T
    if x <= 0.5:
        return v1 * (2 / 3) * tau**3 / (T * T), v1 * 2 * x * x, v1 * 4 * tau / (T * T)
    dist = v1 * (T / 12 + (tau - T / 2) + (2 * T / 3) * ((1 - x) ** 3 - 0.125))
    return dist, v1 * (1 - 2 * (1 - x) ** 2), v1 * 4 * (T - tau) / (T * T)


def simulate(v1, ts, Tv, t0, t1, t_end=30.0, dt=0.01):
    X, Z, vx, vz = 1.0, 102.0, 0.0, 0.0
    max_err = 0.0
    for k in range(int(t_end / dt)):
        t = k * dt
        b = beta_d(t, t0, t1)
        Xd, vd, ad = ramp(t, v1, ts, Tv)
        Fwx, Fwz = wing_forces(vx, vz)
        ux = M * (ad - K3 * (X - Xd) - K4 * (vx - vd)) - Fwx
        uz = M * (-K3 * (Z - 100.0) - K4 * vz) - Fwz + MG
        nx, nz = math.sin(b - THETA), math.cos(b - THETA)
        T = min(max(ux * nx + uz * nz, 0.0), TMAX)
        ax = (T * nx + Fwx) / M
        az = (T * nz + Fwz - MG) / M
        vx += ax * dt
        vz += az * dt
        X += vx * dt
        Z += vz * dt
        if t > 0.5:
            max_err = max(max_err, abs(Z - 100.0))
    return max_err, vx, Z


def main():
    best = []
    for v1 in (56.0, 56.3, 56.6):
        for ts in (0.0, 1.0, 2.0, 3.0, 4.0):
            for Tv in (8.0, 9.0, 10.0, 11.0, 12.0, 13.0):
                for t0 in (0.0, 1.0, 2.0):
                    for t1 in (5.0, 6.0):
                        err, vxf, Zf = simulate(v1, ts, Tv, t0, t1)
                        best.append((err, v1, ts, Tv, t0, t1, vxf, Zf))
    best.sort()
    print("max|Z-100|  v1    ts    Tv    t0   t1   vx_end  Z_end")
    for row in best[:15]:
        print("  ".join(f"{v:7.3f}" if isinstance(v, float) else str(v) for v in row))


if __name__ == "__main__":
    main()

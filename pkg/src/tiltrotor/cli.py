"""Command-line interface: size, trim, run, verify."""

from __future__ import annotations

import argparse
import pathlib
import sys

from .errors import TiltrotorError


def _cmd_size(args) -> int:
    from .sizing import (
        design_targets_from_config,
        dump_params_toml,
        load_params,
        size_aircraft,
        _load_toml,
    )

    raw = _load_toml(args.config)
    targets = design_targets_from_config(raw)
    sized = size_aircraft(targets)
    print(sized.as_text())
    if args.write_params:
        params = load_params(args.config)
        text = dump_params_toml(params, sized)
        pathlib.Path(args.write_params).write_text(text)
        print(f"\nmerged parameter file written to {args.write_params}")
    return 0


def _cmd_trim(args) -> int:
    from .harness import trim_cruise, trim_hover
    from .sizing import load_params

    params = load_params(args.config)
    hover = trim_hover(params)
    print("hover trim:")
    print(f"  thrusts      : {', '.join(f'{T:.2f}' for T in hover.thrusts)} N")
    print(f"  total        : {hover.total_thrust:.2f} N (weight {params.m * params.g:.2f} N)")
    print(f"  residuals    : force {hover.residual_force:.2e} N, "
          f"moment {hover.residual_moment:.2e} N m")
    if args.cruise is not None:
        cruise = trim_cruise(params, args.cruise)
        print(f"cruise trim at {args.cruise:.1f} m/s:")
        print(f"  per-rotor    : {cruise.thrusts[0]:.2f} N")
        print(f"  pitch        : {cruise.pitch:.4f} rad ({cruise.extras['alpha']:.4f} rad incidence)")
        print(f"  flap to trim : {cruise.extras['delta_trim']:.4f} rad")
        print(f"  residual     : {cruise.residual_force:.2e} N")
    return 0


def _cmd_run(args) -> int:
    from .harness import load_scenario, run_scenario

    cfg, params = load_scenario(args.scenario)
    res = run_scenario(
        cfg, params,
        dt=args.dt, t_end=args.t_end,
        disturbance_scale=args.disturbance_scale,
        out=args.out,
    )
    print(f"trajectory written to {res.csv_path}")
    print(f"summary written to {res.csv_path.with_suffix('.summary.txt')}")
    for key, val in res.summary.items():
        print(f"  {key} = {val}")
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_suite

    config_dir = pathlib.Path(args.config_dir)
    results = run_suite(args.suite, config_dir)
    for check in results:
        print(check.row())
    failed = [c for c in results if not c.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    if args.report:
        lines = [
            f"{'PASS' if c.passed else 'FAIL'} | {c.name} | {c.detail}"
            for c in results
        ]
        lines.append(f"summary | {len(results) - len(failed)}/{len(results)} passed")
        pathlib.Path(args.report).write_text("\n".join(lines) + "\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltrotor",
        description="Quad tilt-rotor sizing, trim, transition simulation and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_size = sub.add_parser("size", help="run the sizing chain from a [design] config")
    p_size.add_argument("config", help="aircraft TOML file with a [design] section")
    p_size.add_argument("--write-params", metavar="OUT",
                        help="write the merged parameter file")
    p_size.set_defaults(func=_cmd_size)

    p_trim = sub.add_parser("trim", help="solve hover (and optionally cruise) trim")
    p_trim.add_argument("config", help="aircraft TOML file")
    p_trim.add_argument("--cruise", type=float, metavar="V",
                        help="also trim level flight at V m/s")
    p_trim.set_defaults(func=_cmd_trim)

    p_run = sub.add_parser("run", help="simulate a transition scenario")
    p_run.add_argument("scenario", help="scenario TOML file")
    p_run.add_argument("--dt", type=float, default=None, help="integration step (s)")
    p_run.add_argument("--t-end", type=float, default=None, help="end time (s)")
    p_run.add_argument("--out", default=None, help="CSV output path")
    p_run.add_argument("--disturbance-scale", type=float, default=None,
                       help="scale factor on the bundled disturbance signals")
    p_run.add_argument("--seed", type=int, default=None,
                       help="reserved; the simulation has no stochastic elements")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=["all", "sizing", "rotor", "observer",
                                            "control", "trim", "scenario"])
    p_verify.add_argument("--report", default=None,
                          help="also write a machine-readable report file")
    p_verify.add_argument("--config-dir", default="configs",
                          help="directory holding aircraft.toml and scenario files")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TiltrotorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

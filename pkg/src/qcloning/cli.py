"""Command-line front end: ``point``, ``sweep``, ``verify`` and ``nocorr``.

Exit codes: 0 success, 1 domain or usage error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from dataclasses import asdict, fields
from pathlib import Path
from typing import Any, Sequence

from . import correlations as corr
from . import fidelity as fid
from . import machine as mach
from . import nocorr
from . import oracle
from . import sweep
from .errors import CloningError
from .verify import run_verification

EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2

_ANGLE = re.compile(r"^\s*(?:(?P<num>[0-9.eE+-]+)\s*\*?\s*)?pi(?:\s*/\s*(?P<den>[0-9.eE+-]+))?\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_angle(text: str) -> float:
    """Radians, written as a number or as multiples of pi ("pi/4", "0.5*pi")."""
    m = _ANGLE.match(text)
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def _angle_list(text: str) -> tuple[float, ...]:
    return tuple(parse_angle(t) for t in text.split(",") if t.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, mach.Branch):
        return obj.value
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(doc: dict[str, Any]) -> None:
    print(json.dumps(_jsonable(doc), indent=2, sort_keys=True))


def point_report(b: float, gamma: float, theta: float, branch: str, discord_grid: int = 32) -> dict[str, Any]:
    s = mach.overlap_from_theta(theta)
    rng = mach.feasible_b_range(gamma, s)
    params = mach.solve_machine(b, gamma, s, branch)
    br = mach.as_branch(branch)
    state = mach.apply_machine(params, theta)
    rho = mach.output_density(state)
    opts = corr.DiscordOptions(grid=discord_grid)
    fb = fid.branch_fidelities(b, gamma, s)
    check = oracle.cross_check(params, theta, gamma=gamma)
    doc: dict[str, Any] = {
        "input": {"b": b, "gamma": gamma, "theta": theta, "s": s, "branch": br.value},
        "b_range": {"b_min": rng.b_min, "b_max": rng.b_max, "degenerate": rng.b_max == 0.0},
        "params": asdict(params),
        "success_probability": mach.success_probability(state),
        "fidelity": {
            "general": fid.fidelity_general(params, theta),
            "branches": {k.value: v for k, v in fb.as_dict().items()},
            "partially_optimal": fb.f_p,
            "argmax_branch": fb.argmax_branch.value,
        },
        "correlations": {
            "concurrence": corr.concurrence_closed(rho.abcd),
            "concurrence_eigen": corr.concurrence_eigen(rho),
            "discord": corr.quantum_discord(rho, opts),
            "tangle": corr.tangle_closed(gamma, b, theta, br),
            "tangle_from_state": corr.tangle_from_state(state),
        },
        "cross_check": {
            "passed": check.passed,
            "branch": check.branch.value if check.branch else None,
            "entries": {e.name: {"analytic": e.analytic, "oracle": e.oracle, "difference": e.difference,
                                 "tolerance": e.tolerance, "passed": e.passed} for e in check.entries},
            "notes": list(check.notes),
        },
    }
    if s > 0.0:
        opt = fid.optimal_solution(gamma, s)
        doc["fidelity"]["optimal"] = {"b_opt": opt.b_opt, "f_opt": opt.f_opt, "m": opt.m}
    return doc


def _cmd_point(args: argparse.Namespace) -> int:
    if (args.theta is None) == (args.s is None):
        raise UsageError("give exactly one of --theta or --s")
    theta = args.theta if args.theta is not None else mach.theta_from_overlap(args.s)
    _emit(point_report(args.b, args.gamma, theta, args.branch, args.discord_grid))
    return EXIT_OK


def _load_config(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise UsageError("config file must hold a flat JSON object")
    known = {f.name for f in fields(sweep.SweepSpec)}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key in ("thetas", "gammas"):
        if key in data:
            data[key] = tuple(parse_angle(str(v)) if key == "thetas" else float(v) for v in data[key])
    return data


def build_spec(args: argparse.Namespace) -> sweep.SweepSpec:
    """Flags override the config file, which overrides the figure defaults."""
    config = _load_config(args.config)
    figure = args.figure or config.pop("figure", None)
    config.pop("figure", None)
    flags = {
        "thetas": args.thetas,
        "gammas": args.gammas,
        "b_points": args.b_points,
        "s_points": args.s_points,
        "discord_grid": args.discord_grid,
        "discord_tol": args.discord_tol,
        "mode": args.mode,
        "measure": args.measure,
    }
    merged = {**config, **{k: v for k, v in flags.items() if v is not None}}
    if figure and figure != "custom":
        return sweep.SweepSpec.for_figure(figure, **merged)
    return sweep.SweepSpec(figure="custom", **merged)


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = build_spec(args)
    records = sweep.figure_sweep(spec)
    text = sweep.to_json(records, spec) + "\n" if args.json else sweep.to_csv(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be >= 0")
    report = run_verification(args.seed, args.trials)
    print(report.text())
    return report.exit_status


def _cmd_nocorr(args: argparse.Namespace) -> int:
    branches = (1, 2) if args.branch == "both" else (int(args.branch),)
    doc: dict[str, Any] = {"s": args.s, "f_no": nocorr.nocorr_fidelity(args.s), "branches": {}}
    ok = True
    for b in branches:
        sol = nocorr.nocorr_params(args.s, b)
        rep = nocorr.verify_product_output(args.s, b)
        ok &= rep.passed
        doc["branches"][str(b)] = {
            "params": asdict(sol.params),
            "fidelity_general": fid.fidelity_general(sol.params, mach.theta_from_overlap(args.s)),
            "product_check": {name: asdict(c) for name, c in rep.checks.items()},
            "clone_state": rep.clone_state,
            "relative_sign": rep.relative_sign,
            "passed": rep.passed,
        }
    _emit(doc)
    return EXIT_OK if ok else EXIT_VERIFY


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcloning", description="Unified 1->2 probabilistic / state-dependent cloner laboratory")
    p.add_argument("-v", "--verbose", action="store_true", help="log skipped sweep cells")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pt = sub.add_parser("point", help="full report at one (B, gamma, theta, branch)")
    pt.add_argument("--b", type=float, required=True)
    pt.add_argument("--gamma", type=float, required=True)
    pt.add_argument("--theta", type=parse_angle, help="radians, e.g. 0.3 or pi/8")
    pt.add_argument("--s", type=float, help="overlap instead of theta")
    pt.add_argument("--branch", default="1+", choices=[b.value for b in mach.BRANCHES])
    pt.add_argument("--discord-grid", type=int, default=32)
    pt.set_defaults(func=_cmd_point)

    sw = sub.add_parser("sweep", help="figure dataset as CSV (or JSON)")
    sw.add_argument("--figure", choices=[*sweep.FIGURES, "custom"])
    sw.add_argument("--config", help="flat JSON object with SweepSpec fields")
    sw.add_argument("--out")
    sw.add_argument("--json", action="store_true")
    sw.add_argument("--thetas", type=_angle_list, help="comma separated, e.g. 0,pi/20")
    sw.add_argument("--gammas", type=_float_list)
    sw.add_argument("--b-points", type=int)
    sw.add_argument("--s-points", type=int)
    sw.add_argument("--discord-grid", type=int)
    sw.add_argument("--discord-tol", type=float)
    sw.add_argument("--mode", choices=["partial", "optimal"])
    sw.add_argument("--measure", choices=list(sweep.MEASURES))
    sw.set_defaults(func=_cmd_sweep)

    vf = sub.add_parser("verify", help="seeded invariant suite")
    vf.add_argument("--seed", type=int, default=42)
    vf.add_argument("--trials", type=int, default=200)
    vf.set_defaults(func=_cmd_verify)

    nc = sub.add_parser("nocorr", help="correlation-free cloner at overlap s")
    nc.add_argument("--s", type=float, required=True)
    nc.add_argument("--branch", default="both", choices=["1", "2", "both"])
    nc.set_defaults(func=_cmd_nocorr)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CloningError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

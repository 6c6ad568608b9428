"""Command-line experiment runner.

Exit codes: 0 success, 1 property failure, 2 usage, 3 I/O, 4 degenerate math.
Every data file written with ``--out`` gets a sidecar ``<out>.manifest.json``
recording the command, parameters, seed, version, wall-clock duration and the
SHA-256 of the data bytes.  Data files themselves contain nothing
time-dependent, so identical invocations give byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
import time
from dataclasses import asdict, dataclass
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import avg
from .corrmeasures import concurrence, global_quantum_discord, relative_entropy, sanov_curve
from .errors import QReactError, UsageError
from .infogeom import info_distance
from .measure import DetectorSetting, joint_distribution
from .props import CHECKS, run_check
from .states import parse_state_spec, werner

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_IO, EXIT_DEGENERATE = 0, 1, 2, 3, 4


class IOFailure(QReactError):
    exit_code = EXIT_IO
    code = "io"


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def fmt(x) -> str:
    """Round-trip decimal with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise UsageError(f"non-finite value {x} in output")
    return format(x, ".17g")


def to_json(obj, indent: int = 0, step: int = 2) -> str:
    """JSON writer that formats floats with :func:`fmt`."""
    pad, inner = " " * indent, " " * (indent + step)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ", ".join(to_json(v, indent + step) for v in obj) + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return fmt(obj)


def to_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int | None
    version: str
    duration_s: float
    checksum: str


def emit(text: str, out: str | None, command: str, params: dict, seed, started: float) -> None:
    data = text.encode()
    if out is None:
        sys.stdout.write(text)
        return
    manifest = RunManifest(
        command, params, seed, _version(), time.perf_counter() - started,
        "sha256:" + hashlib.sha256(data).hexdigest(),
    )
    try:
        Path(out).write_bytes(data)
        Path(str(out) + ".manifest.json").write_text(to_json(asdict(manifest)) + "\n")
    except OSError as exc:
        raise IOFailure(f"cannot write {out}: {exc}") from exc


_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Parse ``0.3``, ``pi/8``, ``3pi/8`` or ``-2*pi/3`` (radians)."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise UsageError(f"cannot parse angle {text!r}")
    coef = m.group(1)
    coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
    den = float(m.group(2)) if m.group(2) else 1.0
    return coef * math.pi / den


def _mode_from_args(args, n_parties: int) -> avg.AveragingMode:
    seed = args.seed
    if args.mode == "planar":
        if args.sampler in (None, "grid"):
            return avg.AveragingMode.planar_grid(args.grid_n, seed=seed)
        return avg.AveragingMode("planar", args.sampler, args.samples or 20000, seed)
    if args.sampler is None:
        mode = avg.default_mode(n_parties, seed)
        if args.samples:
            mode = avg.AveragingMode(mode.kind, mode.sampler, args.samples, seed)
        return mode
    default_n = 8192 if args.sampler == "fibonacci" else 20000
    return avg.AveragingMode("sphere", args.sampler, args.samples or default_n, seed)


def _mode_params(mode: avg.AveragingMode) -> dict:
    return {"kind": mode.kind, "sampler": mode.sampler, "n": mode.n, "seed": mode.seed}


# -- commands -----------------------------------------------------------------


def run_trapezoid(args) -> int:
    started = time.perf_counter()
    rho = parse_state_spec(args.state)
    if rho.n_parties != 2:
        raise UsageError("trapezoid needs a two-party state")
    angles = [parse_angle(a) for a in args.angles.split(",")]
    if len(angles) != 4:
        raise UsageError("trapezoid takes four angles: alpha1,beta1,alpha2,beta2")
    a1, b1, a2, b2 = angles

    def dist(a, b):
        return info_distance(joint_distribution(rho, DetectorSetting.planar([a, b])), 0, 1)

    d11, d21, d22, d12 = dist(a1, b1), dist(a2, b1), dist(a2, b2), dist(a1, b2)
    short = d11 + d21 + d22
    verdict = "VIOLATED" if d12 > short else "SATISFIED"
    row = {"alpha1": a1, "beta1": b1, "alpha2": a2, "beta2": b2, "D_A1B1": d11, "D_A2B1": d21,
           "D_A2B2": d22, "D_A1B2": d12, "short_sum": short, "verdict": verdict}
    if args.format == "json":
        text = to_json(row) + "\n"
    else:
        text = to_csv(list(row), [list(row.values())])
    emit(text, args.out, "trapezoid", {"state": args.state, "angles": args.angles}, None, started)
    return EXIT_OK


def run_werner_sweep(args) -> int:
    started = time.perf_counter()
    if args.lambdas:
        grid = [float(x) for x in args.lambdas.split(",")]
    else:
        grid = [float(x) for x in np.round(np.linspace(0.0, 1.0, args.points), 12)]
    if any(not 0 <= x <= 1 for x in grid):
        raise UsageError("lambda grid must lie in [0, 1]")
    mode = _mode_from_args(args, 2)
    rows = []
    for lam in grid:
        rho = werner(lam)
        r = avg.reactivity_bipartite(rho, mode, label=f"werner:{lam}")
        gqd = global_quantum_discord(rho).value
        rows.append([lam, r.volume_mean.mean, r.reactivity, concurrence(rho), gqd,
                     mode.describe(), mode.seed, r.volume_mean.half_width])
    header = ["lambda", "mean_distance", "reactivity", "concurrence", "gqd", "mode", "seed", "half_width"]
    if args.format == "json":
        text = to_json([dict(zip(header, row)) for row in rows]) + "\n"
    else:
        text = to_csv(header, rows)
    emit(text, args.out, "werner-sweep", {"lambdas": grid, **_mode_params(mode)}, mode.seed, started)
    return EXIT_OK


def run_reactivity(args) -> int:
    started = time.perf_counter()
    rho = parse_state_spec(args.state)
    if not 2 <= rho.n_parties <= 6:
        raise UsageError("reactivity needs 2..6 parties")
    mode = _mode_from_args(args, rho.n_parties)
    res = avg.reactivity(rho, mode, label=args.state)
    params = {"state": args.state, **_mode_params(mode)}
    if args.format == "csv":
        header = ["area_mean", "area_half_width", "volume_mean", "volume_half_width",
                  "reactivity", "half_width"]
        text = to_csv(header, [[res.area_mean.mean, res.area_mean.half_width, res.volume_mean.mean,
                                res.volume_mean.half_width, res.reactivity, res.half_width]])
    else:
        body = res.to_dict()
        body["manifest"] = {"command": "reactivity", "params": params, "seed": mode.seed,
                            "version": _version()}
        text = to_json(body) + "\n"
    emit(text, args.out, "reactivity", params, mode.seed, started)
    return EXIT_OK


def run_props(args) -> int:
    started = time.perf_counter()
    report = run_check(args.check, args.trials, args.seed)
    rows = [[t.index, t.seed, "PASS" if t.passed else "FAIL", t.detail.replace(",", ";")]
            for t in report.trials]
    text = to_csv(["trial", "seed", "result", "detail"], rows)
    emit(text, args.out, "props", {"check": args.check, "trials": args.trials}, args.seed, started)
    summary = f"{args.check}: {report.n_passed}/{len(report.trials)} trials passed"
    if report.passed:
        print(summary + " -> PASS", file=sys.stderr)
        return EXIT_OK
    print(summary + " -> FAIL", file=sys.stderr)
    for t in report.failures():
        print(f"  trial {t.index} seed {t.seed}: {t.detail}", file=sys.stderr)
    return EXIT_PROPERTY


def run_sanov(args) -> int:
    started = time.perf_counter()
    rho1 = parse_state_spec(args.state1)
    rho2 = parse_state_spec(args.state2)
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    s = relative_entropy(rho1, rho2)
    ns = np.arange(args.n_max + 1)
    fid = sanov_curve(s, ns)
    text = to_csv(["n", "fidelity"], [[int(n), float(f)] for n, f in zip(ns, fid)])
    emit(text, args.out, "sanov",
         {"state1": args.state1, "state2": args.state2, "n_max": args.n_max}, None, started)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["csv", "json"], default=None)

    averaging = argparse.ArgumentParser(add_help=False)
    averaging.add_argument("--mode", choices=["planar", "sphere"], default="sphere")
    averaging.add_argument("--sampler", choices=["grid", "monte-carlo", "fibonacci"], default=None)
    averaging.add_argument("--grid-n", type=int, default=64, help="planar grid points per party")
    averaging.add_argument("--samples", type=int, default=None, help="settings for sampled modes")

    p = argparse.ArgumentParser(prog="qreact", description="Information-geometric reactivity experiments")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trapezoid", parents=[common], help="four-detector distance inequality")
    t.add_argument("--state", default="singlet")
    t.add_argument("--angles", default="0,pi/8,pi/4,3pi/8", help="alpha1,beta1,alpha2,beta2")
    t.set_defaults(func=run_trapezoid, default_format="csv")

    w = sub.add_parser("werner-sweep", parents=[common, averaging], help="Werner family comparison")
    w.add_argument("--lambdas", help="comma-separated lambda values")
    w.add_argument("--points", type=int, default=11, help="evenly spaced lambdas in [0, 1]")
    w.set_defaults(func=run_werner_sweep, default_format="csv")

    r = sub.add_parser("reactivity", parents=[common, averaging], help="reactivity of one state")
    r.add_argument("--state", required=True)
    r.set_defaults(func=run_reactivity, default_format="json")

    pr = sub.add_parser("props", parents=[common], help="property batteries")
    pr.add_argument("--check", choices=CHECKS, required=True)
    pr.add_argument("--trials", type=int, default=None)
    pr.set_defaults(func=run_props, default_format="csv")

    s = sub.add_parser("sanov", parents=[common], help="fidelity curve 1 - exp(-N S)")
    s.add_argument("--state1", "--state", dest="state1", required=True)
    s.add_argument("--state2", required=True)
    s.add_argument("--n-max", type=int, default=20)
    s.set_defaults(func=run_sanov, default_format="csv")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except QReactError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: ``metricbands analyze | bands | verify | list-builtins``.

Exit codes: 0 success, 1 input error, 2 certification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Optional, Sequence

import numpy as np

from .floquet import band_values_batch
from .graph_model import GraphError, FundamentalGraph, builtin, builtin_names, load_graph
from .report import analyze, format_text, verify
from .spectrum import FLAT_TOL

EXIT_OK, EXIT_INPUT, EXIT_CERT = 0, 1, 2

_ANGLE_RE = re.compile(
    r"^(?P<sign>[+-]?)(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)?\*?(?P<pi>pi)?(?:/(?P<den>\d+(?:\.\d*)?))?$")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_angle(token: str) -> float:
    """Parse ``1.5``, ``pi``, ``-pi/2``, ``2pi/3`` or ``2*pi/3``."""
    m = _ANGLE_RE.match(token.strip())
    if not m or not (m.group("num") or m.group("pi")):
        raise InputError(f"cannot parse angle {token!r}")
    value = float(m.group("num")) if m.group("num") else 1.0
    if m.group("pi"):
        value *= math.pi
    if m.group("den"):
        value /= float(m.group("den"))
    return -value if m.group("sign") == "-" else value


def parse_path(text: str, dim: int) -> np.ndarray:
    """Waypoints separated by ';', components by ','."""
    points = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        comps = [parse_angle(c) for c in chunk.split(",")]
        if len(comps) != dim:
            raise InputError(f"waypoint {chunk.strip()!r} has {len(comps)} components, expected {dim}")
        points.append(comps)
    if not points:
        raise InputError("empty path")
    return np.array(points, dtype=float)


def sweep(g: FundamentalGraph, waypoints: np.ndarray, samples: int) -> tuple[list[str], list[list[float]]]:
    """Sample band functions along a piecewise-linear path.

    Each segment gets ``samples`` points including both ends; shared
    waypoints are not repeated.
    """
    if samples < 2:
        raise InputError("need at least 2 samples per segment")
    if len(waypoints) == 1:
        thetas = waypoints.copy()
    else:
        pieces = []
        for i in range(len(waypoints) - 1):
            s = np.linspace(0.0, 1.0, samples)
            if i > 0:
                s = s[1:]
            pieces.append(waypoints[i] + s[:, None] * (waypoints[i + 1] - waypoints[i]))
        thetas = np.vstack(pieces)
    steps = np.linalg.norm(np.diff(thetas, axis=0), axis=1)
    arclength = np.concatenate([[0.0], np.cumsum(steps)])
    values = band_values_batch(g, thetas)
    header = ["s"] + [f"theta{i + 1}" for i in range(g.dim)] + [f"lambda{n + 1}" for n in range(g.nu)]
    rows = [[float(s)] + list(map(float, th)) + list(map(float, lam))
            for s, th, lam in zip(arclength, thetas, values)]
    return header, rows


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) for x in r])
    return buf.getvalue()


def _load(args) -> FundamentalGraph:
    sources = [s for s in (args.builtin, args.file, args.graph) if s]
    if len(sources) != 1:
        raise InputError("give exactly one of --builtin NAME, --file PATH or a graph path")
    if args.builtin:
        return builtin(args.builtin)
    path = args.file or args.graph
    try:
        return load_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="metricbands",
                     description="Band spectra of periodic equilateral metric graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("graph", nargs="?", help="graph file (same as --file)")
        p.add_argument("--builtin", metavar="NAME")
        p.add_argument("--file", metavar="PATH")
        p.add_argument("--grid", type=_positive(int), help="samples per dimension")
        p.add_argument("--flat-tol", type=_positive(float), default=FLAT_TOL)
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="full spectral report")
    common(p)
    p.add_argument("--zmax", type=_positive(float), default=4 * math.pi)
    p.add_argument("--emax", type=_positive(float))
    p.add_argument("--seed", type=int)
    p.add_argument("--sweep-out", metavar="PATH",
                   help="also write a band sweep from 0 to (pi, ..., pi) as CSV")

    p = sub.add_parser("bands", help="band functions along a path, as CSV")
    common(p)
    p.add_argument("--path", required=True,
                   help="waypoints separated by ';', components by ',' (e.g. '0,0;2pi/3,4pi/3')")
    p.add_argument("--samples", type=_positive(int), default=50, help="points per segment")
    p.add_argument("--sweep-out", metavar="PATH", help="write CSV here instead of stdout")

    p = sub.add_parser("verify", help="oracle comparison and full certification")
    common(p)
    p.add_argument("--oracle-n", type=_positive(int), default=8)
    p.add_argument("--seed", type=int, default=0)

    sub.add_parser("list-builtins", help="names of the builtin graphs")
    return parser


def cmd_analyze(args, out) -> int:
    g = _load(args)
    rep = analyze(g, grid=args.grid, flat_tol=args.flat_tol, z_max=args.zmax,
                  e_max=args.emax, seed=args.seed)
    data = rep.to_dict()
    if args.format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(format_text(data) + "\n")
    if args.sweep_out:
        header, rows = sweep(g, np.array([np.zeros(g.dim), np.full(g.dim, math.pi)]), 101)
        with open(args.sweep_out, "w", encoding="utf-8") as fh:
            fh.write(_csv_text(header, rows))
    return EXIT_OK if rep.ok else EXIT_CERT


def cmd_bands(args, out) -> int:
    g = _load(args)
    header, rows = sweep(g, parse_path(args.path, g.dim), args.samples)
    text = _csv_text(header, rows)
    if args.sweep_out:
        with open(args.sweep_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    g = _load(args)
    rows = verify(g, oracle_n=args.oracle_n, grid=args.grid, seed=args.seed, flat_tol=args.flat_tol)
    if args.format == "json":
        out.write(json.dumps([r.as_dict() for r in rows], indent=2) + "\n")
    else:
        width = max(len(r.name) for r in rows)
        for r in rows:
            out.write(f"{r.status.upper():<8} {r.name:<{width}}  {r.detail}".rstrip() + "\n")
        failed = sum(r.failed for r in rows)
        out.write(f"{len(rows)} checks, {failed} failed, "
                  f"{sum(r.status == 'skipped' for r in rows)} skipped\n")
    return EXIT_CERT if any(r.failed for r in rows) else EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "list-builtins":
        out.write("\n".join(builtin_names()) + "\n")
        return EXIT_OK
    handler = {"analyze": cmd_analyze, "bands": cmd_bands, "verify": cmd_verify}[args.command]
    try:
        return handler(args, out)
    except (InputError, GraphError) as exc:
        print(f"metricbands: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

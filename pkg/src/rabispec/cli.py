"""Command-line front end: ``rabispec {spectrum,gscan,figure,locus,oracle,verify}``.

Exit codes: 0 success, 1 failed verification or a numerical error, 2 bad
usage or parameters. CSV output starts with a ``# schema=1`` line, uses
``\\n`` line endings and writes floats with ``repr`` so reruns are
byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from .errors import ParameterError, RabiError
from .exceptional import PlaneGrid, juddian_locus, nondegenerate_locus
from .figure import MAX_GRID, MAX_LEVEL, build_figure
from .gfunction import G_MIN, g_values
from .model import validate_params
from .oracle import FockTruncation, oracle_spectrum
from .spectrum import compute_spectrum
from .svg import Layer, Panel, render
from .verify import DEFAULT_SEED, SCHEMA, report, run_all


class UsageError(ParameterError):
    """Inconsistent command-line configuration."""


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "" if not math.isfinite(v) else repr(float(v))
    return str(v)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _params(args):
    return validate_params(args.omega, args.g, args.delta)


def _need_format(args, allowed):
    if args.format not in allowed:
        raise UsageError(f"--format {args.format} not available here; choose from {', '.join(allowed)}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args) -> int:
    _need_format(args, ("csv", "json"))
    p = _params(args)
    rows = compute_spectrum(p, args.levels)
    if args.format == "json":
        doc = {"schema": SCHEMA, "omega": p.omega, "g": p.g, "delta": p.delta,
               "levels": [{"index": r.index, "energy": r.energy.value, "parity": r.energy.parity.value,
                           "kind": r.energy.kind.value, "method": r.method, "residual": r.residual}
                          for r in rows]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(_csv(("index", "energy", "parity", "kind", "method", "residual"),
                   ((r.index, r.energy.value, r.energy.parity.value, r.energy.kind.value,
                     r.method, float(r.residual)) for r in rows)), args.out)
    return 0


def gscan_table(p, x_min: float, x_max: float, step: float):
    if x_max < x_min:
        raise UsageError("--x-max must not be below --x-min")
    if not step > 0:
        raise UsageError("--step must be > 0")
    n = int(round((x_max - x_min) / step))
    xs = x_min + step * np.arange(n + 1) if x_max > x_min else np.array([x_min])
    gp, gm = g_values(xs, p)
    return xs, gp, gm


def cmd_gscan(args) -> int:
    _need_format(args, ("csv",))
    p = _params(args)
    xs, gp, gm = gscan_table(p, args.x_min, args.x_max, args.step)
    _emit(_csv(("x", "g_plus", "g_minus"), zip(xs, gp, gm)), args.out)
    return 0


def _levels_arg(args) -> List[int]:
    ns = list(range(4)) if args.n is None else list(args.n)
    if not ns:
        raise UsageError("figure needs at least one level n")
    if any(n < 0 or n > MAX_LEVEL for n in ns):
        raise UsageError(f"levels must lie in 0..{MAX_LEVEL}")
    if not 2 <= args.grid <= MAX_GRID:
        raise UsageError(f"--grid must lie in 2..{MAX_GRID}")
    return ns


def cmd_figure(args) -> int:
    ns = _levels_arg(args)
    p = validate_params(args.omega, 0.0, 0.0)
    if args.quick:
        args.grid = min(args.grid, 200)
    fig = build_figure(ns, args.grid, g_max=args.g_max, omega=p.omega)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    quadrant = args.quadrant
    for lv, panel in zip(fig.levels, fig.panels(full_plane=not quadrant)):
        with open(os.path.join(out, f"panel_n{lv.n}.svg"), "w", encoding="utf-8", newline="") as fh:
            fh.write(render([panel], columns=1))
    with open(os.path.join(out, "figure.svg"), "w", encoding="utf-8", newline="") as fh:
        fh.write(fig.svg(full_plane=not quadrant))
    with open(os.path.join(out, "contours.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(_csv(("n", "layer", "polyline", "closed", "vertex", "delta", "g"), fig.polyline_rows()))
    counts = {str(n): {"closed": c, "open": o} for n, (c, o) in fig.counts().items()}
    sys.stderr.write("juddian components " + json.dumps(counts) + "\n")
    return 0


def cmd_locus(args) -> int:
    _need_format(args, ("csv", "svg"))
    if args.n is None or len(args.n) != 1:
        raise UsageError("locus takes exactly one level: --n N")
    n = args.n[0]
    if n < 0 or n > MAX_LEVEL:
        raise UsageError(f"level must lie in 0..{MAX_LEVEL}")
    if not 2 <= args.grid <= MAX_GRID:
        raise UsageError(f"--grid must lie in 2..{MAX_GRID}")
    p = validate_params(args.omega, 0.0, 0.0)
    d_max = (n + 2.5) if args.delta_max is None else args.delta_max
    grid = PlaneGrid((args.delta_min * p.omega, d_max * p.omega),
                     (args.g_min * p.omega, args.g_max * p.omega), args.grid, args.grid)
    if args.kind == "juddian":
        cs = juddian_locus(n, grid, p.omega)
    else:
        plus, minus = nondegenerate_locus(n, grid, p.omega)
        cs = plus if args.kind == "plus" else minus
    if args.format == "svg":
        panel = Panel(f"n = {n}, {args.kind}", cs.bounds, [Layer(cs, args.kind, "#c0392b")])
        _emit(render([panel], columns=1), args.out)
    else:
        rows = [(n, args.kind, k, int(cs.closed_flags[k]), v, float(d), float(g))
                for k, pl in enumerate(cs.polylines) for v, (d, g) in enumerate(pl)]
        _emit(_csv(("n", "layer", "polyline", "closed", "vertex", "delta", "g"), rows), args.out)
    return 0


def cmd_oracle(args) -> int:
    _need_format(args, ("csv", "json"))
    p = _params(args)
    s = oracle_spectrum(p, FockTruncation(args.m_max), args.levels)
    if args.format == "json":
        doc = {"schema": SCHEMA, "m_max": s.m_max, "convergence_delta": s.convergence_delta,
               "levels": [{"index": i, "energy": float(e), "parity": par.value}
                          for i, (e, par) in enumerate(zip(s.energies, s.parities))]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(_csv(("index", "energy", "parity"),
                   ((i, float(e), par.value) for i, (e, par) in enumerate(zip(s.energies, s.parities)))),
              args.out)
    return 0


def cmd_verify(args) -> int:
    results = run_all(quick=args.quick, seed=args.seed, log=lambda s: print(s, file=sys.stderr))
    _emit(report(results, args.seed, args.quick), args.out)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, default=1.0, help="mode frequency (default 1)")
    common.add_argument("--g", type=float, default=0.5, help="coupling g")
    common.add_argument("--delta", type=float, default=0.5, help="level splitting delta")
    common.add_argument("--levels", type=int, default=8, help="number of levels")
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--out", default=None, help="output file (directory for figure); stdout if omitted")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--quick", action="store_true", help="smaller grids and samples")

    ap = argparse.ArgumentParser(prog="rabispec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="lowest levels with parity and kind")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("gscan", parents=[common], help="G_+ and G_- sampled over x")
    s.add_argument("--x-min", type=float, default=-0.5)
    s.add_argument("--x-max", type=float, default=4.5)
    s.add_argument("--step", type=float, default=0.005)
    s.set_defaults(func=cmd_gscan)

    s = sub.add_parser("figure", parents=[common], help="exceptional loci for several levels as SVG + CSV")
    s.add_argument("--n", type=int, nargs="*", default=None, help="levels (default 0 1 2 3)")
    s.add_argument("--grid", type=int, default=400)
    s.add_argument("--g-max", type=float, default=1.3)
    s.add_argument("--quadrant", action="store_true", help="draw only delta >= 0, g >= 0")
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("locus", parents=[common], help="one exceptional locus as CSV or SVG")
    s.add_argument("--n", type=int, nargs="*", default=None)
    s.add_argument("--kind", choices=("juddian", "plus", "minus"), default="juddian")
    s.add_argument("--grid", type=int, default=400)
    s.add_argument("--delta-min", type=float, default=0.0)
    s.add_argument("--delta-max", type=float, default=None)
    s.add_argument("--g-min", type=float, default=G_MIN)
    s.add_argument("--g-max", type=float, default=1.3)
    s.set_defaults(func=cmd_locus)

    s = sub.add_parser("oracle", parents=[common], help="diagonalization spectrum")
    s.add_argument("--m-max", type=int, default=80)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify", parents=[common], help="run the verification campaign, JSON report")
    s.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        print(f"rabispec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except RabiError as exc:
        print(f"rabispec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

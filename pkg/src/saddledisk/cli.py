"""Command-line front end: ``build``, ``verify``, ``find-t0`` and ``export``.

Exit codes: 0 success, 1 bad config or I/O error, 2 the ribbon definition
fails (the property is named on stderr), 3 checks failed or no witness.
"""

import argparse
import json
from pathlib import Path
import sys

from .export import build_mesh
from .ribbon import RibbonSpec, ValidationFailure, build_ribbon, scale
from .verifier import DEFAULT_CS, find_t0, verify

import numpy as np

COARSE = 50


class _ConfigError(Exception):
    pass


def _load_spec(path):
    if path is None:
        return RibbonSpec()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _ConfigError("config must be a JSON object")
    try:
        return RibbonSpec.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise _ConfigError(f"invalid config: {exc}") from exc


def _grid(text):
    try:
        nu, nv = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like NUxNV, got {text!r}")
    if nu < 2 or nv < 2:
        raise argparse.ArgumentTypeError("grid sizes must be >= 2")
    return nu, nv


def _warn_coarse(grid):
    if min(grid) < COARSE:
        print(
            f"warning: {grid[0]}x{grid[1]} grid is coarse; certification below "
            f"{COARSE}x{COARSE} says little about the continuum",
            file=sys.stderr,
        )


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _ConfigError(f"cannot write {path}: {exc}") from exc


def _c_samples(n):
    return tuple(np.linspace(-1.0, 1.0, n)) if n > 1 else (0.0,)


def cmd_build(args):
    rib = build_ribbon(_load_spec(args.config))
    _write(args.out, json.dumps(rib.summary()) + "\n")
    return 0


def cmd_verify(args):
    if not (0.0 < args.t <= 1.0):
        raise _ConfigError("--t must lie in (0, 1]")
    rib = build_ribbon(_load_spec(args.config))
    _warn_coarse(args.grid)
    rep = verify(rib, args.t, *args.grid, cs=_c_samples(args.c_samples))
    _write(args.out, rep.to_json() + "\n")
    return 0 if rep.passed else 3


def cmd_find_t0(args):
    rib = build_ribbon(_load_spec(args.config))
    _warn_coarse(args.grid)
    try:
        w = find_t0(
            rib, *args.grid, t_lo=args.t_lo, t_hi=args.t_hi, iters=args.iters,
            cs=_c_samples(args.c_samples),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    line = {"t0": w.t0, "saddle_margin": w.saddle_margin, "grid": list(args.grid), "iters": args.iters}
    _write(args.out, json.dumps(line) + "\n")
    return 0


def cmd_export(args):
    if not (0.0 < args.t <= 1.0):
        raise _ConfigError("--t must lie in (0, 1]")
    rib = build_ribbon(_load_spec(args.config))
    mesh = build_mesh(scale(rib, args.t), *args.grid)
    out = Path(args.out)
    if args.format == "obj":
        _write(out, mesh.to_obj())
        _write(out.with_suffix(".csv"), mesh.to_csv())
    else:
        _write(out, mesh.to_csv())
    return 0


def make_parser():
    p = argparse.ArgumentParser(prog="saddledisk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid="200x200"):
        sp.add_argument("--config", help="ribbon config JSON (defaults if omitted)")
        sp.add_argument("--out", help="output path (stdout if omitted)")
        if grid:
            sp.add_argument("--grid", type=_grid, default=_grid(grid), help="NUxNV")

    b = sub.add_parser("build", help="build and validate a ribbon")
    common(b, grid=None)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run the verification suite at one t")
    common(v)
    v.add_argument("--t", type=float, default=1.0)
    v.add_argument("--c-samples", type=int, default=len(DEFAULT_CS))
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("find-t0", help="bisection for a saddle witness t0")
    common(f)
    f.add_argument("--c-samples", type=int, default=len(DEFAULT_CS))
    f.add_argument("--iters", type=int, default=20)
    f.add_argument("--t-lo", type=float, default=0.01)
    f.add_argument("--t-hi", type=float, default=1.0)
    f.set_defaults(func=cmd_find_t0)

    e = sub.add_parser("export", help="write an OBJ mesh and curvature CSV")
    common(e, grid="50x50")
    e.add_argument("--t", type=float, default=1.0)
    e.add_argument("--format", choices=("obj", "csv"), default="obj")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    if getattr(args, "func", None) is cmd_export and args.out is None:
        print("error: export needs --out", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"ribbon invalid: {exc.property}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

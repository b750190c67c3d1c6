"""Command-line interface.

Subcommands cover each pipeline: norm / sweep / front / facets / hbar /
level-set / geodesic / closed-geodesic / infmax / validate.  A JSON
config file (--config) supplies defaults; explicit flags override it.
Exit codes: 0 success, 2 validation failure, 1 any other error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from .config import RunConfig, Rig
from .distances import distance
from .errors import StableFrontError, ValidationError
from .fields import ScalarField2, grid_field, field_from_spec, preset_field
from .fronts import build_front, detect_corners, facet_report, front_to_json_dict
from .geodesics import detect_period, min_closed_geodesic
from .hamiltonian import hbar_dual, hbar_mechanical, infmax_upper, level_set
from .norms import NormTable, direction_sweep, fekete_refine, norm_estimate
from .serialize import write_json, write_text
from .svg import render_front_svg, render_paths_svg
from .validate import run_validate

_PRESET_ORDER = {
    "constant": ("v",),
    "layered": ("A", "B"),
    "channel": ("base", "boost", "width"),
    "bumps": ("base", "amp", "sigma"),
}


def parse_preset(text: str) -> ScalarField2:
    """``name:v1,v2,...`` with positional parameters per preset.

    ``zero`` is shorthand for the zero field (used for potentials).
    """
    if text == "zero":
        return preset_field("constant", v=0.0)
    name, _, rest = text.partition(":")
    if name not in _PRESET_ORDER:
        raise StableFrontError(
            f"unknown preset {name!r}; choose from "
            f"{sorted(_PRESET_ORDER)} or 'zero'")
    order = _PRESET_ORDER[name]
    vals = [v for v in rest.split(",") if v != ""]
    if len(vals) != len(order):
        raise StableFrontError(
            f"preset {name} needs {len(order)} parameters "
            f"({','.join(order)}), got {len(vals)}")
    params = {k: float(v) for k, v in zip(order, vals)}
    return preset_field(name, **params)


def _parse_ivec(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise StableFrontError(f"need two comma-separated values, got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_vec(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise StableFrontError(f"need two comma-separated values, got {text!r}")
    return float(parts[0]), float(parts[1])


def _load_field(args) -> ScalarField2:
    if getattr(args, "grid_file", None):
        import json as _json
        with open(args.grid_file, "r", encoding="utf-8") as fh:
            return field_from_spec(_json.load(fh))
    if getattr(args, "preset", None):
        return parse_preset(args.preset)
    raise StableFrontError("need --preset or --grid-file")


def _load_potential(args) -> ScalarField2:
    if getattr(args, "grid_file_V", None):
        import json as _json
        with open(args.grid_file_V, "r", encoding="utf-8") as fh:
            return field_from_spec(_json.load(fh))
    if getattr(args, "preset_V", None):
        return parse_preset(args.preset_V)
    raise StableFrontError("need --preset-V or --grid-file-V")


def _config(args) -> RunConfig:
    if args.config:
        cfg = RunConfig.from_file(args.config)
    else:
        cfg = RunConfig()
    for key in ("N", "S", "M", "Q", "lam", "kmax", "tol", "threads", "out"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    cfg.__post_init__()   # re-validate after overrides
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):   # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _add_common(sp: argparse.ArgumentParser, field: bool = True,
                potential: bool = False) -> None:
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--N", type=int, help="grid nodes per unit cell")
    sp.add_argument("--S", type=int, help="stencil reach (Chebyshev)")
    sp.add_argument("--M", type=int, help="quadrature points per edge")
    sp.add_argument("--tol", type=float, help="tolerance for root finding")
    sp.add_argument("--threads", type=int,
                    help="worker threads (default: STABLEFRONT_THREADS or 1)")
    sp.add_argument("--out", help="output directory (default: .)")
    if field:
        sp.add_argument("--preset",
                        help="speed field, e.g. constant:2 layered:2,1 "
                             "channel:1,4,0.2 bumps:2,1,0.15")
        sp.add_argument("--grid-file", help="JSON grid field file")
    if potential:
        sp.add_argument("--preset-V",
                        help="potential preset ('zero' for the free case)")
        sp.add_argument("--grid-file-V", help="JSON grid potential file")


def _build_parser() -> _Parser:
    ap = _Parser(prog="stablefront",
                 description="Stable norms, effective fronts, and effective "
                             "Hamiltonians of periodic 2D metrics.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", help="single-direction norm estimate")
    _add_common(sp)
    sp.add_argument("--q", type=_parse_ivec, required=True,
                    help="integer direction, e.g. 1,0")
    sp.add_argument("--lambda", dest="lam", type=int, help="scale multiplier")
    sp.add_argument("--fekete", type=int, dest="kmax", default=None,
                    help="run scale-doubling refinement to 2^kmax")

    sp = sub.add_parser("sweep", help="norm table over primitive directions")
    _add_common(sp)
    sp.add_argument("--Q", type=int, help="direction bound (Chebyshev)")
    sp.add_argument("--lambda", dest="lam", type=int)

    sp = sub.add_parser("front", help="effective front (hull + polar dual)")
    _add_common(sp)
    sp.add_argument("--Q", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--svg", help="also render the front to this SVG path")

    sp = sub.add_parser("facets", help="corner persistence across Q values")
    _add_common(sp)
    sp.add_argument("--Q-list", default="4,8",
                    help="comma-separated increasing Q values (default 4,8)")
    sp.add_argument("--lambda", dest="lam", type=int)

    sp = sub.add_parser("hbar", help="effective Hamiltonian at momentum p")
    _add_common(sp, potential=True)
    sp.add_argument("--method", choices=("dual", "infmax", "mechanical"),
                    default="dual")
    sp.add_argument("--p", type=_parse_vec, required=True)
    sp.add_argument("--Q", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--n-grid", type=int, default=64)
    sp.add_argument("--iters", type=int, default=500)

    sp = sub.add_parser("level-set", help="front of the energy-c metric")
    _add_common(sp, field=False, potential=True)
    sp.add_argument("--c", type=float, required=True, help="energy level")
    sp.add_argument("--Q", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--svg", help="also render the front to this SVG path")

    sp = sub.add_parser("geodesic", help="distance-realizing path")
    _add_common(sp)
    sp.add_argument("--x", type=_parse_vec, required=True, help="start point")
    sp.add_argument("--y", type=_parse_vec, required=True, help="end point")
    sp.add_argument("--svg", help="render the path over the field")

    sp = sub.add_parser("closed-geodesic",
                        help="minimal closed loop in homology class q")
    _add_common(sp)
    sp.add_argument("--q", type=_parse_ivec, required=True)
    sp.add_argument("--stride", type=int, default=4,
                    help="base-point scan stride in grid nodes")

    sp = sub.add_parser("infmax", help="variational upper bound at momentum p")
    _add_common(sp)
    sp.add_argument("--p", type=_parse_vec, required=True)
    sp.add_argument("--n-grid", type=int, default=64)
    sp.add_argument("--iters", type=int, default=500)

    sp = sub.add_parser("validate",
                        help="run the invariant suite on built-in presets")
    _add_common(sp, field=False)
    return ap


def _cmd_norm(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    rig = cfg.rig()
    if args.kmax is not None:
        est = fekete_refine(field, args.q, kmax=args.kmax, rig=rig)
    else:
        est = norm_estimate(field, args.q, lam=cfg.lam, rig=rig)
    table = NormTable([est], Q=max(abs(args.q[0]), abs(args.q[1])),
                      lam=est.lam, field_fp=field.fingerprint,
                      rig_key=rig.key())
    path = write_text(os.path.join(cfg.out, "norm.csv"), table.to_csv())
    print(f"norm({args.q[0]},{args.q[1]}) = {est.best!r}   [{path}]")
    return 0


def _cmd_sweep(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    table = direction_sweep(field, Q=cfg.Q, lam=cfg.lam, rig=cfg.rig(),
                            threads=cfg.effective_threads())
    path = write_text(os.path.join(cfg.out, "sweep.csv"), table.to_csv())
    print(f"swept {len(table.estimates)} directions (Q={cfg.Q}, "
          f"lambda={cfg.lam})   [{path}]")
    return 0


def _cmd_front(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    table = direction_sweep(field, Q=cfg.Q, lam=cfg.lam, rig=cfg.rig(),
                            threads=cfg.effective_threads())
    front = build_front(table)
    path = write_json(os.path.join(cfg.out, "front.json"),
                      front_to_json_dict(front))
    msg = (f"front: {front.d_hull.shape[0]} hull vertices, "
           f"{len(front.corners)} corners   [{path}]")
    if args.svg:
        write_text(args.svg, render_front_svg(front))
        msg += f"   [{args.svg}]"
    print(msg)
    return 0


def _cmd_facets(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    qs = sorted({int(v) for v in args.Q_list.split(",")})
    if len(qs) < 2:
        raise StableFrontError("--Q-list needs at least two values")
    fronts = [build_front(direction_sweep(field, Q=Q, lam=cfg.lam,
                                          rig=cfg.rig(),
                                          threads=cfg.effective_threads()))
              for Q in qs]
    report = facet_report(fronts[-1], fronts)
    path = write_json(os.path.join(cfg.out, "facets.json"), report)
    for d in report["directions"]:
        print(f"q=({d['q'][0]},{d['q'][1]})  {d['classification']:<10} "
              f"angles " + " ".join(f"Q{qq}:{a:.3f}"
                                    for qq, a in d["angles_by_Q"].items()))
    print(f"[{path}]")
    return 0


def _cmd_hbar(args, cfg: RunConfig) -> int:
    p = args.p
    if args.method == "mechanical":
        V = _load_potential(args)
        res = hbar_mechanical(V, p, tol=cfg.tol, rig=cfg.rig(),
                              threads=cfg.effective_threads())
        diag = res.to_json_dict()
        value = res.value
    elif args.method == "infmax":
        field = _load_field(args)
        res = infmax_upper(field, p, n_grid=args.n_grid, iters=args.iters)
        diag = res.to_json_dict()
        diag.pop("trace", None)
        diag["trace_head"] = res.trace[:10]
        value = res.value
    else:
        field = _load_field(args)
        table = direction_sweep(field, Q=cfg.Q, lam=cfg.lam, rig=cfg.rig(),
                                threads=cfg.effective_threads())
        front = build_front(table)
        value = hbar_dual(front, p)
        diag = {"value": value, "p": list(p), "Q": cfg.Q, "lam": cfg.lam,
                "hull_vertices": int(front.d_hull.shape[0])}
    diag["method"] = args.method
    path = write_json(os.path.join(cfg.out, "hbar.json"), diag)
    print(f"hbar[{args.method}]({p[0]},{p[1]}) = {value!r}   [{path}]")
    return 0


def _cmd_level_set(args, cfg: RunConfig) -> int:
    V = _load_potential(args)
    front = level_set(V, args.c, Q=cfg.Q, lam=cfg.lam, rig=cfg.rig(),
                      threads=cfg.effective_threads())
    data = front_to_json_dict(front)
    data["c"] = args.c
    path = write_json(os.path.join(cfg.out, "level_set.json"), data)
    msg = (f"level set c={args.c}: {front.s_polygon.shape[0]} vertices   "
           f"[{path}]")
    if args.svg:
        write_text(args.svg, render_front_svg(front))
        msg += f"   [{args.svg}]"
    print(msg)
    return 0


def _cmd_geodesic(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    value, rec = distance(field, args.x, args.y, rig=cfg.rig(),
                          return_path=True)
    path = write_json(os.path.join(cfg.out, "path.json"), rec.to_json_dict())
    msg = f"d({args.x}, {args.y}) = {value!r}   [{path}]"
    if args.svg:
        write_text(args.svg, render_paths_svg(field, [rec]))
        msg += f"   [{args.svg}]"
    print(msg)
    return 0


def _cmd_closed_geodesic(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    value, base, cycle = min_closed_geodesic(field, args.q, rig=cfg.rig(),
                                             stride=args.stride,
                                             threads=cfg.effective_threads())
    data = cycle.to_json_dict()
    data["base"] = list(base)
    data["value"] = value
    per = detect_period(cycle)
    data["period"] = None if per is None else {
        "q": list(per[0]), "i": per[1], "j": per[2]}
    path = write_json(os.path.join(cfg.out, "closed_geodesic.json"), data)
    print(f"min closed geodesic q=({args.q[0]},{args.q[1]}): {value!r} "
          f"at base {base}   [{path}]")
    return 0


def _cmd_infmax(args, cfg: RunConfig) -> int:
    field = _load_field(args)
    res = infmax_upper(field, args.p, n_grid=args.n_grid, iters=args.iters)
    diag = res.to_json_dict()
    path = write_json(os.path.join(cfg.out, "infmax.json"), diag)
    print(f"infmax({args.p[0]},{args.p[1]}) = {res.value!r} "
          f"(start {res.trace[0]!r})   [{path}]")
    return 0


def _cmd_validate(args, cfg: RunConfig) -> int:
    ok = run_validate(cfg.out, threads=cfg.effective_threads())
    print(f"validate: {'PASS' if ok else 'FAIL'}   "
          f"[{os.path.join(cfg.out, 'validate.json')}]")
    return 0 if ok else 2


_COMMANDS = {
    "norm": _cmd_norm,
    "sweep": _cmd_sweep,
    "front": _cmd_front,
    "facets": _cmd_facets,
    "hbar": _cmd_hbar,
    "level-set": _cmd_level_set,
    "geodesic": _cmd_geodesic,
    "closed-geodesic": _cmd_closed_geodesic,
    "infmax": _cmd_infmax,
    "validate": _cmd_validate,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config(args)
        return _COMMANDS[args.command](args, cfg)
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except StableFrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command())

"""Command-line interface: ingestion, pipeline orchestration, reports.

Reports are rendered with a fixed key order and %.12g floats so identical
inputs and flags produce byte-identical output.  Exit codes: 0 success,
2 unreadable or malformed input, 3 validation failure, 4 a bound check
failed (the failing inequality is printed).
"""

import argparse
import json
import math
import os
import sys

from . import corpus
from .builder import base_sweep_out, build_sweep_out, derive_bisection
from .decompose import C0, eq51_bound, split_surface
from .equilateralize import GeometricSurface, equilateralize, geom_from_json_dict
from .errors import DiastolicError
from .oracle import CHEEGER_CAP, SWEEP_CAP, exact_cheeger, minimal_sweep_max_mass
from .spectral import cheeger_bound, lambda1, li_yau_check
from .surface import UNIT_TRIANGLE_AREA, build_surface

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BOUND = 4


class BoundCheckFailed(Exception):
    """Raised by subcommands when a certified inequality does not hold."""


# -- deterministic rendering ----------------------------------------------


def _render(value, indent):
    pad = "  " * indent
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return "%.12g" % value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if all(isinstance(x, (int, float, str, bool)) or x is None for x in items):
            return "[" + ", ".join(_render(x, 0) for x in items) + "]"
        inner = ",\n".join(pad + "  " + _render(x, indent + 1) for x in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = []
        for k in sorted(value):
            rows.append(pad + "  " + json.dumps(str(k)) + ": " + _render(value[k], indent + 1))
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    raise TypeError("cannot render %r" % type(value))


def render_json(doc):
    """Canonical report text: sorted keys, %.12g floats, 2-space indent."""
    return _render(doc, 0) + "\n"


def render_csv(profile):
    lines = ["step,mass"]
    for i, m in enumerate(profile):
        lines.append("%d,%d" % (i, m))
    return "\n".join(lines) + "\n"


def render_svg(profile):
    """Mass-versus-step polyline, 800x400."""
    width, height, margin = 800, 400, 50
    top = max(profile) if profile and max(profile) > 0 else 1
    steps = len(profile) - 1 if len(profile) > 1 else 1
    pts = []
    for i, m in enumerate(profile):
        x = margin + (width - 2 * margin) * i / steps
        y = height - margin - (height - 2 * margin) * m / top
        pts.append("%.2f,%.2f" % (x, y))
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">\n'
        '<rect width="%d" height="%d" fill="white"/>\n'
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>\n'
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>\n'
        '<polyline points="%s" fill="none" stroke="crimson" stroke-width="1.5"/>\n'
        '<text x="%d" y="%d" font-size="12">maxMass %d</text>\n'
        '<text x="%d" y="%d" font-size="12">steps %d</text>\n'
        "</svg>\n"
    ) % (
        width, height,
        width, height,
        margin, height - margin, width - margin, height - margin,
        margin, margin, margin, height - margin,
        " ".join(pts),
        margin + 4, margin - 8, top,
        width - margin - 90, height - margin + 24, len(profile) - 1,
    )


# -- input ------------------------------------------------------------------


def read_off(text):
    """ASCII OFF: returns (points, triangles); raises ValueError when malformed."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise ValueError("empty OFF file")
    head = rows[0]
    if head.split()[0] != "OFF":
        raise ValueError("missing OFF header")
    rest = head.split()[1:]
    k = 1
    if not rest:
        rest = rows[k].split()
        k += 1
    if len(rest) < 3:
        raise ValueError("OFF header needs vertex, face and edge counts")
    try:
        nv, nf = int(rest[0]), int(rest[1])
    except ValueError:
        raise ValueError("malformed OFF counts %r" % (rest,))
    if len(rows) < k + nv + nf:
        raise ValueError("OFF file truncated")
    points = []
    for i in range(nv):
        parts = rows[k + i].split()
        if len(parts) < 3:
            raise ValueError("vertex line %d too short" % i)
        points.append(tuple(float(x) for x in parts[:3]))
    triangles = []
    for i in range(nf):
        parts = rows[k + nv + i].split()
        if int(parts[0]) != 3:
            raise ValueError("face %d is not a triangle" % i)
        triangles.append(tuple(int(x) for x in parts[1:4]))
    return points, triangles


def load_mesh(path, nonorientable_genus="ceil"):
    """Read a combinatorial surface from an OFF or JSON file."""
    with open(path) as fh:
        text = fh.read()
    if path.lower().endswith(".off"):
        points, tris = read_off(text)
        return build_surface(tris, len(points), nonorientable_genus)
    data = json.loads(text)
    if "triangles" not in data:
        raise ValueError("JSON surface needs a 'triangles' array")
    return build_surface(
        [tuple(t) for t in data["triangles"]],
        data.get("vertices"),
        nonorientable_genus,
    )


def load_geometric(path):
    """Read a GeometricSurface from a dias-geom/1 JSON or a coordinate OFF."""
    with open(path) as fh:
        text = fh.read()
    if path.lower().endswith(".off"):
        points, tris = read_off(text)
        return GeometricSurface.from_vertex_mesh(points, tris)
    return geom_from_json_dict(json.loads(text))


# -- configuration ----------------------------------------------------------


def _env(name, cast, fallback):
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise ValueError("bad %s value %r" % (name, raw))


def resolve_config(args):
    """Flags beat DIAS_* environment variables beat defaults."""
    seed = args.seed if args.seed is not None else _env("DIAS_SEED", int, 42)
    constant = (
        args.cheeger_constant
        if args.cheeger_constant is not None
        else _env("DIAS_CHEEGER_CONSTANT", int, 96)
    )
    if constant not in (32, 96):
        raise ValueError("cheeger constant must be 32 or 96, got %r" % constant)
    tol = args.eig_tol if args.eig_tol is not None else _env("DIAS_EIG_TOL", float, 1e-8)
    mode = args.mode if args.mode is not None else _env("DIAS_MODE", str, "practical")
    if getattr(args, "proof_faithful", False):
        mode = "proof-faithful"
    if mode not in ("practical", "proof-faithful"):
        raise ValueError("mode must be practical or proof-faithful, got %r" % mode)
    return {"seed": seed, "constant": constant, "tol": tol, "mode": mode}


def _emit(args, doc):
    text = render_json(doc)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)


def _surface_summary(surface):
    topo = surface.topology
    return {
        "triangles": len(surface.triangles),
        "vertices": surface.vertex_count,
        "edges": len(surface.edges),
        "eulerCharacteristic": topo.euler_characteristic,
        "orientable": topo.orientable,
        "genus": topo.genus,
        "ring": topo.ring,
        "area": surface.area,
    }


def _bounds(surface):
    g = surface.topology.genus
    factor = math.sqrt(g + 1.0) * math.sqrt(surface.area)
    return 6.0 * C0 * factor, 1.0e8 * factor


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args):
    cfg = resolve_config(args)
    surface = load_mesh(args.path, args.nonorientable_genus)
    b6, bt = _bounds(surface)
    doc = {
        "format": "dias-report/1",
        "command": "analyze",
        "input": os.path.basename(args.path),
        "surface": _surface_summary(surface),
        "cheegerBound": cheeger_bound(surface, cfg["constant"]),
        "cheegerConstant": cfg["constant"],
        "bound6C0": b6,
        "boundTheorem": bt,
    }
    _emit(args, doc)
    return EXIT_OK


def _run_build(surface, args, cfg):
    return build_sweep_out(
        surface,
        mode=cfg["mode"],
        base_threshold=args.base_threshold,
        cheeger_constant=cfg["constant"],
        seed=cfg["seed"],
        eig_tol=cfg["tol"],
        order=args.order,
    )


def cmd_sweep(args):
    cfg = resolve_config(args)
    surface = load_mesh(args.path, args.nonorientable_genus)
    sweep, report = _run_build(surface, args, cfg)
    doc = {
        "format": "dias-report/1",
        "command": "sweep",
        "input": os.path.basename(args.path),
        "surface": _surface_summary(surface),
        "report": report.to_json_dict(),
        "steps": len(sweep.steps),
    }
    _emit(args, doc)
    if args.profile:
        with open(args.profile, "w") as fh:
            fh.write(render_csv(sweep.mass_profile()))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(sweep.mass_profile()))
    if args.emit_sweep:
        with open(args.emit_sweep, "w") as fh:
            fh.write(render_json(sweep.to_json_dict()))
    if not report.bound_6c0_ok:
        raise BoundCheckFailed(
            "maxMass %d > 6*C0*sqrt(g+1)*sqrt(area) = %.12g"
            % (report.max_mass, report.bound_6c0)
        )
    if not report.bound_theorem_ok:
        raise BoundCheckFailed(
            "maxMass %d > 1e8*sqrt(g+1)*sqrt(area) = %.12g"
            % (report.max_mass, report.bound_theorem)
        )
    return EXIT_OK


def cmd_bisect(args):
    cfg = resolve_config(args)
    surface = load_mesh(args.path, args.nonorientable_genus)
    sweep, report = _run_build(surface, args, cfg)
    cycle, bis = derive_bisection(sweep)
    doc = {
        "format": "dias-report/1",
        "command": "bisect",
        "input": os.path.basename(args.path),
        "surface": _surface_summary(surface),
        "sweepMaxMass": report.max_mass,
        "bisection": bis.to_json_dict(),
    }
    _emit(args, doc)
    if args.profile:
        with open(args.profile, "w") as fh:
            fh.write(render_csv(sweep.mass_profile()))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(sweep.mass_profile()))
    if not bis.bound_ok:
        raise BoundCheckFailed(
            "bisection length %d > 6*C0*sqrt(g+1)*sqrt(area) = %.12g"
            % (bis.length, bis.bound_6c0)
        )
    return EXIT_OK


def cmd_equilateralize(args):
    geom = load_geometric(args.path)
    surface, report = equilateralize(geom)
    doc = {
        "format": "dias-report/1",
        "command": "equilateralize",
        "input": os.path.basename(args.path),
        "surface": surface.to_json_dict(),
        "distortion": report.to_json_dict(),
    }
    _emit(args, doc)
    return EXIT_OK


def cmd_oracle(args):
    surface = load_mesh(args.path, args.nonorientable_genus)
    n = len(surface.triangles)
    doc = {
        "format": "dias-report/1",
        "command": "oracle",
        "input": os.path.basename(args.path),
        "triangles": n,
    }
    if args.which in ("cheeger", "both"):
        value, dec = exact_cheeger(surface)
        doc["cheeger"] = {
            "value": value,
            "cutLength": dec.delta.mass,
            "smallSide": min(len(dec.domain1), len(dec.domain2)),
        }
    if args.which in ("sweep", "both"):
        optimum, witness = minimal_sweep_max_mass(surface)
        doc["sweep"] = {
            "optimum": optimum,
            "steps": len(witness.steps),
        }
    _emit(args, doc)
    return EXIT_OK


def _check_one(name, surface, cfg):
    """Invariant battery for one mesh; returns (row dict, hard_ok, bound_ok)."""
    n = len(surface.triangles)
    sweep, report = build_sweep_out(
        surface,
        mode=cfg["mode"],
        cheeger_constant=cfg["constant"],
        seed=cfg["seed"],
        eig_tol=cfg["tol"],
    )
    cycle, bis = derive_bisection(sweep)
    lam, _ = lambda1(surface, tol=cfg["tol"], seed=cfg["seed"])
    product, li_bound, li_ok = li_yau_check(surface, lam)
    dec = split_surface(surface, mode="practical", seed=cfg["seed"], tol=cfg["tol"])
    eq51 = dec.delta.mass <= eq51_bound(surface, dec) + 1e-9

    row = {
        "name": name,
        "triangles": n,
        "maxMass": report.max_mass,
        "bound6C0": report.bound_6c0,
        "bound6C0Pass": bool(report.bound_6c0_ok),
        "boundTheoremPass": bool(report.bound_theorem_ok),
        "bisectionLength": bis.length,
        "bisectionPass": bool(bis.bound_ok),
        "lambda1": lam,
        "liYauProduct": product,
        "liYauBound": li_bound,
        "liYauPass": bool(li_ok),
        "splitLength": dec.delta.mass,
        "splitLengthPass": bool(eq51),
    }
    hard_ok = eq51
    if n <= CHEEGER_CAP:
        h, _ = exact_cheeger(surface)
        hb = cheeger_bound(surface, cfg["constant"])
        row["exactCheeger"] = h
        row["cheegerBound"] = hb
        row["cheegerPass"] = bool(h <= hb)
        hard_ok = hard_ok and h <= hb
    if n <= SWEEP_CAP:
        optimum, _ = minimal_sweep_max_mass(surface)
        greedy = base_sweep_out(surface).max_mass
        lower = row["exactCheeger"] * (surface.area / 2.0 - UNIT_TRIANGLE_AREA)
        ok = greedy >= optimum and optimum >= lower - 1e-9
        row["sweepOptimum"] = optimum
        row["greedyMaxMass"] = greedy
        row["oraclePass"] = bool(ok)
        hard_ok = hard_ok and ok
    bound_ok = report.bound_6c0_ok and report.bound_theorem_ok and bis.bound_ok and li_ok
    return row, hard_ok, bound_ok


def cmd_check(args):
    cfg = resolve_config(args)
    jobs = []
    if args.suite is not None:
        if args.suite == "":
            for name in corpus.names():
                jobs.append((name, corpus.mesh(name)))
        else:
            entries = sorted(os.listdir(args.suite))
            for entry in entries:
                if entry.lower().endswith((".json", ".off")):
                    path = os.path.join(args.suite, entry)
                    jobs.append((os.path.splitext(entry)[0],
                                 load_mesh(path, args.nonorientable_genus)))
            if not jobs:
                raise ValueError("no .json or .off meshes under %s" % args.suite)
    elif args.path:
        jobs.append((os.path.basename(args.path),
                     load_mesh(args.path, args.nonorientable_genus)))
    else:
        raise ValueError("check needs a mesh path or --suite")

    rows = []
    all_hard = True
    all_bound = True
    for name, surface in jobs:
        row, hard_ok, bound_ok = _check_one(name, surface, cfg)
        rows.append(row)
        all_hard = all_hard and hard_ok
        all_bound = all_bound and bound_ok
    doc = {
        "format": "dias-report/1",
        "command": "check",
        "meshes": rows,
        "pass": bool(all_hard and all_bound),
    }
    _emit(args, doc)
    if not all_bound:
        raise BoundCheckFailed("a certified bound failed; see the report")
    if not all_hard:
        raise BoundCheckFailed("an oracle consistency check failed; see the report")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--seed", type=int, default=None,
                        help="spectral solver seed (default 42, env DIAS_SEED)")
    common.add_argument("--eig-tol", type=float, default=None,
                        help="eigensolver residual tolerance (default 1e-8, env DIAS_EIG_TOL)")
    common.add_argument("--cheeger-constant", type=int, choices=(32, 96), default=None,
                        help="constant in the Cheeger upper bound; 32 needs orientable input")
    common.add_argument("--nonorientable-genus", choices=("ceil", "crosscap"),
                        default="ceil",
                        help="genus convention for nonorientable surfaces")

    build_flags = argparse.ArgumentParser(add_help=False)
    build_flags.add_argument("--mode", choices=("practical", "proof-faithful"), default=None)
    build_flags.add_argument("--proof-faithful", action="store_true",
                             help="shorthand for --mode proof-faithful")
    build_flags.add_argument("--base-threshold", type=int, default=32,
                             help="practical-mode direct-sweep size cutoff")
    build_flags.add_argument("--order", default="greedy", choices=("greedy", "given"),
                             help="base-case triangle order")
    build_flags.add_argument("--profile", help="write the mass profile CSV here")
    build_flags.add_argument("--svg", help="write a mass-vs-step SVG plot here")

    parser = argparse.ArgumentParser(
        prog="dias",
        description="certificate-checked sweep-outs of triangulated closed surfaces",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="topology, area and bound summary")
    p.add_argument("path")
    p.set_defaults(fn=cmd_analyze, mode=None)

    p = sub.add_parser("sweep", parents=[common, build_flags],
                       help="build a verified sweep-out and check the bound")
    p.add_argument("path")
    p.add_argument("--emit-sweep", help="write the full sweep-out JSON here")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("bisect", parents=[common, build_flags],
                       help="equal-area bisection from a sweep-out")
    p.add_argument("path")
    p.set_defaults(fn=cmd_bisect)

    p = sub.add_parser("equilateralize", parents=[common],
                       help="uniformize, repair and equilateralize a geometric mesh")
    p.add_argument("path")
    p.set_defaults(fn=cmd_equilateralize, mode=None)

    p = sub.add_parser("oracle", parents=[common],
                       help="exact Cheeger constant and minimal sweep mass (small N)")
    p.add_argument("path")
    p.add_argument("--which", choices=("cheeger", "sweep", "both"), default="both")
    p.set_defaults(fn=cmd_oracle, mode=None)

    p = sub.add_parser("check", parents=[common, build_flags],
                       help="run the invariant suite over meshes")
    p.add_argument("path", nargs="?", default=None)
    p.add_argument("--suite", nargs="?", const="", default=None,
                   help="check a mesh directory, or the bundled corpus when bare")
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BoundCheckFailed as exc:
        sys.stderr.write("bound check failed: %s\n" % exc)
        return EXIT_BOUND
    except DiastolicError as exc:
        sys.stderr.write("invalid input: %s\n" % exc)
        return EXIT_INVALID
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write("cannot read input: %s\n" % exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

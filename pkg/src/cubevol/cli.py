"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Malformed user input; reported with exit status 2."""


def _emit(obj: dict, out: str | None = None) -> None:
    text = json.dumps({"schema_version": SCHEMA_VERSION, **obj}, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- constants -----------------------------------------------------------------


def constants_table() -> list[tuple[str, float, str]]:
    from .hypgeom import V3_TETRA

    return [
        ("v3_tetra", V3_TETRA, "regular ideal tetrahedron, 3 * Lobachevsky(pi/3)"),
        ("v3_cube", 5 * V3_TETRA, "regular ideal 3-cube, five regular ideal tetrahedra"),
        ("v3_cube/v3_tetra", 5 * V3_TETRA / V3_TETRA, "ratio"),
        ("v2_tetra", math.pi, "ideal triangle"),
        ("v2_cube", 2 * math.pi, "ideal quadrilateral"),
    ]


def cmd_constants(args) -> int:
    for name, value, ref in constants_table():
        print(f"{name:<18} {value:.12f}  {ref}")
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .verify import run_all

    checks = run_all(cubes=args.cubes)
    failed = [c for c in checks if not c.passed]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}: {c.value} (expected {c.expected}; {c.certifies})")
    if args.json:
        _emit({"command": "verify", "passed": not failed,
               "checks": [c.to_json() for c in checks]}, args.json)
    return EXIT_FAIL if failed else EXIT_OK


# -- min-fill ------------------------------------------------------------------


def cmd_min_fill(args) -> int:
    from .l1fill import cube_filling_problem, min_l1_fill

    problem = cube_filling_problem(args.dim, with_center=args.with_center)
    sol = min_l1_fill(problem)
    ok = sol.verify()
    _emit({
        "command": "min-fill",
        "dim": args.dim,
        "with_center": args.with_center,
        "generators": len(problem.generators),
        "feasible": sol.feasible,
        "objective": str(sol.objective),
        "certificate_verified": ok,
        "certificate": {repr(f.vertices): str(y) for f, y in sol.certificate.items()} if args.certificate else None,
    })
    return EXIT_OK if ok else EXIT_FAIL


# -- volume --------------------------------------------------------------------


def load_cubes(path: str) -> list[tuple[str, object, float | None]]:
    """Cubes from a JSON file: ``{"cubes": [{"label", "vertices", "truncation"?}]}``.

    A bare cube object or a list of them is accepted too.  Vertices are
    ``{"coords": [x0, ..., xn], "ideal": bool}`` with the time-like
    coordinate first.
    """
    from .hypgeom import HPoint, StraightCube

    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if isinstance(data, dict) and "cubes" in data:
        data = data["cubes"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise InputError("expected a cube object or a list of cubes")
    out = []
    for k, item in enumerate(data):
        label = str(item.get("label", f"cube{k}")) if isinstance(item, dict) else f"cube{k}"
        try:
            pts = [HPoint.from_json(v) for v in item["vertices"]]
            cube = StraightCube.from_points(pts)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cube {label!r}: {exc}") from exc
        trunc = item.get("truncation")
        out.append((label, cube, None if trunc is None else float(trunc)))
    return out


def cmd_volume(args) -> int:
    from .hypgeom import signed_volume, truncate_ideal_cube

    rows = []
    for label, cube, trunc in load_cubes(args.cube):
        if cube.is_ideal:
            if trunc is None:
                raise InputError(f"cube {label!r} has ideal vertices; give a 'truncation' length")
            if not all(cube.ideal_mask):
                raise InputError(f"cube {label!r} mixes ideal and finite vertices")
            cube = truncate_ideal_cube(cube.vertices, trunc)
        if cube.dim != cube.ambient_dim:
            raise InputError(f"cube {label!r} has dimension {cube.dim} in H^{cube.ambient_dim}")
        r = signed_volume(cube, order=args.order, depth=args.depth)
        rows.append((label, r.value, r.error_estimate))
    print("label,value,error_estimate")
    for label, value, err in rows:
        print(f"{label},{value!r},{err!r}")
    return EXIT_OK


# -- coxeter -------------------------------------------------------------------


def cmd_coxeter(args) -> int:
    from .hypgeom import V3_TETRA, coxeter_check

    r = coxeter_check()
    ok = r.max_deviation <= 1e-9 and abs(r.total - 5 * V3_TETRA) <= 5e-9
    _emit({"command": "coxeter", "passed": ok, **r.to_json()})
    return EXIT_OK if ok else EXIT_FAIL


# -- smear ---------------------------------------------------------------------


def run_smear(genus: int, mesh: float, truncation: float, samples: int, seed: int) -> dict:
    from .smear import ModelQuadrilateral, build_net, build_surface, estimate_smearing, upper_bound_from_smearing

    s = build_surface(genus)
    net = build_net(s, mesh, seed=seed)
    q = ModelQuadrilateral(truncation)
    e = estimate_smearing(s, net, q, samples, seed)
    return {
        "command": "smear",
        "config": {"genus": genus, "mesh": mesh, "truncation": truncation, "samples": samples, "seed": seed},
        "surface": {"genus": genus, "area": s.area, "relator_residual": s.relator_residual()},
        "net": net.to_json(),
        "model": q.to_json(),
        "estimate": e.to_json(),
        "upper_bound": upper_bound_from_smearing(e, q),
    }


def cmd_smear(args) -> int:
    if args.genus < 2:
        raise InputError("genus must be at least 2")
    if args.mesh <= 0 or args.truncation <= 0:
        raise InputError("mesh and truncation must be positive")
    if args.samples < 10_000:
        raise InputError("need at least 10000 samples")
    report = run_smear(args.genus, args.mesh, args.truncation, args.samples, args.seed)
    _emit(report, args.out)
    est = report["estimate"]
    print(f"l1_estimate={est['l1_estimate']:.6f} boundary_residual={est['boundary_residual']:.6f} "
          f"implied_bound={est['implied_bound']:.6f} upper_bound={report['upper_bound']:.6f}",
          file=sys.stderr)
    return EXIT_OK


# -- combine -------------------------------------------------------------------


@dataclass(frozen=True)
class PieceSpec:
    label: str
    kind: str
    volume: float | None = None


@dataclass
class CombineReport:
    sv: float
    qsv: float
    per_piece: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sv": self.sv, "qsv": self.qsv,
                "per_piece": [{"label": lab, "sv": v} for lab, v in self.per_piece]}


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def parse_pieces(text: str) -> list[PieceSpec]:
    """Parse a pieces file, reporting the line of the first offending entry."""
    dec = json.JSONDecoder()
    pos = len(text) - len(text.lstrip())
    if pos == len(text) or text[pos] != "[":
        raise InputError(f"line {_line_of(text, pos)}: expected a JSON list of pieces")
    pos += 1
    items = []
    while True:
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text):
            raise InputError(f"line {_line_of(text, pos)}: unterminated list")
        if text[pos] == "]":
            break
        try:
            obj, end = dec.raw_decode(text, pos)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {_line_of(text, pos)}: malformed piece ({exc.msg} at line {exc.lineno})") from exc
        items.append((obj, _line_of(text, pos)))
        pos = end
    if text[pos + 1:].strip():
        raise InputError(f"line {_line_of(text, pos + 1)}: trailing data after the list")
    pieces = []
    for obj, line in items:
        if not isinstance(obj, dict):
            raise InputError(f"line {line}: a piece must be an object")
        kind = obj.get("kind")
        label = str(obj.get("label", f"piece{len(pieces)}"))
        if kind not in ("hyperbolic", "seifert"):
            raise InputError(f"line {line}: piece {label!r} has unknown kind {kind!r}")
        vol = obj.get("volume")
        if kind == "hyperbolic":
            if vol is None:
                raise InputError(f"line {line}: hyperbolic piece {label!r} needs a volume")
            if isinstance(vol, bool) or not isinstance(vol, (int, float)) or not math.isfinite(vol):
                raise InputError(f"line {line}: piece {label!r} has a non-numeric volume")
            if vol <= 0:
                raise InputError(f"line {line}: piece {label!r} has non-positive volume {vol}")
        pieces.append(PieceSpec(label, kind, None if vol is None else float(vol)))
    return pieces


def combine(pieces: list[PieceSpec]) -> CombineReport:
    """Hyperbolic pieces contribute volume / v3_tetra; Seifert fibred pieces contribute 0."""
    from .hypgeom import V3_TETRA

    per = [(p.label, p.volume / V3_TETRA if p.kind == "hyperbolic" else 0.0) for p in pieces]
    sv = math.fsum(v for _, v in per)
    return CombineReport(sv, sv / 5, per)


def cmd_combine(args) -> int:
    try:
        text = Path(args.pieces).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.pieces}: {exc}") from exc
    report = combine(parse_pieces(text))
    _emit({"command": "combine", **report.to_json()})
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubevol", description="Cubical chain maps, fillings and hyperbolic volume tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("constants", help="print the volume constants").set_defaults(func=cmd_constants)

    v = sub.add_parser("verify", help="run the self-check battery")
    v.add_argument("--json", metavar="OUT", help="write a JSON report")
    v.add_argument("--cubes", type=int, default=200, help="random cubes per chain-map check")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("min-fill", help="certified minimal l1 filling of a cube boundary")
    m.add_argument("--dim", type=int, choices=(2, 3), required=True)
    m.add_argument("--with-center", action="store_true", help="allow the cube centre as a vertex")
    m.add_argument("--certificate", action="store_true", help="include the dual certificate")
    m.set_defaults(func=cmd_min_fill)

    vol = sub.add_parser("volume", help="signed volumes of straight cubes as CSV")
    vol.add_argument("--cube", required=True, help="JSON cube file")
    vol.add_argument("--order", type=int, default=8)
    vol.add_argument("--depth", type=int, default=3)
    vol.set_defaults(func=cmd_volume)

    sub.add_parser("coxeter", help="five-tetrahedron split of the regular ideal cube").set_defaults(func=cmd_coxeter)

    s = sub.add_parser("smear", help="Monte-Carlo smearing on a closed surface")
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--mesh", type=float, default=2.0)
    s.add_argument("--truncation", type=float, default=6.0)
    s.add_argument("--samples", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="report file (default: stdout)")
    s.set_defaults(func=cmd_smear)

    c = sub.add_parser("combine", help="sv and qsv from geometric pieces")
    c.add_argument("--pieces", required=True, help="JSON list of pieces")
    c.set_defaults(func=cmd_combine)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"cubevol: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

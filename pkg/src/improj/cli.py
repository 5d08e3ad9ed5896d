"""Command-line front end: ``improj <command> ...`` with JSON on stdout.

Exit codes: 0 success, 1 failed self-test, 2 precondition violation,
64 usage error, 65 parse error, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import ImprojError, ParseError, PreconditionError
from .polycore import MultiPoly, format_rational, parse_poly, parse_rational

SCHEMA = "improj/1"
EXIT_OK, EXIT_FAILED, EXIT_PRECONDITION, EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(payload: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n")


def parse_point(text: str, n: Optional[int] = None) -> tuple:
    """Comma-separated exact rationals; decimals are rejected."""
    pt = tuple(parse_rational(t.strip()) for t in text.split(","))
    if n is not None and len(pt) != n:
        raise PreconditionError(f"point has {len(pt)} coordinates, expected {n}")
    return pt


def _poly(args) -> MultiPoly:
    if args.polynomial is None:
        raise UsageError("a polynomial argument is required")
    return parse_poly(args.polynomial, args.nvars)


def _y_poly(text: str) -> MultiPoly:
    return parse_poly(text.replace("y1", "z1").replace("y2", "z2"), 2)


def _report_dir(args) -> Optional[Path]:
    if not getattr(args, "report", None):
        return None
    d = Path(args.report)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_json(path: Path, payload) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=str)
    return str(path)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> dict:
    p = _poly(args)
    if p.nvars == 2:
        from .classify import conic_class, root_arrangement
        from .polycore import initial_binary_form

        arr = root_arrangement(initial_binary_form(p))
        return {"class": conic_class(p), "arrangement": arr.to_json(), "exact": True}
    from .classify import is_hyperbolic_initial

    return {"hyperbolicity": is_hyperbolic_initial(p).to_json(), "exact": True}


def cmd_normalize(args) -> dict:
    p = _poly(args)
    if p.nvars == 2:
        from .normalize import normalize_conic

        nf = normalize_conic(p)
        return {"normal_form": nf.to_json(), "exact": nf.exact}
    from .normalize import normalize_quadric_nd

    return {"normal_form": normalize_quadric_nd(p).to_json(), "exact": True}


def cmd_region(args) -> dict:
    from .regions import Delegated, full_plane_odd_degree_check, region_for_conic, region_for_quadric

    p = _poly(args)
    if p.nvars == 2 and p.degree() == 2:
        R = region_for_conic(p)
        out = {"region": R.to_json(), "exact": True, "delegated": isinstance(R, Delegated)}
        if isinstance(R, Delegated):
            out["full_plane"] = _sample_complement(p, args)
        return out
    if p.degree() == 2:
        return {"region": region_for_quadric(p).to_json(), "exact": True, "delegated": False}
    verdict, reason = full_plane_odd_degree_check(p)
    return {"region": {"kind": verdict.value, "reason": reason}, "exact": True, "delegated": False}


def _sample_complement(p: MultiPoly, args) -> dict:
    # whether I(p) is the whole plane is open for this class; report sampled evidence only
    import random

    from .acceptance import random_rational_point
    from .oracle import ConicOracle

    oracle = ConicOracle(p, method=args.method)
    rng = random.Random(args.seed)
    n = args.samples or 400
    grid = [(Fraction(a, 4), Fraction(b, 4)) for a in range(-8, 9) for b in range(-8, 9)]
    for y in grid + [random_rational_point(rng) for _ in range(n)]:
        if not oracle.member(y):
            return {"status": "no", "witness": [format_rational(v) for v in y], "exact": True}
    return {"status": "undecided; sampling found no complement point", "samples": len(grid) + n, "exact": False}


def cmd_member(args) -> dict:
    p = _poly(args)
    if not args.point:
        raise UsageError("--point is required")
    y = parse_point(args.point, p.nvars)
    if p.nvars == 2 and p.degree() == 2:
        from .oracle import ConicOracle

        oracle = ConicOracle(p, method=args.method)
        tr = oracle.explain(y)
        out = {"verdict": tr.verdict, "branch": tr.branch, "exact": True, "advisory": False}
        if args.explain:
            out["trace"] = tr.to_json()
        return out
    if p.degree() != 2:
        raise PreconditionError("membership is decided for conics (exact) and quadrics (numeric) only")
    from .oracle import member_quadric_numeric

    v = member_quadric_numeric(p, y, seed=args.seed)
    out = {"verdict": v.found, "branch": "numeric", "exact": False, "advisory": True,
           "residual": v.residual, "starts_tried": v.starts_tried}
    if args.explain and v.x is not None:
        out["trace"] = {"x": list(v.x)}
    return out


def _window(args, default):
    from .raster import parse_window

    return parse_window(args.window) if args.window else default


def _resolution(args, default):
    from .raster import parse_resolution

    return parse_resolution(args.resolution) if args.resolution else default


def cmd_boundary(args) -> dict:
    from .regions import boundary_candidates_2c2

    p = _poly(args)
    t0 = time.perf_counter()
    bc = boundary_candidates_2c2(p)
    elapsed = time.perf_counter() - t0
    out = {"candidates": bc.to_json(), "octic": bc.octic.to_text(["y1", "y2"]), "exact": True}
    if args.timing:
        out["timing_s"] = elapsed
    d = _report_dir(args)
    if d is not None or args.emit_svg or args.emit_pgm:
        from .raster import RasterSpec, boundary_pixels, check_against_candidates, rasterize, write_pgm, write_svg

        spec = RasterSpec(_window(args, (-2, 2, -2, 2)), _resolution(args, (200, 200)), "exact", "oracle")
        bm = rasterize(p, spec)
        cov = check_against_candidates(boundary_pixels(bm), bc, spec, args.tol)
        out["coverage"] = cov.to_json()
        if args.emit_pgm:
            write_pgm(bm, args.emit_pgm)
        if args.emit_svg:
            write_svg(bm, args.emit_svg, bc.polys())
        if d is not None:
            from .plotting import plot_bitmap

            plot_bitmap(bm, d / "boundary.png", bc.polys(), p.to_text(),
                        ["octic"] + [f"candidate {j}" for j in range(1, len(bc.polys()))])
            out["report"] = {"figure": str(d / "boundary.png"), "json": str(d / "boundary.json")}
            _write_json(d / "boundary.json", out)
    return out


def cmd_certify(args) -> dict:
    from .certify import certificates_for_conic, verify_certificate, verify_partition

    p = _poly(args)
    certs = certificates_for_conic(p)
    rows = []
    for k, c in enumerate(certs):
        row = c.to_json()
        if args.samples:
            row["verification"] = verify_certificate(c, p, samples=args.samples, seed=args.seed + k).to_json()
        rows.append(row)
    out = {"certificates": rows, "count": len(rows), "exact": True}
    if args.samples and certs:
        out["partition"] = verify_partition(certs, p, samples=args.samples, seed=args.seed)
    return out


def cmd_rigid(args) -> dict:
    from .certify import rigid_convexity_line_test

    h = _y_poly(args.polynomial) if args.polynomial else None
    if h is None:
        raise UsageError("a polynomial in y1, y2 is required")
    if not args.point:
        raise UsageError("--point (an interior point) is required")
    y = parse_point(args.point, 2)
    directions = None
    if args.direction:
        directions = [parse_point(args.direction, 2)]
    rep = rigid_convexity_line_test(h, y, lines=args.samples or 100, seed=args.seed, directions=directions)
    out = {"line_test": rep.to_json(), "exact": True}
    d = _report_dir(args)
    if d is not None:
        from .plotting import plot_line_counts

        plot_line_counts(rep.counts, rep.degree, d / "line_counts.png", "line test")
        out["report"] = {"figure": str(d / "line_counts.png"), "json": str(d / "rigid.json")}
        _write_json(d / "rigid.json", out)
    return out


def cmd_construct(args) -> dict:
    from .construct import build_k_components

    if args.k is None:
        raise UsageError("--k is required")
    res = _resolution(args, (800, 800))
    if res[0] != res[1]:
        raise PreconditionError("construct uses square resolutions")
    rec = build_k_components(args.k, resolution=res[0])
    out = {"recipe": rec.to_json(), "polynomial": rec.polynomial.to_text(), "exact": True}
    d = _report_dir(args)
    if d is not None or args.emit_svg or args.emit_pgm:
        from .raster import RasterSpec, connected_components, rasterize, write_pgm, write_svg

        spec = RasterSpec(_window(args, rec.window), res, "exact", "factors")
        bm = rasterize(rec.factors, spec)
        if args.emit_pgm:
            write_pgm(bm, args.emit_pgm)
        if args.emit_svg:
            write_svg(bm, args.emit_svg)
        if d is not None:
            from .plotting import plot_components

            plot_components(bm, connected_components(bm, measure_convexity=False), d / "components.png",
                            f"k = {args.k}")
            out["report"] = {"figure": str(d / "components.png"), "json": str(d / "construct.json")}
            _write_json(d / "construct.json", out)
    return out


def cmd_raster(args) -> dict:
    from .raster import RasterSpec, connected_components, rasterize, write_pgm, write_svg

    if args.factors:
        obj = [parse_poly(t.strip(), 2) for t in args.factors.split(";") if t.strip()]
        source = "factors"
    else:
        obj = _poly(args)
        source = args.source
    spec = RasterSpec(_window(args, (-2, 2, -2, 2)), _resolution(args, (200, 200)), args.mode, source)
    bm = rasterize(obj, spec)
    comps = connected_components(bm)
    out = {"bitmap": bm.to_json(), "components": comps.to_json(), "exact": args.mode == "exact",
           "advisory": bm.advisory}
    if args.emit_pgm:
        write_pgm(bm, args.emit_pgm)
    if args.emit_svg:
        write_svg(bm, args.emit_svg)
    d = _report_dir(args)
    if d is not None:
        from .plotting import plot_bitmap, plot_components

        title = args.factors or obj.to_text()
        plot_bitmap(bm, d / "raster.png", title=title)
        plot_components(bm, comps, d / "components.png")
        out["report"] = {"figures": [str(d / "raster.png"), str(d / "components.png")], "json": str(d / "raster.json")}
        _write_json(d / "raster.json", out)
    return out


def cmd_selftest(args) -> dict:
    from .acceptance import run_acceptance

    which = [int(t) for t in args.only.split(",")] if args.only else None
    results = run_acceptance(which, seed=args.seed, out_dir=args.report,
                             echo=lambda line: print(line, file=sys.stderr, flush=True))
    out = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "summary": r.summary}
                        for r in results],
           "passed": sum(r.passed for r in results), "total": len(results), "exact": True}
    if args.timing:
        out["timing_s"] = {r.number: round(r.seconds, 3) for r in results}
    out["_exit"] = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return out


COMMANDS = {
    "classify": cmd_classify,
    "normalize": cmd_normalize,
    "region": cmd_region,
    "member": cmd_member,
    "boundary": cmd_boundary,
    "certify": cmd_certify,
    "rigid": cmd_rigid,
    "construct": cmd_construct,
    "raster": cmd_raster,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="improj", description="Imaginary projections of complex polynomials.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("polynomial", nargs="?", help="polynomial text, e.g. 'z1^2 + i*z2^2 + z2'")
    ap.add_argument("--nvars", type=int, default=2)
    ap.add_argument("--point", help="exact rational point, e.g. 1/3,0")
    ap.add_argument("--direction", help="line direction for rigid, e.g. 0,1")
    ap.add_argument("--window", help="x_lo,x_hi,y_lo,y_hi")
    ap.add_argument("--resolution", help="NxM")
    ap.add_argument("--mode", choices=("exact", "float"), default="exact")
    ap.add_argument("--source", choices=("auto", "oracle", "region"), default="auto")
    ap.add_argument("--method", choices=("criteria", "sturm"), default="criteria")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1.5)
    ap.add_argument("--emit-svg")
    ap.add_argument("--emit-pgm")
    ap.add_argument("--factors", help="semicolon separated conic factors")
    ap.add_argument("--k", type=int)
    ap.add_argument("--only", help="selftest: comma separated criterion numbers")
    ap.add_argument("--report", help="directory for JSON and figures")
    ap.add_argument("--explain", action="store_true")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    return ap


VALUE_FLAGS = ("--point", "--direction", "--window")


def _join_negative_values(argv: list) -> list:
    """Let ``--window -1,1,-1,1`` through: argparse would read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    envelope = {"schema": SCHEMA, "argv": argv}
    try:
        args = build_parser().parse_args(argv)
        envelope["command"] = args.command
        if args.polynomial is not None and args.command != "rigid":
            envelope["input"] = parse_poly(args.polynomial, args.nvars).to_text()
        result = COMMANDS[args.command](args)
        code = result.pop("_exit", EXIT_OK)
        envelope["exact"] = bool(result.pop("exact", True))
        envelope["advisory"] = bool(result.pop("advisory", not envelope["exact"]))
        envelope["result"] = result
        envelope["ok"] = code == EXIT_OK
        _emit(envelope, stream)
        return code
    except UsageError as exc:
        envelope.update(ok=False, error={"kind": "usage", "message": str(exc)})
        _emit(envelope, stream)
        return EXIT_USAGE
    except ParseError as exc:
        envelope.update(ok=False, error={"kind": exc.kind, "message": str(exc), "offset": exc.offset})
        _emit(envelope, stream)
        return EXIT_PARSE
    except PreconditionError as exc:
        envelope.update(ok=False, error={"kind": exc.kind, "message": str(exc)})
        _emit(envelope, stream)
        return EXIT_PRECONDITION
    except (ImprojError, ValueError, ZeroDivisionError) as exc:
        # malformed values that slipped past argparse, e.g. "--resolution abc"
        envelope.update(ok=False, error={"kind": "precondition", "message": str(exc)})
        _emit(envelope, stream)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001 - the JSON contract covers every failure
        envelope.update(ok=False, error={"kind": "internal", "message": f"{type(exc).__name__}: {exc}"})
        _emit(envelope, stream)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())

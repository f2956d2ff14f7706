"""Command-line interface: run, gen, verify, bench, export."""
from __future__ import annotations

import argparse
import csv
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

from . import io as aio
from .errors import (
    FormatError,
    ImprecisionAlarm,
    InfeasibleOrFlat,
    StructureError,
    TooLarge,
    Unbounded,
)
from .generators import (
    crosspolytope,
    cube,
    gen_example_A2,
    gen_polar_minkowski_seq,
    gen_standard,
    gen_zonotope3,
    grid_generators,
    simplex,
)
from .numerics import get_backend, to_rational
from .pipeline import approximate, canonicalize, with_prefix
from .verify import check_sandwich, float_error_audit

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3, 4
BENCH_FIELDS = ["fixture", "alg", "eps", "backend", "n_vertices", "runtime_ms", "verified", "error"]


class UsageError(Exception):
    pass


def _eps(text: str):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return text


def _eps_value(text: str, backend):
    return to_rational(text) if backend.exact else float(Fraction(text))


def fixture_from_spec(spec: str, backend="rational", seed: int = 0):
    """``kind[:args]`` with kinds simplex, cube, cross, ball, zonotope, polar and exampleA2.

    ``ball:d:m[:seed]`` (``seed`` defaults to the argument), ``zonotope:k``
    (first ``k`` grid generators) and ``polar:k`` (last member of the
    sequence of length ``k+1``).
    """
    kind, *args = spec.split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise UsageError(f"bad fixture spec {spec!r}") from None
    if kind in ("simplex", "cube", "cross"):
        d = nums[0] if nums else 3
        F = {"simplex": simplex, "cube": cube, "cross": crosspolytope}[kind](d)
    elif kind == "ball":
        d, m, seed = (nums + [3, 20, seed][len(nums):])[:3]
        F = gen_standard("ball", d, m, seed)
    elif kind == "zonotope":
        F = gen_zonotope3(grid_generators(nums[0] if nums else 13))
    elif kind == "polar":
        F = gen_polar_minkowski_seq(nums[0] if nums else 1)[-1]
    elif kind == "exampleA2":
        ex = gen_example_A2()
        return ex.P.with_backend(get_backend(backend)), "exampleA2"
    else:
        raise UsageError(f"unknown fixture kind {kind!r}")
    return F.P.with_backend(get_backend(backend)), F.name


def _load(path, backend):
    A, b, _ = aio.read_ine(Path(path))
    return canonicalize(A, b, backend)


def _check_alg(alg, d, experimental):
    if alg == "ga" and d not in (2, 3):
        raise UsageError("the graph algorithm needs d in {2, 3}")
    if alg == "addm" and d >= 4 and not experimental:
        raise UsageError("d >= 4 needs --experimental-highdim")
    if d < 2:
        raise UsageError("dimension must be at least 2")


def _run_kwargs(args):
    kw = {}
    if args.alg == "addm" and args.experimental_highdim:
        kw["experimental_highdim"] = True
    if args.alg == "ga" and getattr(args, "check_structure", False):
        kw["audit"] = True
    return kw


def cmd_run(args) -> int:
    backend = get_backend(args.backend)
    P, T = _load(args.input, backend)
    _check_alg(args.alg, P.d, args.experimental_highdim)
    eps = _eps_value(args.eps, backend)
    g, coords, rep, Q = approximate(P, eps, args.alg, **_run_kwargs(args))
    out_pts = [T.to_original(p) for p in rep.points]
    out = Path(args.output) if args.output else Path(args.input).with_suffix(".ext")
    out.write_text(aio.write_ext(out_pts))
    print(f"algorithm: {args.alg}")
    print(f"eps: {args.eps}")
    print(f"backend: {backend.name}")
    print(f"vertices: {len(rep)}")
    print(f"output: {out}")
    if args.off or args.svg:
        if args.alg != "ga":
            raise UsageError("OFF/SVG export needs a graph algorithm run")
        mapped = {v: T.to_original(c) for v, c in coords.items()}
        if args.off:
            Path(args.off).write_text(aio.write_off(g, args.triangulate, mapped))
        if args.svg:
            Path(args.svg).write_text(aio.write_svg(g, coords=mapped))
    status = EXIT_OK
    if args.verify:
        rep_s = check_sandwich(Q, rep.points, args.eps)
        print(f"sandwich: {'PASS' if rep_s.ok else 'FAIL'}"
              f" (missing {len(rep_s.missing)}, outside {len(rep_s.outside)})")
        status = max(status, EXIT_OK if rep_s.ok else EXIT_CHECK)
    if args.audit:
        if args.alg == "addm" and P.d >= 4:
            raise UsageError("the float audit is limited to d <= 3")
        audit, _ = float_error_audit(with_prefix(P.with_backend("rational")), args.eps, args.alg)
        print(f"audit: {'PASS' if audit.passed else 'FAIL'} E={audit.E:.3e} bound={audit.bound:.3e}"
              f" bad_decisions={audit.bad_decisions}")
        if not audit.passed:
            print("audit failed: float output is not certified", file=sys.stderr)
            status = EXIT_CHECK
    return status


def cmd_gen(args) -> int:
    P, name = fixture_from_spec(args.spec, args.backend, args.seed)
    text = aio.write_ine(P)
    if args.output:
        Path(args.output).write_text(text)
        print(f"{name}: {P.m} rows, d={P.d} -> {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    P, T = _load(args.input, "rational")
    pts = [T.to_canonical(p) for p in aio.read_ext(Path(args.points))]
    if pts and len(pts[0]) != P.d:
        raise FormatError("point dimension does not match the polytope")
    rep = check_sandwich(P, pts, args.eps)
    print(f"inner: {'PASS' if rep.inner_ok else 'FAIL'} ({len(rep.missing)} of "
          f"{rep.n_vertices_P} vertices outside conv V)")
    print(f"outer: {'PASS' if rep.outer_ok else 'FAIL'} ({len(rep.outside)} points outside "
          f"(1+eps)P, {rep.within_float_tol} within float tolerance)")
    return EXIT_OK if rep.ok else EXIT_CHECK


def bench_cell(spec, alg, eps_text, backend_name, verify):
    row = {"fixture": spec, "alg": alg, "eps": eps_text, "backend": backend_name,
           "n_vertices": "", "runtime_ms": "", "verified": "", "error": ""}
    try:
        backend = get_backend(backend_name)
        P, name = fixture_from_spec(spec, backend_name)
        row["fixture"] = name
        Q = with_prefix(P)
        eps = _eps_value(eps_text, backend)
        t0 = time.monotonic()
        _, _, rep, _ = approximate(Q, eps, alg)
        row["runtime_ms"] = f"{(time.monotonic() - t0) * 1000:.1f}"
        row["n_vertices"] = len(rep)
        if verify:
            row["verified"] = check_sandwich(Q, rep.points, eps_text).ok
    except Exception as exc:  # recorded per row, the sweep continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_bench(args) -> int:
    from .plotting import bench_figures

    cells = [(f, a, e, args.backend, args.verify) for f in args.fixtures for a in args.alg for e in args.eps]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(bench_cell, *zip(*cells)))
    else:
        rows = [bench_cell(*c) for c in cells]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "bench.csv"
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    figs = bench_figures([r for r in rows if not r["error"]], outdir)
    print(f"csv: {path}")
    for f in figs:
        print(f"figure: {f}")
    failed = [r for r in rows if r["error"] or r["verified"] is False]
    for r in failed:
        print(f"failed: {r['fixture']} {r['alg']} eps={r['eps']} {r['error']}", file=sys.stderr)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_export(args) -> int:
    if args.format in ("off", "svg") and args.alg != "ga":
        raise UsageError(f"{args.format} export needs --alg ga")
    backend = get_backend(args.backend)
    P, T = _load(args.input, backend)
    _check_alg(args.alg, P.d, args.experimental_highdim)
    if args.format == "off" and P.d != 3:
        raise UsageError("OFF export needs d = 3")
    if args.format == "svg" and P.d != 2:
        raise UsageError("SVG export needs d = 2")
    g, coords, rep, _ = approximate(P, _eps_value(args.eps, backend), args.alg, **_run_kwargs(args))
    mapped = {v: T.to_original(c) for v, c in coords.items()}
    if args.format == "off":
        text = aio.write_off(g, args.triangulate, mapped)
    elif args.format == "svg":
        text = aio.write_svg(g, coords=mapped)
    else:
        text = aio.write_csv(rep.ids, [mapped[v] for v in rep.ids])
    out = Path(args.output) if args.output else Path(args.input).with_suffix("." + args.format)
    out.write_text(text)
    print(f"{args.format}: {out}")
    return EXIT_OK


def _common(p):
    p.add_argument("--alg", choices=["ga", "addm"], default="ga")
    p.add_argument("--eps", type=_eps, required=True, help="positive tolerance")
    p.add_argument("--backend", choices=["rational", "float"], default="rational")
    p.add_argument("--experimental-highdim", action="store_true",
                   help="allow the double description method for d >= 4 (unverified)")
    p.add_argument("--check-structure", action="store_true",
                   help="audit the plane graph after every mutation (graph algorithm)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="approxvert", description="Approximate vertex enumeration.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="approximate the vertices of an .ine polytope")
    p.add_argument("input")
    _common(p)
    p.add_argument("-o", "--output", help="vertex file (default: input with .ext)")
    p.add_argument("--verify", action="store_true", help="exact sandwich check")
    p.add_argument("--audit", action="store_true", help="paired float/exact error audit")
    p.add_argument("--off")
    p.add_argument("--svg")
    p.add_argument("--triangulate", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="write a fixture as .ine")
    p.add_argument("spec", help="simplex:d, cube:d, cross:d, ball:d:m:seed, zonotope:k, polar:k, exampleA2")
    p.add_argument("-o", "--output")
    p.add_argument("--backend", choices=["rational", "float"], default="rational")
    p.add_argument("--seed", type=int, default=0, help="seed for ball fixtures without one")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="exact sandwich check of an .ext against an .ine")
    p.add_argument("input")
    p.add_argument("points")
    p.add_argument("--eps", type=_eps, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="eps sweep to CSV and PNG figures")
    p.add_argument("--fixtures", nargs="+", default=["zonotope:13"])
    p.add_argument("--eps", nargs="+", type=_eps, default=["1", "0.1", "0.01", "0.001"])
    p.add_argument("--alg", nargs="+", choices=["ga", "addm"], default=["ga", "addm"])
    p.add_argument("--backend", choices=["rational", "float"], default="rational")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="bench_out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="run and export OFF (d=3), SVG (d=2) or CSV")
    p.add_argument("input")
    _common(p)
    p.add_argument("--format", choices=["off", "svg", "csv"], required=True)
    p.add_argument("--triangulate", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InfeasibleOrFlat, Unbounded, TooLarge, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ImprecisionAlarm as exc:
        print(f"imprecision alarm: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

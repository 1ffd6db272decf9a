"""Command-line experiments.

Every CSV written here starts with ``#`` metadata lines (tool version, the
command, a JSON echo of the configuration, the seed) followed by a header row.
Outputs depend only on the configuration, so reruns are byte-identical.
"""
import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, curvature, lab, projvol, specfile, svg
from . import bodies as B
from .errors import ConvexLabError
from .sphere import as_direction, normalize, random_directions

OUTPUT_DIR_ENV = "CONVEXLAB_OUTPUT_DIR"


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _term(text):
    coef, _, powers = text.partition(":")
    if not powers:
        raise argparse.ArgumentTypeError(f"term must look like COEF:P1,P2,..., got {text!r}")
    return float(coef), tuple(int(p) for p in powers.split(","))


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def _config(args):
    skip = {"func", "output", "svg"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _output_path(args, suffix=".csv"):
    if getattr(args, "output", None):
        return Path(args.output)
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{args.command}{suffix}"


def write_csv(path, args, header, rows, append=False):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not (append and path.exists())
    buf = io.StringIO()
    if fresh:
        buf.write(f"# convexlab {__version__}\n")
        buf.write(f"# command: {args.command}\n")
        buf.write(f"# config: {json.dumps(_config(args), sort_keys=True)}\n")
        buf.write(f"# seed: {getattr(args, 'seed', None)}\n")
    w = csv.writer(buf, lineterminator="\n")
    if fresh:
        w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    with open(path, "a" if not fresh else "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return path


def _body_id(body, path):
    return body.label or Path(path).stem


# -- subcommands ------------------------------------------------------------


def cmd_gen(args):
    n = args.dim
    if args.kind == "ball":
        center = _floats(args.center) if args.center else [0.0] * n
        body = B.Ball(center, args.radius)
    elif args.kind == "ellipsoid":
        axes = _floats(args.axes)
        body = B.Ellipsoid(np.diag(np.square(axes)))
    elif args.kind == "cube":
        corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
        body = B.Polytope(args.radius * corners)
    elif args.kind == "simplex":
        body = B.Polytope(args.radius * np.vstack([np.eye(n), -np.ones(n) / n]))
    elif args.kind == "constant-width":
        terms = args.term or [(1.0, (3,) + (0,) * (n - 1))]
        body = B.make_constant_width(n, args.radius, terms, args.eps, seed=args.seed)
    elif args.kind == "reuleaux":
        body = B.ReuleauxRevolution(args.width, _floats(args.axis))
    else:  # pragma: no cover - argparse restricts choices
        raise ConvexLabError(f"unknown kind {args.kind}")
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    specfile.save(body, out, label=args.label)
    print(f"wrote {body.kind} (dim {body.dim}) to {out}")
    return 0


def cmd_width(args):
    body = specfile.load(args.body)
    U = random_directions(np.random.default_rng(args.seed), body.dim, args.samples)
    w = B.width(body, U)
    header = ["index"] + [f"u{i + 1}" for i in range(body.dim)] + ["width"]
    rows = [[i, *u, wi] for i, (u, wi) in enumerate(zip(U, w))]
    path = write_csv(_output_path(args), args, header, rows)
    print(f"width: mean={w.mean():.12g} spread={(w.max() - w.min()):.3e} -> {path}")
    return 0


def cmd_brightness(args):
    body = specfile.load(args.body)
    rep = projvol.brightness_stats(body, args.k, args.N, args.seed, args.order, args.workers)
    path = write_csv(
        _output_path(args), args, projvol.CSV_HEADER, [rep.csv_row(_body_id(body, args.body), body.dim)], args.append
    )
    if args.svg:
        Path(args.svg).write_text(
            svg.histogram(rep.values, title=f"V_{args.k}(K|U), N={args.N}", xlabel="projection volume")
        )
    print(
        f"brightness k={rep.k}: mean={rep.mean:.12g} std={rep.std:.3e} "
        f"stderr={rep.stderr:.3e} rel-spread={rep.rel_spread:.3e} -> {path}"
    )
    return 0


def cmd_curvature(args):
    body = specfile.load(args.body)
    ref = specfile.load(args.reference) if args.reference else None
    if args.direction:
        U = normalize(np.array([_floats(args.direction)]))
    else:
        U = random_directions(np.random.default_rng(args.seed), body.dim, args.samples)
    m = body.dim - 1
    header = ["index"] + [f"u{i + 1}" for i in range(body.dim)] + [f"r{i + 1}" for i in range(m)] + ["density"]
    if ref is not None:
        header += [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)]
        header += ["residual_sum", "commutator"]
        if args.beta is not None:
            header += ["residual_k"]
    rows = []
    for i, u in enumerate(U):
        spec = curvature.radii_of_curvature(body, u)
        row = [i, *u, *spec.radii, spec.density]
        if ref is not None:
            rel = curvature.relative_curvature_eigs(body, ref, u, args.k, args.beta)
            row += [*rel.x, *rel.y, rel.residual_sum, rel.commutator]
            if args.beta is not None:
                row.append(rel.residual_k())
        rows.append(row)
    path = write_csv(_output_path(args), args, header, rows)
    print(f"curvature at {len(rows)} directions -> {path}")
    return 0


def cmd_rnd(args):
    body = specfile.load(args.body)
    u = as_direction(normalize(np.array(_floats(args.direction))))
    indices = [int(i) for i in _floats(args.indices)]
    rows = curvature.rnd_table(body, u, indices, args.mesh_res)
    path = write_csv(_output_path(args), args, curvature.RND_COLUMNS, rows)
    last = rows[-1]
    print(f"rnd: i={last[0]} ratio={last[3]:.10g} limit={last[4]:.10g} rel_error={last[5]:.3e} -> {path}")
    return 0


def cmd_lemmas(args):
    rows = lab.lemma_suite(args.fuzz, args.seed)
    path = write_csv(_output_path(args), args, lab.SUITE_COLUMNS, rows)
    failed = sum(r[3] for r in rows)
    for r in rows:
        print(f"{r[0]:<20} k={r[1]} cases={r[2]} failures={r[3]} max_residual={r[4]:.3e}")
    print(f"lemmas: {'PASS' if failed == 0 else 'FAIL'} -> {path}")
    return 0 if failed == 0 else 1


def _scan_rows(scan):
    return [[i, w, b] for i, (w, b) in enumerate(zip(scan.width_ratios, scan.brightness_ratios))]


def _verdict_line(scan):
    return (
        f"verdict={scan.verdict} alpha={scan.alpha_mean:.10g} alpha_spread={scan.alpha_spread:.3e} "
        f"beta={scan.beta_mean:.10g} beta_spread={scan.beta_spread:.3e} "
        f"beta/alpha^k={scan.beta_normalized:.10g}"
    )


def cmd_nakajima(args):
    K, K0 = specfile.load(args.body), specfile.load(args.reference)
    scan = lab.nakajima_scan(K, K0, args.k, args.N, args.seed, args.order, args.threshold)
    path = write_csv(_output_path(args), args, ["sample", "width_ratio", "brightness_ratio"], _scan_rows(scan))
    print(_verdict_line(scan))
    print(f"-> {path}")
    return 0


def cmd_revolution(args):
    K, K0 = specfile.load(args.body), specfile.load(args.reference)
    scan = lab.revolution_check(
        K, K0, _floats(args.axis), args.k, args.N, args.seed, args.order, threshold=args.threshold
    )
    p = scan.profiles
    rows = list(zip(p["polar_angle"], p["width_ratio"], p["brightness_ratio"]))
    path = write_csv(_output_path(args), args, ["polar_angle", "width_ratio", "brightness_ratio"], rows)
    print(_verdict_line(scan))
    print(f"-> {path}")
    return 0


def cmd_variance_descent(args):
    eps = _floats(args.eps)
    rows = lab.variance_descent(args.dim, args.k, eps, args.N, args.seed, args.order)
    path = write_csv(
        _output_path(args), args, ["eps", "alpha_spread", "beta_spread", "beta_mean", "verdict"], rows
    )
    svg_path = Path(args.svg) if args.svg else path.with_suffix(".svg")
    svg_path.write_text(
        svg.line_chart(
            [r[0] for r in rows], [r[2] for r in rows],
            title=f"{args.k}-brightness spread of odd-perturbed balls (n={args.dim})",
            xlabel="eps", ylabel="beta spread",
        )
    )
    spreads = [r[2] for r in rows]
    increasing = all(b > a for a, b in zip(spreads, spreads[1:]))
    print(f"variance-descent: strictly increasing={increasing} -> {path}, {svg_path}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="convexlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"convexlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    def common(sp, seed=0, output=True):
        sp.add_argument("--seed", type=int, default=seed)
        if output:
            sp.add_argument("-o", "--output", help=f"output path (default: ${OUTPUT_DIR_ENV}/<command>.csv)")

    sp = add("gen", cmd_gen, "write a body spec file")
    sp.add_argument("kind", choices=["ball", "ellipsoid", "cube", "simplex", "constant-width", "reuleaux"])
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--center")
    sp.add_argument("--axes", default="1,2,3", help="ellipsoid semi-axes")
    sp.add_argument("--width", type=float, default=1.0)
    sp.add_argument("--axis", default="0,0,1")
    sp.add_argument("--term", type=_term, action="append", help="odd monomial COEF:P1,...,Pn (repeatable)")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--label")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("width", cmd_width, "width function at random directions")
    sp.add_argument("--body", required=True)
    sp.add_argument("--samples", type=int, default=100)
    common(sp)

    sp = add("brightness", cmd_brightness, "k-brightness statistics over Haar subspaces")
    sp.add_argument("--body", required=True)
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("-N", type=int, default=200)
    sp.add_argument("--order", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--append", action="store_true", help="append a row to an existing results CSV")
    sp.add_argument("--svg", help="also write a histogram of the sampled volumes")
    common(sp)

    sp = add("curvature", cmd_curvature, "principal and relative radii of curvature")
    sp.add_argument("--body", required=True)
    sp.add_argument("--reference")
    sp.add_argument("--direction")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("-k", type=int)
    sp.add_argument("--beta", type=float)
    common(sp)

    sp = add("rnd", cmd_rnd, "cap-ratio convergence of the surface area measure")
    sp.add_argument("--body", required=True)
    sp.add_argument("--direction", default="0,0,1")
    sp.add_argument("--indices", default="1,2,5,10,20,50")
    sp.add_argument("--mesh-res", type=int, default=32)
    common(sp)

    sp = add("lemmas", cmd_lemmas, "algebraic constraint checks and fuzzing")
    sp.add_argument("--fuzz", type=int, default=100_000)
    common(sp)

    sp = add("nakajima", cmd_nakajima, "compare width and k-brightness with a reference body")
    sp.add_argument("--body", required=True)
    sp.add_argument("--reference", required=True)
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("-N", type=int, default=200)
    sp.add_argument("--order", type=int)
    sp.add_argument("--threshold", type=float, default=lab.SPREAD_THRESHOLD, help="relative spread tolerance")
    common(sp)

    sp = add("revolution", cmd_revolution, "scan for bodies of revolution about a common axis")
    sp.add_argument("--body", required=True)
    sp.add_argument("--reference", required=True)
    sp.add_argument("--axis", default="0,0,1")
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("-N", type=int, default=200)
    sp.add_argument("--order", type=int)
    sp.add_argument("--threshold", type=float, default=lab.SPREAD_THRESHOLD, help="relative spread tolerance")
    common(sp)

    sp = add("variance-descent", cmd_variance_descent, "brightness spread along the odd-perturbed family")
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("--eps", default="0,0.02,0.04,0.06,0.08,0.1")
    sp.add_argument("-N", type=int, default=500)
    sp.add_argument("--order", type=int)
    sp.add_argument("--svg")
    common(sp)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConvexLabError, OSError) as exc:
        print(f"convexlab {args.command}: error: {exc}", file=sys.stderr)
        return 1

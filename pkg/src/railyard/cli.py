"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error. Every
output starts with a provenance header and is a function of the
arguments alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc
    return v


def _add_model(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--spec", metavar="FILE", help="model JSON {l, r, lr, signs, weights}")
    g.add_argument("--aztec", metavar="N", type=int, help="Aztec diamond of size N")
    p.add_argument("--lambda", dest="lam", default="1", metavar="Q", help="Aztec bias (rational)")


def _load_spec(args, need_weights: bool):
    from .aztec import AztecParams, aztec_spec
    from .graph import RygSpec

    if args.spec is not None:
        try:
            with open(args.spec) as fh:
                spec = RygSpec.from_json(json.load(fh))
        except OSError as exc:
            raise InputError(str(exc)) from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"malformed spec {args.spec}: {exc}") from exc
    elif args.aztec is not None:
        try:
            lam = _rational(args.lam)
            q = getattr(args, "q", None)
            if q not in (None, "symbolic"):
                q = _rational(q)
                weighting = "qvol" if lam == 1 else "biased_qvol"
                spec = aztec_spec(AztecParams(args.aztec, lam, q, weighting))
            else:
                spec = aztec_spec(args.aztec, lam)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("one of --spec or --aztec is required")
    if need_weights and not spec.numeric:
        raise InputError("this command needs numeric weights")
    return spec


def _require_cap(spec, D):
    from .partition_fn import finite_support

    if D is None and not finite_support(spec):
        raise InputError("--degree is required for specs with infinitely many coverings")


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_zfun(args) -> int:
    from .partition_fn import q_specialize, z_brute, z_hook_q, z_product, z_transfer
    from .render import header_lines, provenance

    spec = _load_spec(args, need_weights=False).symbolic()
    D = args.degree
    prov = provenance(spec, D=D, method=args.method)
    lines = []
    status = OK
    if args.q is not None:
        zq = z_hook_q(spec, D)
        lines.append(str(zq))
        if args.check:
            spec_q = q_specialize(z_product(spec, 2 * D), spec, D)
            if spec_q != zq:
                print(f"q mismatch: hook {zq} vs specialized {spec_q}", file=sys.stderr)
                status = FAILED
    else:
        routes = {"product": z_product, "transfer": z_transfer, "brute": z_brute}
        z = routes[args.method](spec, D)
        lines.append(str(z))
        if args.check:
            vals = {name: f(spec, D) for name, f in routes.items()}
            if len({str(v) for v in vals.values()}) != 1:
                for name, v in vals.items():
                    print(f"{name}: {v}", file=sys.stderr)
                status = FAILED
    _emit(header_lines(prov) + "\n".join(lines) + "\n", args.out)
    return status


def _read_edge_sets(path: str) -> list:
    from .graph import Edge

    try:
        with open(path) as fh:
            data = json.load(fh)
        if data and isinstance(data[0], list) and data[0] and not isinstance(data[0][0], list):
            data = [data]
        return [[Edge.from_json(q) for q in s] for s in data]
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except (ValueError, IndexError, TypeError) as exc:
        raise InputError(f"malformed edge list {path}: {exc}") from exc


def cmd_corr(args) -> int:
    from .graph import is_edge
    from .kernel import KernelContext, edge_probability
    from .partition_fn import NumericOracle, finite_support, hook_boxes
    from .render import provenance, write_csv

    spec = _load_spec(args, need_weights=True)
    sets = _read_edge_sets(args.edges)
    for s in sets:
        for e in s:
            if not is_edge(spec, e):
                raise InputError(f"{e.to_json()} is not an edge of the graph")
    ctx = KernelContext(spec)
    rows = []
    status = OK
    oracle = None
    if args.check:
        need = max([abs(e.even.y) for s in sets for e in s] + [0])
        H = int(need + Fraction(1, 2)) + 1
        H = max(H, len(hook_boxes(spec)) + 2 if finite_support(spec) else args.rows)
        oracle = NumericOracle(spec, H)
    for j, s in enumerate(sets):
        p, err = edge_probability(ctx, s, args.method, with_error=True)
        rows.append((j, p, args.method, err))
        if oracle is not None:
            ref = oracle.probability(s)
            if abs(p - ref) > 1e-9:
                print(f"set {j}: kernel {p!r} vs oracle {ref!r}", file=sys.stderr)
                status = FAILED
    prov = provenance(spec, method=args.method)
    _emit(write_csv(rows, ["set", "probability", "method", "error_estimate"], prov), args.out)
    return status


def cmd_sample(args) -> int:
    from .render import provenance, svg_ryg
    from .sampler import build_backward, fitted_window, sample_batch
    from .partition_fn import finite_support

    spec = _load_spec(args, need_weights=True)
    _require_cap(spec, args.degree)
    H = fitted_window(spec, args.degree)
    table = build_backward(spec, args.degree, H)
    samples = sample_batch(table, args.count, args.seed)
    prov = provenance(spec, D=table.D, seed=args.seed, count=args.count, window=H,
                      truncation_mass=f"{table.truncation_mass():.3e}" if finite_support(spec) else "n/a")
    if args.format == "svg":
        if args.out is None:
            raise InputError("--format svg needs --out PREFIX")
        for j, c in enumerate(samples):
            with open(f"{args.out}_{j}.svg", "w") as fh:
                fh.write(svg_ryg(spec, H, c, dict(prov, index=j)))
        return OK
    lines = [json.dumps({"provenance": prov}, sort_keys=True)]
    for j, c in enumerate(samples):
        lines.append(json.dumps({"index": j, "edges": c.to_json()}))
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def cmd_kasteleyn(args) -> int:
    from .kasteleyn import max_error, verify_all_orientations, verify_inverse
    from .kernel import KernelContext
    from .render import provenance, write_json

    spec = _load_spec(args, need_weights=True)
    report = verify_inverse(KernelContext(spec), args.rows, method=args.method)
    report["orientation"] = verify_all_orientations(spec, args.rows + 1)
    report["max_error"] = max_error(report)
    ok = report["max_error"] <= args.tol and report["orientation"]["failures"] == 0
    report["passed"] = ok
    _emit(write_json(report, provenance(spec, rows=args.rows, method=args.method)), args.out)
    return OK if ok or not args.check else FAILED


def cmd_aztec(args) -> int:
    from . import aztec as az
    from .render import (classify_raster, provenance, raster_boundary_residual, svg_dominos,
                         write_csv, write_json, write_pgm)

    lam = _rational(args.lam)
    if args.action not in ("classify", "epgf") and (args.aztec is None or args.aztec < 1):
        raise InputError("--aztec N (N >= 1) is required")
    n = args.aztec
    prov = provenance(n=n, lam=lam, action=args.action, seed=args.seed)
    status = OK
    if args.action == "west":
        method = args.method or "kernel"
        if method not in ("kernel", "contour", "exact"):
            raise InputError(f"unknown method {method!r}")
        rows = []
        for x, y in az.admissible_grid(n):
            if method == "exact":
                v = str(az.west_prob_exact(x, y, n, lam))
            else:
                v = az.west_prob(x, y, n, float(lam), method)
            rows.append((x, y, n, lam, v))
        _emit(write_csv(rows, ["x", "y", "n", "lambda", "value"], prov), args.out)
    elif args.action == "creation":
        rows = []
        for x, y in az.admissible_grid(n):
            v = az.creation_rate(x, y, n, lam)
            rows.append((x, y, n, lam, v))
            if args.check:
                d = az.creation_rate_definitional(x, y, n, float(lam))
                if abs(float(v) - d) > 1e-8:
                    print(f"({x},{y}): closed {v} vs definitional {d!r}", file=sys.stderr)
                    status = FAILED
        _emit(write_csv(rows, ["x", "y", "n", "lambda", "value"], prov), args.out)
    elif args.action == "epgf":
        D = args.degree
        coeffs = az.epgf_coeffs(lam, D)
        data = [{"n": k, "terms": [[i, j, str(c)] for (i, j), c in sorted(p.items())]}
                for k, p in enumerate(coeffs)]
        if args.check and az.epgf_brute_coeffs(lam, D) != coeffs:
            print("epgf coefficients differ from enumeration", file=sys.stderr)
            status = FAILED
        _emit(write_json(data, provenance(lam=lam, D=D, action="epgf")), args.out)
    elif args.action == "classify":
        N = args.size
        raster = classify_raster(N)
        prov = provenance(size=N, action="classify", tau="0..1", chi="1..-1")
        if args.format == "pgm":
            _emit(write_pgm(raster, prov), args.out)
        else:
            tau = [i / (N - 1) for i in range(N)]
            chi = [1 - 2 * i / (N - 1) for i in range(N)]
            names = {1.0: az.FROZEN, 0.5: az.LIQUID, 0.0: az.BOUNDARY}
            rows = [(tau[c], chi[r], names[raster[r, c]]) for r in range(N) for c in range(N)]
            _emit(write_csv(rows, ["tau", "chi", "class"], prov), args.out)
        if args.check:
            # a boundary pixel is within one pixel of the zero set
            res = raster_boundary_residual(raster)
            if res > 12.0 / (N - 1):
                print(f"boundary pixels off the circle: residual {res}", file=sys.stderr)
                status = FAILED
    elif args.action == "tiling":
        t = az.shuffle_sample(n, lam, args.seed)
        _emit(svg_dominos(t, n, prov), args.out)
    elif args.action == "arctic":
        rep = az.empirical_arctic(n, args.count, args.seed, float(lam))
        _emit(write_json(rep, prov), args.out)
    return status


def cmd_render(args) -> int:
    from .graph import fundamental_covering
    from .render import provenance, svg_domino_picture, svg_lozenge, svg_ryg
    from .sampler import build_backward, fitted_window, sample

    spec = _load_spec(args, need_weights=args.seed is not None)
    if args.seed is not None:
        _require_cap(spec, args.degree)
        H = fitted_window(spec, args.degree)
        c = sample(build_backward(spec, args.degree, H), args.seed)
    else:
        H = args.rows
        c = fundamental_covering(spec, H)
    prov = provenance(spec, seed=args.seed, view=args.view)
    try:
        if args.view == "ryg":
            text = svg_ryg(spec, H, c, prov)
        elif args.view == "domino":
            text = svg_domino_picture(c, prov)
        else:
            text = svg_lozenge(c, prov)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(text, args.out)
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="railyard", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"railyard {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zfun", help="partition function as a truncated series")
    _add_model(z)
    z.add_argument("--degree", type=int, default=6)
    z.add_argument("--method", choices=["product", "transfer", "brute"], default="product")
    z.add_argument("--q", nargs="?", const="symbolic", default=None,
                   help="print the q-specialized hook product instead")
    z.add_argument("--check", action="store_true", help="compare all routes")
    z.add_argument("--out")
    z.set_defaults(func=cmd_zfun)

    c = sub.add_parser("corr", help="edge-set probabilities from the correlation kernel")
    _add_model(c)
    c.add_argument("--edges", required=True, metavar="FILE",
                   help="JSON list of edge sets, edges as [x_even, y_even, x_odd, y_odd]")
    c.add_argument("--method", choices=["numeric", "series"], default="numeric")
    c.add_argument("--rows", type=int, default=24, help="oracle window for --check")
    c.add_argument("--check", action="store_true", help="compare with the row-transfer oracle")
    c.add_argument("--out")
    c.set_defaults(func=cmd_corr)

    s = sub.add_parser("sample", help="exact random coverings")
    _add_model(s)
    s.add_argument("--degree", type=int, default=None, help="size cap for the boundary states")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=["json", "svg"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    k = sub.add_parser("kasteleyn", help="check the kernel against the Kasteleyn matrix")
    _add_model(k)
    k.add_argument("--rows", type=int, default=2, help="rows |y| < ROWS are tested")
    k.add_argument("--method", choices=["numeric", "series"], default="numeric")
    k.add_argument("--tol", type=float, default=1e-8)
    k.add_argument("--check", action="store_true")
    k.add_argument("--out")
    k.set_defaults(func=cmd_kasteleyn)

    a = sub.add_parser("aztec", help="Aztec diamond quantities")
    a.add_argument("action", choices=["west", "creation", "epgf", "classify", "tiling", "arctic"])
    a.add_argument("--aztec", metavar="N", type=int)
    a.add_argument("--lambda", dest="lam", default="1", metavar="Q")
    a.add_argument("--degree", type=int, default=4)
    a.add_argument("--size", type=int, default=101, help="raster side for classify")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--count", type=int, default=20)
    a.add_argument("--method", default=None, help="kernel, contour or exact (west)")
    a.add_argument("--format", choices=["csv", "json", "pgm", "svg"], default="csv")
    a.add_argument("--check", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_aztec)

    r = sub.add_parser("render", help="SVG pictures of a covering")
    _add_model(r)
    r.add_argument("--view", choices=["ryg", "domino", "lozenge"], default="ryg")
    r.add_argument("--seed", type=int, default=None, help="draw a random covering")
    r.add_argument("--degree", type=int, default=None)
    r.add_argument("--rows", type=int, default=3)
    r.add_argument("--format", choices=["svg"], default="svg")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"railyard: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: ``solve``, ``converge``, ``scan`` and ``local``.

Every subcommand writes CSV (header row, 15 significant digits) to ``--out``
or standard output. Angles are given in units of pi.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import curves, galerkin, mellin
from .problems import make_rhs

log = logging.getLogger("dlpgalerkin")

EXIT_USAGE = 2
EXIT_SINGULAR = 3

CORNERS = {"ellipse": 1, "pacman": 2, "battleax": 4, "l1": 1, "l2": 2, "l4": 4}
MODEL_CURVES = ("l1", "l2", "l4")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("the list is empty")
    return values


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.15g" % x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", choices=sorted(CORNERS), default="pacman")
    common.add_argument("--a", type=float, default=3.0, help="ellipse semi-axis along x")
    common.add_argument("--b", type=float, default=4.0, help="ellipse semi-axis along y")
    common.add_argument("--theta", type=float, help="opening angle of the model curves, in units of pi")
    common.add_argument("--rhs", choices=["f1", "f2", "f3", "custom-constant", "custom-trig"], default="f1")
    common.add_argument("--degree", type=int, choices=[0, 1, 2], default=0)
    common.add_argument("--panels", type=int, default=40, help="inner composite panels m")
    common.add_argument("--points", type=int, default=24, help="Gauss points r per panel")
    common.add_argument("--split-outer", action="store_true",
                        help="one outer Gauss rule per knot interval instead of per support")
    common.add_argument("--out", help="CSV output file (default: stdout)")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="dlpgalerkin", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve once and tabulate the solution")
    s.add_argument("--n", type=int, default=256)

    c = sub.add_parser("converge", parents=[common], help="E_n for a list of n")
    c.add_argument("--n-list", type=_int_list, default=[128, 256, 512])

    for name, default_n, text in (("scan", 64, "condition numbers over opening angles"),
                                  ("local", None, "finite sections of the local operators")):
        g = sub.add_parser(name, parents=[common], help=text)
        g.add_argument("--theta-start", type=float, default=0.1)
        g.add_argument("--theta-end", type=float, default=1.9)
        g.add_argument("--theta-step", type=float, default=0.01)
        if default_n is not None:
            g.add_argument("--n", type=int, default=default_n)
            g.add_argument("--refine", action="store_true",
                           help="re-scan with step 0.001 and doubled n around large condition numbers")
            g.add_argument("--refine-threshold", type=float, default=1e3)
        else:
            g.add_argument("--sections", type=_int_list, default=[64, 128, 256])
    return p


def _contour(args, theta=None):
    theta = args.theta if theta is None else theta
    if args.curve in MODEL_CURVES:
        return curves.CURVES[args.curve](theta * np.pi)
    return curves.CURVES[args.curve](args.a, args.b)


def _theta_grid(args):
    if args.theta is not None:
        return [args.theta]
    count = int(np.floor((args.theta_end - args.theta_start) / args.theta_step + 1e-9)) + 1
    return [round(args.theta_start + k * args.theta_step, 12) for k in range(count)]


def _validate(parser, args):
    q = CORNERS[args.curve]
    if args.threads < 1:
        parser.error("--threads must be positive")
    if args.panels < 1 or args.panels % q:
        parser.error(f"--panels must be a positive multiple of q={q} for curve {args.curve}")
    if args.points < 1:
        parser.error("--points must be positive")
    if args.a <= 0 or args.b <= 0:
        parser.error("semi-axes must be positive")
    ns = []
    if args.command in ("solve", "scan"):
        ns = [args.n]
    elif args.command == "converge":
        ns = args.n_list
    for n in ns:
        if n < args.degree + 1 or n % q:
            parser.error(f"n={n} must be a multiple of q={q} and at least degree+1")
    if args.command in ("scan", "local"):
        if args.theta_step <= 0:
            parser.error("--theta-step must be positive")
        if args.theta_end < args.theta_start:
            parser.error("--theta-end must not be below --theta-start")
        if args.command == "scan" and args.curve not in MODEL_CURVES:
            parser.error(f"scan needs one of the model curves {MODEL_CURVES}")
    if args.command == "local" and any(b <= a for a, b in zip(args.sections, args.sections[1:])):
        parser.error("--sections must be increasing")
    if args.command in ("solve", "converge") and args.curve in MODEL_CURVES and args.theta is None:
        parser.error(f"curve {args.curve} needs --theta")
    thetas = _theta_grid(args) if args.command in ("scan", "local") else (
        [args.theta] if args.theta is not None else [])
    for t in thetas:
        if not 0.0 < t < 2.0:
            parser.error(f"opening angles must lie in (0, 2) pi, got {t}")


def _write(args, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kw(args):
    return dict(m=args.panels, r=args.points, split_outer=args.split_outer)


def cmd_solve(args):
    contour = _contour(args)
    f = make_rhs(args.rhs, args.a, args.b)
    system = galerkin.assemble(contour, args.degree, args.n, f, **_kw(args))
    sol = galerkin.solve(system)
    cond = galerkin.condition_number(system)
    print(f"condition number: {cond:.15g}", file=sys.stderr)
    mesh = galerkin.error_mesh(contour.q)
    w = sol(mesh)
    _write(args, ["s", "re_omega", "im_omega"], zip(mesh, w.real, w.imag))
    return cond


def cmd_converge(args):
    contour = _contour(args)
    f = make_rhs(args.rhs, args.a, args.b)
    rows = galerkin.convergence_table(contour, f, args.degree, args.n_list, **_kw(args))
    _write(args, ["n", "E_n"], rows)
    return rows


def _scan_rows(args, thetas, n):
    def one(t):
        system = galerkin.assemble(_contour(args, t), args.degree, n, None, **_kw(args))
        cond = galerkin.condition_number(system)
        return t, cond, np.log10(cond)

    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        return list(pool.map(one, thetas))


def cmd_scan(args):
    thetas = _theta_grid(args)
    rows = _scan_rows(args, thetas, args.n)
    if args.refine:
        extra = set()
        for t, cond, _ in rows:
            if cond > args.refine_threshold:
                log.warning("cond %.3g at theta = %gpi; refining", cond, t)
                lo, hi = t - args.theta_step, t + args.theta_step
                for k in range(int(round((hi - lo) / 0.001)) + 1):
                    v = round(lo + 0.001 * k, 12)
                    if 0.0 < v < 2.0:
                        extra.add(v)
        if extra:
            rows += _scan_rows(args, sorted(extra), 2 * args.n)
    _write(args, ["theta_over_pi", "cond", "log10_cond"], rows)
    return rows


def cmd_local(args):
    thetas = _theta_grid(args)

    def one(t):
        return t, mellin.section_conditioning(t * np.pi, args.degree, args.sections, r=args.points)

    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        results = list(pool.map(one, thetas))
    rows = [(t, s.N, s.cond, s.sigma_min) for t, stats in results for s in stats]
    _write(args, ["theta_over_pi", "N", "cond", "sigma_min"], rows)
    return rows


COMMANDS = {"solve": cmd_solve, "converge": cmd_converge, "scan": cmd_scan, "local": cmd_local}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        COMMANDS[args.command](args)
    except galerkin.SingularSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())

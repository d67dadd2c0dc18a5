"""Command line front end.

Subcommands::

    kextremal sample      --k K --n N [--figure] [--seed S] [--output PATH]
    kextremal eval        --what {cdf,pdf,mgev-cdf,mgev-pdf} --k K --point a,b,...
    kextremal dependence  --ks 2,3,4 [--n N] [--n-pairs P] [--seed S]
    kextremal converge    --parent FAMILY --k K --ns 50,500 --replicates N

CSV goes to stdout unless ``--output`` is given.  Exit status: 0 on success,
2 on argument errors, 3 when a root finder fails to converge.
"""

import argparse
import csv
import io
import os
import sys

import numpy as np

from .convergence import FAMILIES, ParentSpec, convergence_report
from .copula import copula_cdf, copula_density, mgev_cdf, mgev_pdf
from .dependence import kendall_mc, spearman_exact, spearman_mc
from .errors import NumericFailure
from .gev import GevParams
from .sampler import sample_batch

SEED_ENV = "KEXTREMAL_SEED"
DEFAULT_SEED = 0
FIGURE_K = 4
FIGURE_N = 200

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def fmt(x):
    return format(float(x), ".17g")


def _int_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}")


def _write_csv(args, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if args.output is None or args.output == "-":
        sys.stdout.write(text)
        return
    try:
        with open(args.output, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc.strerror}")


def cmd_sample(args):
    K, n = args.k, args.n
    if args.figure:
        K, n = FIGURE_K, FIGURE_N
    if K is None or n is None:
        raise UsageError("sample needs --k and --n (or --figure)")
    if K < 2 or n < 1:
        raise UsageError("sample needs K >= 2 and n >= 1")
    batch = sample_batch(K, n, _seed(args), workers=args.workers)
    header = [f"u{k + 1}" for k in range(K)]
    _write_csv(args, header, ([fmt(x) for x in row] for row in batch.rows))
    return EXIT_OK


def cmd_eval(args):
    point = np.asarray(args.point, dtype=float)
    if args.k is not None and point.size != args.k:
        raise UsageError(f"--point has {point.size} coordinates, --k is {args.k}")
    what = args.what
    if what in ("cdf", "pdf"):
        if what == "cdf":
            if not np.all((point >= 0) & (point <= 1)):
                raise UsageError("copula coordinates must lie in [0, 1]")
            value = copula_cdf(point)
        else:
            if not np.all((point > 0) & (point < 1)):
                raise UsageError("density needs coordinates in the open interval (0, 1)")
            value = copula_density(point)
    else:
        if args.mu is None or args.sigma is None or args.xi is None:
            raise UsageError(f"{what} needs --mu, --sigma and --xi")
        try:
            params = GevParams(args.mu, args.sigma, args.xi)
        except ValueError as exc:
            raise UsageError(str(exc))
        value = mgev_cdf(params, point) if what == "mgev-cdf" else mgev_pdf(params, point)
    print(fmt(value))
    return EXIT_OK


def cmd_dependence(args):
    ks = args.ks
    if not ks or min(ks) < 2:
        raise UsageError("--ks needs integers >= 2")
    if args.n < 100 or args.n_pairs < 1:
        raise UsageError("--n must be >= 100 and --n-pairs >= 1")
    seed = _seed(args)
    rows = []
    for K in ks:
        exact = spearman_exact(K)
        rho = spearman_mc(K, args.n, seed, workers=args.workers)
        tau = kendall_mc(K, args.n_pairs, seed + 1, workers=args.workers)
        rows.append([K, fmt(exact.value), fmt(rho.value), fmt(rho.std_error),
                     fmt(tau.value), fmt(tau.std_error)])
    header = ["K", "rho_exact", "rho_mc", "rho_mc_se", "tau_mc", "tau_mc_se"]
    _write_csv(args, header, rows)
    return EXIT_OK


def cmd_converge(args):
    if args.parent not in FAMILIES:
        raise UsageError(f"unknown parent {args.parent!r}; valid families: {', '.join(FAMILIES)}")
    ns = args.ns
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < args.k:
        raise UsageError("--ns must be strictly increasing and at least K")
    if args.replicates < 1000:
        raise UsageError("--replicates must be at least 1000")
    report = convergence_report(ParentSpec(args.parent), ns, args.k, args.replicates,
                                args.grid, _seed(args))
    _write_csv(args, ["n", "distance", "floor"],
               ([r.n, fmt(r.distance), fmt(r.floor)] for r in report))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="kextremal", description="K-extremal copula toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, output=True):
        p.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (default ${SEED_ENV} or {DEFAULT_SEED})")
        p.add_argument("--workers", type=int, default=None)
        if output:
            p.add_argument("--output", "-o", default=None, help="CSV path, default stdout")

    p = sub.add_parser("sample", help="draw rows from the K-extremal copula")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--figure", action="store_true",
                   help=f"preset K={FIGURE_K}, n={FIGURE_N}")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="evaluate a CDF or density at one point")
    p.add_argument("--what", choices=["cdf", "pdf", "mgev-cdf", "mgev-pdf"], default="cdf")
    p.add_argument("--k", type=int, help="dimension; defaults to the length of --point")
    p.add_argument("--point", type=_float_list, required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--xi", type=float)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dependence", help="Spearman/Kendall table between U_1 and U_K")
    p.add_argument("--ks", type=_int_list, default=[2, 3, 4, 8, 16])
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--n-pairs", type=int, default=100_000)
    common(p)
    p.set_defaults(func=cmd_dependence)

    p = sub.add_parser("converge", help="finite-n copula vs the limit")
    p.add_argument("--parent", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ns", type=_int_list, default=[50, 500, 5000])
    p.add_argument("--replicates", type=int, default=5000)
    p.add_argument("--grid", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kextremal: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailure as exc:
        print(f"kextremal: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"kextremal: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

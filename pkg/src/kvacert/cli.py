"""Command-line front end: ``kvacert {certify,table,search,pell,seshadri}``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import Sequence

from .certify import (
    SurfaceSpec,
    Verdict,
    certificate_to_json,
    certify,
    dumps,
    encode_exact,
    render_text,
)
from .errors import CapError, KvacertError
from .lattice import SIMPLE, BundleQuery
from .obstruction import MODES, default_workers, search_profiles, search_rho1
from .pell import pell_primitive
from .seshadri import (
    bound_bauer_szemberg,
    bound_kuchle,
    bound_pell_rho1,
    bound_szemberg_floor,
)

EXIT_USAGE = 64
EXIT_CAP = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _elliptic(value: str) -> int | str:
    if value == SIMPLE:
        return SIMPLE
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'simple', got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"minimal elliptic degree must be >= 1, got {n}")
    return n


def _rational(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 7/2, got {value!r}")


def _range(value: str) -> range:
    """``N`` or ``A..B`` (inclusive)."""
    try:
        if ".." in value:
            lo, hi = value.split("..", 1)
            return range(int(lo), int(hi) + 1)
        n = int(value)
        return range(n, n + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {value!r}")


def _surface_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--surface", choices=("abelian", "ktrivial"), default="abelian")
    p.add_argument("--picard1", action="store_true", help="assert Picard rank one")
    p.add_argument("--min-elliptic-degree", type=_elliptic, default=None,
                   help="minimal L-degree of an elliptic curve, or 'simple'")
    p.add_argument("--very-general", action="store_true")
    p.add_argument("--eps1", type=_rational, default=None, help="asserted lower bound for eps(L;1)")


def _surface(args: argparse.Namespace, degree: int) -> SurfaceSpec:
    return SurfaceSpec(args.surface, degree, picard_rank_one=args.picard1 or args.surface == "ktrivial",
                       min_elliptic_degree=args.min_elliptic_degree,
                       very_general=args.very_general, eps1=args.eps1)


def _degree(args: argparse.Namespace) -> int:
    if args.surface == "abelian":
        if args.d is None:
            raise UsageError("--d is required for abelian surfaces")
        return args.d
    if args.L2 is None:
        raise UsageError("--L2 is required for K-trivial surfaces")
    return args.L2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kvacert", description="Certify k-very ampleness on blow-ups of surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="run the theorem gates on one query")
    _surface_args(p)
    p.add_argument("--d", type=int)
    p.add_argument("--L2", type=int)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("table", help="CSV of the largest certified r over a parameter grid")
    _surface_args(p)
    p.add_argument("--d", type=_range, help="degree range for abelian surfaces, N or A..B")
    p.add_argument("--L2", type=_range, help="L^2 range for K-trivial surfaces")
    p.add_argument("--c", type=_range, required=True)
    p.add_argument("--alpha", type=_range, required=True)
    p.add_argument("--k", type=_range, required=True)

    p = sub.add_parser("search", help="exhaustive obstruction-divisor search")
    p.add_argument("--model", choices=("rho1", "profiles"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--min-elliptic-degree", type=_elliptic, default=None)
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--cap", type=int, default=None, help="explicit a_max (rho1) or s_max (profiles)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--include-pruned", action="store_true")
    p.add_argument("--csv", default=None, help="write survivors to this CSV file")

    p = sub.add_parser("pell", help="fundamental solution of l^2 - D k^2 = 1")
    p.add_argument("--D", type=int, required=True)

    p = sub.add_parser("seshadri", help="a Seshadri constant lower bound")
    p.add_argument("--bound", choices=("pell", "kuchle", "bauer-szemberg", "szemberg-floor"), required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--L2", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--eps1", type=_rational)
    p.add_argument("--eps0", type=_elliptic)
    return parser


def cmd_certify(args: argparse.Namespace) -> int:
    surface = _surface(args, _degree(args))
    cert = certify(surface, BundleQuery(args.c, args.alpha, args.k, args.r))
    out = dumps(certificate_to_json(cert)) if args.format == "json" else render_text(cert)
    sys.stdout.write(out)
    return cert.exit_code


def table_cell(surface: SurfaceSpec, c: int, alpha: int, k: int) -> str:
    """Largest r certified by any gate, ``-`` if none, ``refuted`` if alpha < k."""
    if alpha < k:
        return "refuted"
    best = None
    # every gate bounds r by at most L^2
    for r in range(1, surface.L2 + 1):
        if certify(surface, BundleQuery(c, alpha, k, r)).verdict is Verdict.CERTIFIED:
            best = r
    return "-" if best is None else str(best)


def cmd_table(args: argparse.Namespace) -> int:
    degrees = args.d if args.surface == "abelian" else args.L2
    if degrees is None:
        raise UsageError("--d (abelian) or --L2 (ktrivial) range is required")
    for name, rng in (("degree", degrees), ("c", args.c), ("alpha", args.alpha), ("k", args.k)):
        if len(rng) == 0:
            raise UsageError(f"empty range for {name}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d" if args.surface == "abelian" else "L2", "c", "alpha"] + [f"k={k}" for k in args.k])
    for degree in degrees:
        surface = _surface(args, degree)
        for c in args.c:
            for alpha in args.alpha:
                writer.writerow([degree, c, alpha] + [table_cell(surface, c, alpha, k) for k in args.k])
    sys.stdout.write(buf.getvalue())
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    workers = default_workers() if args.workers is None else args.workers
    if args.model == "rho1":
        report = search_rho1(args.d, args.c, args.alpha, args.k, args.r, a_max=args.cap,
                             mode=args.mode, workers=workers)
    else:
        if args.c != 1:
            raise UsageError("the profile search handles c = 1 only")
        if args.min_elliptic_degree is None:
            raise UsageError("--min-elliptic-degree is required for the profile search")
        report = search_profiles(args.d, args.alpha, args.k, args.r, args.min_elliptic_degree,
                                 s_max=args.cap, mode=args.mode, workers=workers)
    sys.stdout.write(report.dumps(include_pruned=args.include_pruned))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.survivors_csv())
    return 0


def cmd_pell(args: argparse.Namespace) -> int:
    sol = pell_primitive(args.D)
    sys.stdout.write(dumps({"D": str(sol.D), "k0": str(sol.k0), "l0": str(sol.l0)}))
    return 0


def cmd_seshadri(args: argparse.Namespace) -> int:
    def need(name: str):
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"--{name} is required for --bound {args.bound}")
        return value

    if args.bound == "pell":
        b = bound_pell_rho1(need("d"), need("r"))
    elif args.bound == "kuchle":
        b = bound_kuchle(need("L2"), need("r"), need("eps1"))
    elif args.bound == "bauer-szemberg":
        b = bound_bauer_szemberg(need("d"), need("eps0"))
    else:
        b = bound_szemberg_floor(need("L2"), need("r"))
    out = {"assumptions": list(b.assumptions), "provenance": b.provenance,
           "text": str(b.value), "value": encode_exact(b.value)}
    if b.relaxed is not None:
        out["relaxed"] = encode_exact(b.relaxed)
        out["relaxed_text"] = str(b.relaxed)
    if b.pell is not None:
        out["pell"] = {"D": str(b.pell.D), "k0": str(b.pell.k0), "l0": str(b.pell.l0)}
    sys.stdout.write(dumps(out))
    return 0


COMMANDS = {"certify": cmd_certify, "table": cmd_table, "search": cmd_search,
            "pell": cmd_pell, "seshadri": cmd_seshadri}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapError as exc:
        sys.stderr.write(f"kvacert: {exc}\n")
        return EXIT_CAP
    except (UsageError, KvacertError) as exc:
        sys.stderr.write(f"kvacert: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

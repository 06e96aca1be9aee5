"""Command-line front end.

Subcommands: `certify` (run all stability certificates and Gramian bounds),
`sweep` (family parameter sweep to CSV), `apply` (run the order-j analysis
operator on a signal), and `profile` (grid profiles behind the certificates,
as CSV).

Output is deterministic: floats are printed with 17 significant digits and
booleans as 0/1 in CSV, so identical invocations are byte-identical.  All
computation is serial; the FBSTAB_THREADS environment variable, meant to cap
parallelism, is therefore honored trivially.

Exit codes: 0 all requested certificates pass, 2 a certificate failed,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .filters import (
    FactoredLowpass,
    FilterPair,
    assemble,
    burt_adelson,
    factor,
    higher_order,
    orthogonal_highpass,
)
from .iterate import analyze, contraction_certificate
from .seqcore import FiniteSeq, Grid, delta
from .stability import (
    TOL_EXPAND_DEFAULT,
    TOL_SPAN_DEFAULT,
    bessel_certificate,
    expand_certificate,
    gramian_bounds,
    mstar_m_eigenfunctions,
    sine_product_values,
    span_certificate,
    std_expand_profile,
)

FAMILIES = ("burt-adelson", "higher-order")


def _fmt(x) -> str:
    """Deterministic scalar formatting: bools as 0/1, floats at 17 digits."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _json_dumps(obj, level: int = 0) -> str:
    """JSON with the same fixed float formatting as the CSV output."""
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(k)}: {_json_dumps(v, level + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_json_dumps(v, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if obj is None:
        return "null"
    return json.dumps(obj)


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _family_filter(family: str, a: float) -> tuple[FiniteSeq, FactoredLowpass]:
    if family == "burt-adelson":
        h = burt_adelson(a)
        return h, factor(h)
    if family == "higher-order":
        # the a = 0 boundary member (p = delta) is a valid low-pass filter
        # and is needed by sweeps starting at 0
        f = FactoredLowpass(3, delta()) if a == 0.0 else higher_order(a)
        return assemble(f), f
    raise ValueError(f"unknown family {family!r}")


def _load_lowpass(args) -> tuple[FiniteSeq, FactoredLowpass]:
    """Resolve --family/--a or --filter into (raw filter, factored form)."""
    if args.filter_file is not None:
        if args.family is not None or args.a is not None:
            raise ValueError("--filter excludes --family/--a")
        h = FiniteSeq.from_json_obj(_read_json(args.filter_file))
        return h, factor(h)
    if args.family is None:
        raise ValueError("one of --family or --filter is required")
    if args.a is None:
        raise ValueError("--family requires --a")
    return _family_filter(args.family, args.a)


def _load_pair(args, h: FiniteSeq) -> FilterPair:
    if args.highpass == "orthogonal":
        return FilterPair(h, orthogonal_highpass(h))
    return FilterPair(h, FiniteSeq.from_json_obj(_read_json(args.highpass)))


def cmd_certify(args) -> int:
    h, f = _load_lowpass(args)
    pair = _load_pair(args, h)
    grid = Grid(args.grid)
    bessel = [bessel_certificate(f, s, grid) for s in range(1, args.s_max + 1)]
    expand = expand_certificate(pair, grid, args.tol_expand)
    span = span_certificate(pair, grid, args.tol_span)
    lo, hi = h.support
    contraction = contraction_certificate(h, max(abs(lo), abs(hi)))
    gramian = [gramian_bounds(pair, j, grid) for j in range(1, args.order + 1)]
    # overall verdict: a Bessel bound at some product length, plus the
    # expanding and span conditions; the contraction certificate is a
    # separate sufficient condition whose sign hypothesis often fails for
    # perfectly stable banks, so it is reported but not aggregated
    ok = any(c.verdict for c in bessel) and expand.verdict and span.verdict
    report = {
        "filter": h.to_json_obj(),
        "highpass": pair.g.to_json_obj(),
        "bessel": [c.to_json_obj() for c in bessel],
        "expand": expand.to_json_obj(),
        "span": span.to_json_obj(),
        "contraction": contraction.to_json_obj(),
        "gramian": [r.to_json_obj() for r in gramian],
        "pass": ok,
    }
    _write_out(_json_dumps(report), args.out)
    return 0 if ok else 2


SWEEP_HEADER = ("a", "bessel_s1", "bessel_s2", "expand_min", "expand_ok",
                "gramian_lower_j4", "gramian_upper_j4")


def cmd_sweep(args) -> int:
    if not args.a_min < args.a_max:
        raise ValueError(f"need a-min < a-max, got {args.a_min} >= {args.a_max}")
    if args.steps < 2:
        raise ValueError(f"need at least 2 steps, got {args.steps}")
    grid = Grid(args.grid)
    lines = [",".join(SWEEP_HEADER)]
    for a in np.linspace(args.a_min, args.a_max, args.steps):
        h, f = _family_filter(args.family, float(a))
        pair = FilterPair(h, orthogonal_highpass(h))
        b1 = bessel_certificate(f, 1, grid).verdict
        b2 = bessel_certificate(f, 2, grid).verdict
        expand_min = float(np.min(std_expand_profile(h, grid)))
        expand_ok = expand_min >= 2.0 - args.tol_expand
        g4 = gramian_bounds(pair, 4, grid)
        row = (float(a), b1, b2, expand_min, expand_ok, g4.lower, g4.upper)
        lines.append(",".join(_fmt(v) for v in row))
    _write_out("\n".join(lines), args.out)
    return 0


def cmd_apply(args) -> int:
    h, _ = _load_lowpass(args)
    pair = _load_pair(args, h)
    x = FiniteSeq.from_json_obj(_read_json(args.signal))
    out = analyze(pair, x, args.order)
    _write_out(_json_dumps(out.to_json_obj()), args.out)
    return 0


def cmd_profile(args) -> int:
    grid = Grid(args.grid)
    if args.which == "sine-product":
        _, mod, bound = sine_product_values(args.order, grid)
        header = "xi,product,bound"
        cols = (grid.points, mod, bound)
    else:
        h, _ = _load_lowpass(args)
        if args.which == "std-expand":
            header = "xi,std_expand"
            cols = (grid.points, std_expand_profile(h, grid))
        else:  # eigenfunctions
            pair = _load_pair(args, h)
            lam_min, lam_max = mstar_m_eigenfunctions(pair, grid)
            header = "xi,lambda_min,lambda_max"
            cols = (grid.points, lam_min, lam_max)
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    _write_out("\n".join(lines), args.out)
    return 0


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES,
                   help="built-in filter family")
    p.add_argument("--a", type=float, help="family parameter")
    p.add_argument("--filter", dest="filter_file",
                   help="low-pass filter JSON file (excludes --family/--a)")
    p.add_argument("--highpass", default="orthogonal",
                   help="'orthogonal' or a high-pass filter JSON file")
    p.add_argument("--grid", type=int, default=8192,
                   help="evaluation grid size (default 8192)")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbstab",
        description="Stability certificates and frame bounds for iterated "
                    "dyadic two-channel filter banks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run all stability certificates")
    _add_source_args(p)
    p.add_argument("--order", type=int, default=4,
                   help="max Gramian iteration order (default 4)")
    p.add_argument("--s-max", type=int, default=3,
                   help="max Bessel product length (default 3)")
    p.add_argument("--tol-expand", type=float, default=TOL_EXPAND_DEFAULT)
    p.add_argument("--tol-span", type=float, default=TOL_SPAN_DEFAULT)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="family parameter sweep to CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--a-min", type=float, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--tol-expand", type=float, default=TOL_EXPAND_DEFAULT)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("apply", help="apply the order-j analysis operator")
    _add_source_args(p)
    p.add_argument("--signal", required=True, help="signal JSON file")
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("profile", help="grid profiles as CSV")
    _add_source_args(p)
    p.add_argument("--which", required=True,
                   choices=("std-expand", "eigenfunctions", "sine-product"))
    p.add_argument("--order", type=int, default=4,
                   help="product length for sine-product (default 4)")
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap to 1
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

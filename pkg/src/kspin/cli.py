"""Deterministic verification reports from the command line.

Four subcommands: ``verify-identities`` runs the exact identity suites on
seeded random fields, ``twistor-kernel`` compares kernel and parallel-section
dimensions, ``bounds`` tabulates the eigenvalue-bound arithmetic over a
parameter grid, and ``sphere`` runs the cross-validated round-sphere model.
Reports render as a fixed-width table or canonical JSON; identical configs
give byte-identical JSON.  Exit codes: 0 pass, 1 check failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from . import sampling
from .bounds import (
    BoundQuery,
    classification_report,
    dim_bound,
    ke_admissible_r,
    ke_eigenvalue,
    middle_eigenvalue,
)
from .fiber import RicciModel, build_fiber, contraction_suite
from .report import check, render_value
from .sphere import dirac_spectrum, eq44_check, killing_spinor_space
from .torus import build_torus, commutator_suite, operator_identity_suite
from .twistor import (
    TwistorParams,
    build_connection,
    parallel_sections,
    twistor_identity_suite,
    twistor_kernel,
    weitzenboeck_check,
)

_CONNECTION_TAGS = {"full": "3.19", "reduced": "4.5"}


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=2,
                        help="complex dimension (bounds: grid upper limit)")
    common.add_argument("--r", type=int, default=1, help="spinor type")
    common.add_argument("--band", type=int, default=1,
                        help="Fourier band limit for torus fields")
    common.add_argument("--order", type=int, default=16,
                        help="sphere truncation order L")
    common.add_argument("--scalar-curvature", type=_parse_rational,
                        default=Fraction(2), metavar="S",
                        help="scalar curvature for curvature-dependent rows")
    common.add_argument("--seed", type=int, default=7,
                        help="seed for the random field generator")
    common.add_argument("--mode", choices=("exact", "float"), default="exact",
                        help="arithmetic for the torus/twistor sweeps")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="residual tolerance for float-mode kernels")
    common.add_argument("--format", choices=("table", "json"), default="table",
                        dest="fmt", help="report rendering")
    common.add_argument("--out", default=None, help="write the report here")

    parser = argparse.ArgumentParser(
        prog="kspin", description="spin-geometry verification reports")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("verify-identities", parents=[common],
                       help="run the exact operator-identity suites")
    p.add_argument("--connection", action="store_true",
                   help="also check parallel-section ranks of the "
                        "twistor connections (needs 0 < r < m, r != m/2)")
    sub.add_parser("twistor-kernel", parents=[common],
                   help="kernel vs. parallel-section dimensions")
    sub.add_parser("bounds", parents=[common],
                   help="eigenvalue bound table over a parameter grid")
    sub.add_parser("sphere", parents=[common],
                   help="round-sphere spectrum, Killing space, curvature identity")
    return parser


# -- subcommand runners --------------------------------------------------------

def _run_verify(args) -> List[dict]:
    if not 0 <= args.r <= args.m:
        raise ValueError(f"type r={args.r} outside 0..{args.m}")
    rng = random.Random(args.seed)
    tor = build_torus(args.m, capacity=args.band + 3, mode=args.mode)
    phi = sampling.spinor_field(tor, rng, band=args.band, nmodes=3)
    psi = sampling.spinor_field(tor, rng, band=args.band, nmodes=3)
    graded = sampling.spinor_field(tor, rng, band=args.band, nmodes=3,
                                   grade=args.r)
    X = sampling.vector_field(tor, rng, band=1)

    records = []
    records += operator_identity_suite(phi, psi)
    records += commutator_suite(X, phi)
    records += twistor_identity_suite(graded, args.r)
    records += weitzenboeck_check(graded, args.r)
    ric = RicciModel.einstein(build_fiber(args.m, args.mode),
                              args.scalar_curvature)
    records += contraction_suite(ric, args.r)

    if args.connection:
        params = TwistorParams(args.m, args.r)  # flat data: torus curvature
        params.require_connection_range()
        expected = math.comb(args.m, args.r)
        for variant, tag in _CONNECTION_TAGS.items():
            rep = parallel_sections(build_connection(params, variant),
                                    args.band, arithmetic=args.mode,
                                    tol=args.tol)
            records.append(check(
                f"cli.connection.{variant}", tag,
                rep.total_dim == expected and rep.all_parallel,
                mode=args.mode, residual=0,
                parallel_dim=rep.total_dim, expected=expected))
    return records


def _run_twistor_kernel(args) -> List[dict]:
    m, r = args.m, args.r
    kernel = twistor_kernel(m, r, args.band, arithmetic=args.mode,
                            tol=args.tol)
    expected = math.comb(m, r)
    records = [
        check("cli.kernel.dimension", None, kernel.total_dim == expected,
              mode=args.mode, residual=0, total_dim=kernel.total_dim,
              expected=expected),
        check("cli.kernel.constants_only", None, kernel.all_parallel,
              mode=args.mode, residual=0,
              nonzero_modes=len(kernel.nullities)),
        check("cli.kernel.rank_cap", None,
              kernel.total_dim <= dim_bound(m, r), mode=args.mode,
              residual=0, cap=dim_bound(m, r)),
    ]
    if 0 < r < m and 2 * r != m:
        params = TwistorParams(m, r)
        for variant, tag in _CONNECTION_TAGS.items():
            rep = parallel_sections(build_connection(params, variant),
                                    args.band, arithmetic=args.mode,
                                    tol=args.tol)
            records.append(check(
                f"cli.parallel_match.{variant}", tag,
                rep.total_dim == kernel.total_dim, mode=args.mode,
                residual=0, parallel_dim=rep.total_dim,
                kernel_dim=kernel.total_dim))
    else:
        note = ("middle dimension: parallel only" if 2 * r == m and 0 < r < m
                else "end type: no connection to compare")
        records.append(check(
            "cli.parallel_match.skipped", None, True, mode=args.mode,
            residual=0, note=note, kernel_dim=kernel.total_dim))
    return records


def _run_bounds(args) -> List[dict]:
    S = args.scalar_curvature
    if S <= 0:
        raise ValueError(f"the bound table needs scalar curvature > 0, got {S}")
    records = []
    for m in range(1, args.m + 1):
        fried, ftag = BoundQuery("friedrich", S, m=m).evaluate()
        records.append(check(f"cli.bounds.friedrich.m{m:02d}", ftag,
                             fried > 0, value=fried))
        variant = "kirchberg-odd" if m % 2 else "kirchberg-even"
        kirch, ktag = BoundQuery(variant, S, m=m).evaluate()
        records.append(check(f"cli.bounds.kirchberg.m{m:02d}", ktag,
                             kirch >= fried, value=kirch, friedrich=fried))
        top = (m - 1) // 2
        for r in range(0, top + 1):
            sig, stag = BoundQuery("sigma-r", S, m=m, r=r).evaluate()
            ok = sig >= kirch and (sig == kirch) == (r == top)
            records.append(check(f"cli.bounds.sigma.m{m:02d}.r{r}", stag, ok,
                                 value=sig, saturates=(r == top)))
        if m % 2 == 0:
            value, verdict = middle_eigenvalue(m, S)
            records.append(check(f"cli.bounds.middle.m{m:02d}", None,
                                 value < kirch, value=value, verdict=verdict))
        for r in sorted(ke_admissible_r(m)):
            records.append(check(f"cli.bounds.einstein.m{m:02d}.r{r}", "5.7",
                                 True, value=ke_eigenvalue(m, r, S)))
        for r in range(1, (m + 1) // 2):
            if 2 * r < m:
                rep = classification_report(m, r, "anti-holomorphic")
                records.append(check(f"cli.bounds.classification.m{m:02d}.r{r}",
                                     rep["eq_tag"], True, report=rep))
    return records


def _run_sphere(args) -> List[dict]:
    records = list(dirac_spectrum(args.order).checks)
    records += killing_spinor_space(args.order).checks
    records += eq44_check(args.order)
    return records


_RUNNERS = {
    "verify-identities": _run_verify,
    "twistor-kernel": _run_twistor_kernel,
    "bounds": _run_bounds,
    "sphere": _run_sphere,
}


# -- rendering -----------------------------------------------------------------

def _config_echo(args) -> dict:
    return {
        "subcommand": args.subcommand,
        "m": args.m,
        "r": args.r,
        "band": args.band,
        "order": args.order,
        "scalar_curvature": args.scalar_curvature,
        "seed": args.seed,
        "mode": args.mode,
        "tol": args.tol,
        "format": args.fmt,
    }


def _envelope(args, records: List[dict]) -> dict:
    ordered = sorted(records, key=lambda c: c["id"])
    verdict = "pass" if all(c["status"] == "pass" for c in ordered) else "fail"
    return {
        "tool": f"kspin {__version__}",
        "config": _config_echo(args),
        "checks": ordered,
        "verdict": verdict,
    }


def _residual_text(record: dict) -> str:
    if record["mode"] == "exact":
        return "exact"
    res = record["residual"]
    return f"{float(res):.3e}"


def _render_table(env: dict) -> str:
    cfg = env["config"]
    lines = [env["tool"] + "  " + cfg["subcommand"],
             "config: " + "  ".join(f"{k}={render_value(v)}"
                                    for k, v in cfg.items()
                                    if k != "subcommand"),
             ""]
    header = f"{'check':<44} {'tag':<6} {'mode':<6} {'status':<6} residual"
    lines.append(header)
    lines.append("-" * len(header))
    for rec in env["checks"]:
        tag = rec["eq_tag"] or "-"
        lines.append(f"{rec['id']:<44} {tag:<6} {rec['mode']:<6} "
                     f"{rec['status']:<6} {_residual_text(rec)}")
    n = len(env["checks"])
    failed = sum(1 for c in env["checks"] if c["status"] != "pass")
    lines.append("-" * len(header))
    tail = f"verdict: {env['verdict']} ({n} checks"
    tail += f", {failed} failed)" if failed else ")"
    lines.append(tail)
    return "\n".join(lines) + "\n"


def _render_json(env: dict) -> str:
    return json.dumps(render_value(env), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.tol <= 0:
        print(f"config error: tolerance must be positive, got {args.tol}",
              file=sys.stderr)
        return 2
    try:
        records = _RUNNERS[args.subcommand](args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    env = _envelope(args, records)
    text = _render_json(env) if args.fmt == "json" else _render_table(env)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if env["verdict"] == "pass" else 1


if __name__ == "__main__":
    raise SystemExit(main())

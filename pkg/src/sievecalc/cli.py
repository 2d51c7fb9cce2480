"""Command-line interface.

Subcommands:
  function   evaluate or tabulate F, f, omega, H, h
  term       evaluate one per-term constant (JSON)
  theorem    evaluate a full family and assemble the final constant (JSON)
  empirical  brute-force counts and singular-series products (JSON)
  report     classified reproduction report (JSON + CSV + figures)

Exit codes: 0 success, 2 numerical/tolerance failure, 3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .empirical import count_D12, count_pi12, singular_series
from .functions import DomainError, build_function_table, load_step_tables
from .levels import ConfigError
from .quadrature import QuadratureError
from .report import (
    emit_report,
    render_figures,
    report_to_json,
    write_function_csv,
)
from .runner import (
    PUBLISHED_G,
    RunConfig,
    run_terms,
    term_ids_for,
    thread_count,
)
from .terms.base import (
    ASSEMBLY_WEIGHTS_GOLDBACH,
    ASSEMBLY_WEIGHTS_TWIN,
    assemble,
    shared_tables,
)

_WEIGHTS = {"goldbach": ASSEMBLY_WEIGHTS_GOLDBACH, "twin": ASSEMBLY_WEIGHTS_TWIN}

# Final constants of the two assemblies, used only to scale the empirical
# count ratios printed for information.
_FINAL_GOLDBACH = 1.9728
_FINAL_TWIN = 1.2759


def _float_or_free(text: str):
    if text == "free":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a float or 'free', got {text!r}")


def _add_run_options(p: argparse.ArgumentParser):
    p.add_argument("--levels", default="bundled",
                   help="level source: bundled | cap | baseline | "
                        "constant:<v> | path to a regions file")
    p.add_argument("--pin-k", type=_float_or_free, default=12.3,
                   metavar="K|free",
                   help="fixed sifting parameter, or 'free' to optimize "
                        "per term (default 12.3)")
    p.add_argument("--pin-G1", type=_float_or_free,
                   default=PUBLISHED_G["G1"], metavar="V|free",
                   help="switched-set constant for the even-target family "
                        "(default: published value; 'free' recomputes it)")
    p.add_argument("--pin-G2", type=_float_or_free,
                   default=PUBLISHED_G["G2"], metavar="V|free",
                   help="switched-set constant for the twin family "
                        "(default: published value; 'free' recomputes it)")
    p.add_argument("--tol", type=float, default=1e-7,
                   help="absolute tolerance for 1D/2D integrals; higher "
                        "dimensions scale proportionally (default 1e-7)")


def _config(args, family: str) -> RunConfig:
    return RunConfig(family=family, levels=args.levels, pinned_k=args.pin_k,
                     pin_G1=args.pin_G1, pin_G2=args.pin_G2, tol=args.tol)


def _family_of_term(term_id: str) -> str:
    return "twin" if term_id.startswith(("S'", "G2")) else "goldbach"


def _result_dict(r) -> dict:
    return {
        "id": r.id,
        "value": r.value,
        "direction": r.direction,
        "class": r.provenance,
        "est_abs_error": r.est_abs_error,
        "chosen_k": r.chosen_k,
        "clamp_events": r.clamp_events,
        "oob_events": r.oob_events,
        "levels": r.provider_source,
    }


def _emit_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# Subcommand handlers.
# ---------------------------------------------------------------------------


def cmd_function(args) -> int:
    if args.kind in ("H", "h"):
        table = load_step_tables()[args.kind]
    else:
        table = build_function_table(args.kind, s_max=args.s_max,
                                     grid_step=args.grid_step)
    if args.at is not None:
        val, flag = table.eval_with_flags(args.at)
        _emit_json({"kind": args.kind, "at": args.at, "value": float(val),
                    "flagged": int(flag)})
        return 0
    if args.out is None:
        raise ConfigError("function needs --at or --out")
    lo = args.lo if args.lo is not None else \
        (table.s_lo if args.kind in ("H", "h") else table.grid_start)
    hi = args.hi if args.hi is not None else \
        (table.s_hi if args.kind in ("H", "h") else table.s_max)
    write_function_csv(args.out, table, lo, hi, args.step)
    print(f"wrote {args.out}")
    return 0


def cmd_term(args) -> int:
    family = _family_of_term(args.id)
    cfg = _config(args, family)
    results = run_terms(cfg, term_ids=[args.id])
    _emit_json(_result_dict(results[args.id]))
    return 0


def cmd_theorem(args) -> int:
    cfg = _config(args, args.family)
    results = run_terms(cfg)
    weights = _WEIGHTS[args.family]
    asm = assemble({t: results[t] for t in weights}, weights)
    _emit_json({
        "family": args.family,
        "terms": [_result_dict(results[t]) for t in term_ids_for(args.family)],
        "assembly": {
            "pre_division": asm.pre_division,
            "value": asm.value,
            "est_abs_error": asm.est_abs_error,
        },
    })
    return 0


def cmd_empirical(args) -> int:
    if args.mode == "d12":
        if args.N is None:
            raise ConfigError("d12 requires --N")
        count = count_D12(args.N)
        c_of_n = singular_series("C_of_N", min(args.N, 10**6), N=args.N)
        scale = c_of_n * args.N / math.log(args.N) ** 2
        _emit_json({"mode": "d12", "N": args.N, "count": count,
                    "reference_scale": _FINAL_GOLDBACH * scale,
                    "ratio": count / (_FINAL_GOLDBACH * scale)})
    elif args.mode == "pi12":
        if args.x is None:
            raise ConfigError("pi12 requires --x")
        count = count_pi12(args.x)
        c2 = singular_series("C2", min(max(args.x, 3), 10**6))
        scale = c2 * args.x / math.log(args.x) ** 2 if args.x > 1 else 0.0
        _emit_json({"mode": "pi12", "x": args.x, "count": count,
                    "reference_scale": _FINAL_TWIN * scale,
                    "ratio": count / (_FINAL_TWIN * scale) if scale else None})
    elif args.mode == "c2":
        _emit_json({"mode": "c2", "P": args.P,
                    "value": singular_series("C2", args.P)})
    else:  # cN
        if args.N is None:
            raise ConfigError("cN requires --N")
        _emit_json({"mode": "cN", "N": args.N, "P": args.P,
                    "value": singular_series("C_of_N", args.P, N=args.N)})
    return 0


def cmd_report(args) -> int:
    families = ("goldbach", "twin") if args.family == "both" else (args.family,)
    os.makedirs(args.out, exist_ok=True)

    results = {}
    for fam in families:
        cfg = _config(args, fam)
        results[fam] = run_terms(cfg)

    env = {
        "version": __version__,
        "levels": args.levels,
        "pinned_k": args.pin_k,
        "pin_G1": args.pin_G1,
        "pin_G2": args.pin_G2,
        "tol": args.tol,
        "threads": thread_count(),
    }
    empirical = {}
    if args.empirical_scale:
        n = args.empirical_scale
        c_of_n = singular_series("C_of_N", min(n, 10**6), N=n)
        empirical["d12_ratio"] = (
            count_D12(n) * math.log(n) ** 2 / (c_of_n * n))
        c2 = singular_series("C2", min(n, 10**6))
        empirical["pi12_ratio"] = (
            count_pi12(n) * math.log(n) ** 2 / (c2 * n))

    rep = emit_report(goldbach_results=results.get("goldbach"),
                      twin_results=results.get("twin"),
                      g_pinned=(args.pin_G1 is not None
                                and args.pin_G2 is not None),
                      environment=env, empirical=empirical)

    json_path = os.path.join(args.out, "report.json")
    with open(json_path, "w") as fh:
        fh.write(report_to_json(rep))

    csv_path = os.path.join(args.out, "entries.csv")
    with open(csv_path, "w") as fh:
        fh.write("id,computed,paper_value,abs_diff,class,verdict\n")
        for e in rep.entries:
            paper = "" if e.paper_value is None else f"{e.paper_value:.6f}"
            diff = "" if e.abs_diff is None else f"{e.abs_diff:.6e}"
            fh.write(f"{e.id},{e.computed:.6f},{paper},{diff},"
                     f"{e.klass},{e.verdict}\n")

    tables, _ = shared_tables()
    for kind in ("F", "f", "omega"):
        write_function_csv(os.path.join(args.out, f"{kind}.csv"),
                           tables[kind], tables[kind].grid_start,
                           tables[kind].s_max, 0.01)
    figures = render_figures(args.out, tables, rep)

    for e in rep.entries:
        paper = "" if e.paper_value is None else f"{e.paper_value:.6f}"
        print(f"{e.id}\t{e.computed:.6f}\t{paper}\t{e.verdict}")
    for fam, block in rep.assembly.items():
        print(f"assembly:{fam}\t{block['value']:.6f}"
              f"\t{block['printed_value']:.6f}\t{block['verdict']}")
    print(f"wrote {json_path}, {csv_path}, "
          + ", ".join(os.path.basename(p) for p in figures))
    return 0


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sievecalc",
        description="Weighted-sieve bound constants: per-term integrals, "
                    "final assemblies, and reproduction reports.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("function", help="evaluate or tabulate a sieve function")
    p.add_argument("kind", choices=("F", "f", "omega", "H", "h"))
    p.add_argument("--at", type=float, help="single evaluation point")
    p.add_argument("--out", help="write a sampled table to this CSV file")
    p.add_argument("--from", dest="lo", type=float,
                   help="table start (default: domain start)")
    p.add_argument("--to", dest="hi", type=float,
                   help="table end (default: domain end)")
    p.add_argument("--step", type=float, default=0.01, help="table spacing")
    p.add_argument("--s-max", type=float, default=40.0)
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.set_defaults(handler=cmd_function)

    p = sub.add_parser("term", help="evaluate one per-term constant")
    p.add_argument("id", help="term identifier, e.g. S6 or S'14 or G1")
    _add_run_options(p)
    p.set_defaults(handler=cmd_term)

    p = sub.add_parser("theorem",
                       help="evaluate a full family and assemble the constant")
    p.add_argument("family", choices=("goldbach", "twin"))
    _add_run_options(p)
    p.set_defaults(handler=cmd_theorem)

    p = sub.add_parser("empirical", help="desk-scale counts and products")
    p.add_argument("mode", choices=("d12", "pi12", "c2", "cN"))
    p.add_argument("--N", type=int, help="even target (d12, cN)")
    p.add_argument("--x", type=int, help="upper limit (pi12)")
    p.add_argument("--P", type=int, default=10**6,
                   help="prime cutoff of the truncated product")
    p.set_defaults(handler=cmd_empirical)

    p = sub.add_parser("report",
                       help="full reproduction report with figures")
    p.add_argument("--family", choices=("goldbach", "twin", "both"),
                   default="both")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--empirical-scale", type=int, default=0,
                   help="if > 0, include desk-scale count ratios at this N")
    _add_run_options(p)
    p.set_defaults(handler=cmd_report)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

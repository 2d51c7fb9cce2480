"""Reproduction report: classify every computed constant against the
published value, with deterministic JSON/CSV output and summary figures.

Verdicts:
  REPRODUCED     exact-route constants (level-independent, or G-scaled with
                 the constant pinned) matching within the term tolerance;
  CONDITIONAL    constants that depend on the externally published level
                 functions; the diff is reported, not asserted;
  DISCREPANT     an exact-route constant outside its tolerance;
  INFORMATIONAL  encoded-zero terms and empirical sanity ratios.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .terms.base import (
    ASSEMBLY_WEIGHTS_GOLDBACH,
    ASSEMBLY_WEIGHTS_TWIN,
    BoundResult,
    assemble,
)

__all__ = [
    "ReportEntry",
    "ReproductionReport",
    "emit_report",
    "load_reference",
    "render_figures",
    "report_to_json",
    "write_function_csv",
]

TERM_TOL_FREE = 1e-4
TERM_TOL_G = 1e-3
ASSEMBLY_TOL = 5e-5

_ZERO_ENCODED = {"S'8", "S'11"}


@dataclass(frozen=True)
class ReportEntry:
    id: str
    computed: float
    paper_value: float | None
    abs_diff: float | None
    klass: str
    verdict: str


@dataclass
class ReproductionReport:
    schema: int = 1
    entries: list = field(default_factory=list)
    assembly: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)
    empirical: dict = field(default_factory=dict)


def load_reference() -> dict:
    """Published per-term constants and assembly targets, keyed by family."""
    text = resources.files("sievecalc.data").joinpath(
        "reference_values.json").read_text()
    return json.loads(text)


def _verdict(result: BoundResult, paper_value, g_pinned: bool) -> str:
    if result.id in _ZERO_ENCODED:
        return "INFORMATIONAL"
    if paper_value is None:
        return "CONDITIONAL"
    diff = abs(result.value - paper_value)
    if result.provenance == "theta_free":
        return "REPRODUCED" if diff <= TERM_TOL_FREE else "DISCREPANT"
    if result.provenance == "G_conditional":
        if not g_pinned:
            return "CONDITIONAL"
        return "REPRODUCED" if diff <= TERM_TOL_G else "DISCREPANT"
    return "CONDITIONAL"


def _entries_for(results: dict, family: str, ref: dict,
                 g_pinned: bool) -> list:
    out = []
    for tid in sorted(results, key=_term_sort_key):
        if tid in ("G1", "G2"):
            continue
        r = results[tid]
        paper = ref[family].get(tid, {}).get("value")
        diff = None if paper is None else abs(r.value - paper)
        out.append(ReportEntry(
            id=tid, computed=r.value, paper_value=paper, abs_diff=diff,
            klass=r.provenance, verdict=_verdict(r, paper, g_pinned)))
    return out


def _term_sort_key(tid: str):
    return (tid.startswith("G"), int("".join(ch for ch in tid if ch.isdigit())))


def _assembly_block(results: dict, weights: dict, ref: dict, family: str):
    res = assemble(results, weights)
    printed_pre = ref[family]["assembly_pre_division"]
    printed_final = ref[family]["assembly_final"]
    return {
        "pre_division": res.pre_division,
        "value": res.value,
        "printed_pre_division": printed_pre,
        "printed_value": printed_final,
        "abs_diff": abs(res.value - printed_final),
        "est_abs_error": res.est_abs_error,
        "verdict": "CONDITIONAL",
    }


def emit_report(goldbach_results: dict | None = None,
                twin_results: dict | None = None,
                g_pinned: bool = True,
                environment: dict | None = None,
                empirical: dict | None = None) -> ReproductionReport:
    """Fold per-term results into the classified reproduction report.

    Requires at least one family of results.  Term entries cover exactly the
    S-terms; the switched-set constants are echoed in the environment by the
    caller when pinned.
    """
    if not goldbach_results and not twin_results:
        raise ValueError("emit_report requires at least one evaluated theorem")
    ref = load_reference()
    rep = ReproductionReport(environment=dict(environment or {}),
                             empirical=dict(empirical or {}))
    if goldbach_results:
        rep.entries += _entries_for(goldbach_results, "goldbach", ref,
                                    g_pinned)
        rep.assembly["goldbach"] = _assembly_block(
            goldbach_results, ASSEMBLY_WEIGHTS_GOLDBACH, ref, "goldbach")
    if twin_results:
        rep.entries += _entries_for(twin_results, "twin", ref, g_pinned)
        rep.assembly["twin"] = _assembly_block(
            twin_results, ASSEMBLY_WEIGHTS_TWIN, ref, "twin")
    for key, val in rep.empirical.items():
        rep.empirical[key] = {"value": val, "verdict": "INFORMATIONAL"}
    return rep


def report_to_json(rep: ReproductionReport) -> str:
    """Deterministic JSON (sorted keys, no timestamps)."""
    payload = {
        "schema": rep.schema,
        "entries": [vars(e) | {} for e in rep.entries],
        "assembly": rep.assembly,
        "environment": rep.environment,
        "empirical": rep.empirical,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_function_csv(path, table, lo: float, hi: float, step: float):
    """Sample a sieve-function table on [lo, hi] to CSV (s, value, clamp)."""
    n = int(round((hi - lo) / step))
    ss = lo + step * np.arange(n + 1)
    rows = ["s,value,clamp_flag"]
    for s in ss:
        val, clamped = table.eval_with_flags(float(s))
        rows.append(f"{float(s):.10g},{float(val):.12g},{int(clamped > 0)}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def render_figures(outdir, tables, rep: ReproductionReport) -> list:
    """Write the summary figures next to the report; returns the paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import os

    paths = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ss = np.linspace(1.0, 10.0, 901)
    for kind, style in (("F", "-"), ("f", "--")):
        vals = [float(tables[kind](max(s, 2.0 if kind == "f" else s)))
                for s in ss]
        ax.plot(ss, vals, style, label=kind)
    uu = np.linspace(1.0, 10.0, 901)
    ax.plot(uu, [float(tables["omega"](u)) for u in uu], ":", label="omega")
    ax.axhline(1.0, color="grey", lw=0.5)
    ax.set_xlabel("s")
    ax.set_ylabel("value")
    ax.legend()
    ax.set_title("sieve density functions")
    p = os.path.join(outdir, "functions.png")
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)

    with_paper = [e for e in rep.entries if e.paper_value is not None]
    if with_paper:
        fig, ax = plt.subplots(figsize=(9, 4.5))
        xs = np.arange(len(with_paper))
        ax.bar(xs - 0.2, [e.computed for e in with_paper], 0.4,
               label="computed")
        ax.bar(xs + 0.2, [e.paper_value for e in with_paper], 0.4,
               label="published")
        ax.set_xticks(xs)
        ax.set_xticklabels([e.id for e in with_paper], rotation=60,
                           fontsize=7)
        ax.legend()
        ax.set_title("per-term constants")
        fig.tight_layout()
        p = os.path.join(outdir, "terms.png")
        fig.savefig(p, dpi=120)
        plt.close(fig)
        paths.append(p)
    return paths

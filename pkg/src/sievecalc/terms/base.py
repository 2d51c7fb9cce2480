"""Term specifications, evaluation, and the final linear assemblies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import quadrature
from ..constants import EXP_GAMMA, U_DEFAULT
from ..expr import (
    C,
    EvalContext,
    Expr,
    Fn,
    HeadLevel,
    Integral,
    LevelTriple,
    V,
    attach_breaks,
    axis,
)
from ..functions import build_function_table, load_step_tables
from ..levels import ConfigError, LevelProvider
from ..quadrature import Region

__all__ = [
    "AssemblyResult",
    "BoundResult",
    "TermPiece",
    "TermSpec",
    "assemble",
    "default_provider",
    "eval_term",
    "expansion_pieces",
    "make_context",
    "piece",
    "shared_tables",
]

ASSEMBLY_WEIGHTS_GOLDBACH = {
    "S1": 3.0, "S2": 1.0, "S3": -2.0, "S4": -1.0, "S5": -1.0, "S6": -1.0,
    "S7": -1.0, "S8": 1.0, "S9": 1.0, "S10": 1.0, "S11": -2.0, "S12": -1.0,
    "S13": -1.0, "S14": -1.0, "S15": -1.0,
}

ASSEMBLY_WEIGHTS_TWIN = {
    "S'1": 3.0, "S'2": 1.0, "S'3": 1.0, "S'4": 1.0, "S'5": 1.0, "S'6": -2.0,
    "S'7": -2.0, "S'8": -1.0, "S'9": -1.0, "S'10": -1.0, "S'11": -1.0,
    "S'12": -1.0, "S'13": -1.0, "S'14": -2.0, "S'15": -1.0, "S'16": -1.0,
}

_FAMILY_ALPHA = {"goldbach": "theta1", "twin": "theta0"}


@dataclass(frozen=True)
class TermPiece:
    """One signed integral (or scalar head) contributing to a term."""

    coef: float
    region: Region | None
    integrand: Expr


@dataclass(frozen=True)
class TermSpec:
    id: str
    family: str                 # 'goldbach' | 'twin'
    direction: str              # 'lower' | 'upper'
    provenance: str             # 'theta_free' | 'theta_conditional' | 'G_conditional'
    prefactor: Expr
    pieces: tuple               # of TermPiece
    has_k_branch: bool = False


@dataclass(frozen=True)
class BoundResult:
    id: str
    value: float
    direction: str
    est_abs_error: float
    provenance: str
    chosen_k: float | None
    clamp_events: int
    oob_events: int
    provider_source: str


@dataclass(frozen=True)
class AssemblyResult:
    pre_division: float
    value: float
    est_abs_error: float


def piece(coef: float, axes, integrand) -> TermPiece:
    """Build a TermPiece, pre-splitting its axes at harvested kinks."""
    if axes is None:
        return TermPiece(coef, None, integrand)
    return TermPiece(coef, Region(attach_breaks(axes, integrand)), integrand)


def expansion_pieces(limit: float, one: str, two: str, three: str,
                     head: str, u: float = U_DEFAULT) -> tuple:
    """The four-piece sifting expansion shared by the head terms and the
    switched-set constants: a scalar head, a 1D subtraction, a 2D addition,
    and a 3D subtraction, with the 1D/2D levels padded by the minimal
    sifting exponent u.

    The raw pieces are O(1/u) and cancel down to O(10), so each sieve
    function G is split as 1 + (G - 1): the weight-only parts integrate in
    closed form (iterated logarithms), and the (G - 1) remainders vanish
    identically wherever the argument is past the asymptotic table edge,
    leaving small, cheap numerical integrals.
    """
    t, t1, t2, t3 = V("t"), V("t1"), V("t2"), V("t3")
    w = 1.0 / u
    a1 = np.log(limit / u)
    # Closed forms of the 1/t, 1/(t1 t2), 1/(t1 t2 t3^2) weights over the
    # nested simplex u <= t_j <= ... <= t_1 <= limit.
    i1 = w * a1
    i2 = w * a1 * a1 / 2.0
    i3 = w * (a1 * a1 / 2.0 - a1 + 1.0) - 1.0 / limit
    head_expr = C(w) * Fn(head, C(w) * HeadLevel())
    r1 = (C(w) * (Fn(one, C(w) * (LevelTriple(t, C(u), C(u)) - t)) - C(1.0))
          / t)
    r2 = (C(w)
          * (Fn(two, C(w) * (LevelTriple(t1, t2, C(u)) - t1 - t2)) - C(1.0))
          / (t1 * t2))
    r3 = ((Fn(three, (LevelTriple(t1, t2, t3) - t1 - t2 - t3) / t3) - C(1.0))
          / (t1 * t2 * t3 * t3))

    # Support floors: every provider level is >= 1/2 and the tables flatten
    # to their limit at the edge s_max, so a remainder is identically zero
    # unless its argument can drop below the edge.  Raising the lower bounds
    # to these floors skips the (large) all-zero part of each region.
    def edge(ctx, kind):
        return ctx.tables[kind].s_max if ctx is not None else 40.0

    def r1_lo(env, ctx):
        return max(u, 0.5 - edge(ctx, one) * u)

    def r2_lo1(env, ctx):
        return max(u, 0.5 * (0.5 - edge(ctx, two) * u))

    def r2_lo2(env, ctx):
        return max(u, 0.5 - env["t1"] - edge(ctx, two) * u)

    def r3_lo1(env, ctx):
        return max(u, 0.5 / (edge(ctx, three) + 3.0))

    def r3_lo2(env, ctx):
        return max(u, (0.5 - env["t1"]) / (edge(ctx, three) + 2.0))

    def r3_lo3(env, ctx):
        return max(u, (0.5 - env["t1"] - env["t2"]) / (edge(ctx, three) + 1.0))

    return (
        piece(+1.0, None, head_expr),
        piece(-1.0, None, C(i1)),
        piece(-1.0, (axis("t", r1_lo, limit),), r1),
        piece(+1.0, None, C(i2)),
        piece(+1.0, (axis("t1", r2_lo1, limit), axis("t2", r2_lo2, t1)), r2),
        piece(-1.0, None, C(i3)),
        piece(-1.0, (axis("t1", r3_lo1, limit), axis("t2", r3_lo2, t1),
                     axis("t3", r3_lo3, t2)), r3),
    )


def shared_tables(s_max: float = 40.0, grid_step: float = 1e-4):
    """Build (or fetch cached) F/f/omega tables plus the H/h step tables."""
    tables = {kind: build_function_table(kind, s_max, grid_step)
              for kind in ("F", "f", "omega")}
    return tables, load_step_tables()


def default_provider(family: str) -> LevelProvider:
    return LevelProvider.bundled(_FAMILY_ALPHA[family])


def make_context(family: str, provider: LevelProvider | None = None,
                 pinned_k: float | None = 12.3,
                 pin_G1: float | None = None, pin_G2: float | None = None,
                 tables=None, steps=None, tol_by_dim=None,
                 g_resolver=None) -> EvalContext:
    if family not in _FAMILY_ALPHA:
        raise ConfigError(f"unknown family {family!r}")
    if provider is None:
        provider = default_provider(family)
    if provider.alpha != _FAMILY_ALPHA[family]:
        raise ConfigError(
            f"provider alpha {provider.alpha} does not match family {family}")
    if tables is None or steps is None:
        tables, steps = shared_tables()
    kwargs = {}
    if tol_by_dim is not None:
        kwargs["tol_by_dim"] = tuple(tol_by_dim)
    ctx = EvalContext(tables=tables, steps=steps, provider=provider,
                      pinned_k=pinned_k, pin_G1=pin_G1, pin_G2=pin_G2,
                      **kwargs)
    ctx.g_resolver = g_resolver
    return ctx


def eval_term(spec: TermSpec, ctx: EvalContext) -> BoundResult:
    """Evaluate one term: sum of signed piece integrals times the prefactor."""
    clamp0, oob0 = ctx.clamp_events, ctx.oob_events
    ctx.chosen_k = None
    total = 0.0
    err = 0.0
    for pc in spec.pieces:
        if pc.region is None:
            total += pc.coef * float(np.asarray(pc.integrand.ev({}, ctx)))
            continue
        dim = len(pc.region.axes)
        try:
            res = quadrature.integrate(pc.region, pc.integrand,
                                       ctx.tol_for(dim), ctx)
        except quadrature.QuadratureError as exc:
            raise quadrature.QuadratureError(
                f"{spec.id}: {exc}", best=exc.best) from exc
        total += pc.coef * res.value
        err += abs(pc.coef) * res.est_abs_error
    pre = float(np.asarray(spec.prefactor.ev({}, ctx)))
    return BoundResult(
        id=spec.id,
        value=pre * total,
        direction=spec.direction,
        est_abs_error=abs(pre) * err,
        provenance=spec.provenance,
        chosen_k=ctx.chosen_k if spec.has_k_branch else None,
        clamp_events=ctx.clamp_events - clamp0,
        oob_events=ctx.oob_events - oob0,
        provider_source=ctx.provider.source,
    )


def assemble(results: dict, weights: dict) -> AssemblyResult:
    """Fold per-term bounds into the final constant: (sum w_i S_i) / 4.

    Positive-weight terms must be lower bounds and negative-weight terms
    upper bounds, and every input must come from the same level provider.
    """
    missing = sorted(set(weights) - set(results))
    if missing:
        raise ValueError(f"missing terms: {', '.join(missing)}")
    sources = {results[tid].provider_source for tid in weights}
    if len(sources) > 1:
        raise ValueError(
            "mixed level providers in assembly: " + ", ".join(sorted(sources)))
    pre = 0.0
    err = 0.0
    for tid, w in weights.items():
        r = results[tid]
        expected = "lower" if w > 0 else "upper"
        if r.direction != expected:
            raise ValueError(
                f"{tid}: direction {r.direction} inconsistent with its "
                f"assembly weight {w:+g}")
        pre += w * r.value
        err += abs(w) * r.est_abs_error
    return AssemblyResult(pre_division=pre, value=pre / 4.0,
                          est_abs_error=err / 4.0)


# Frequently used prefactors.
PREF_GOLDBACH = C(2.0 / EXP_GAMMA)
PREF_TWIN = C(1.0 / EXP_GAMMA)

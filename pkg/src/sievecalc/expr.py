"""Expression trees for declaratively encoded term integrands.

Nodes evaluate vectorized against an environment mapping variable names to
numpy arrays and an :class:`EvalContext` carrying the built function tables,
the step tables, the distribution-level provider, and pinned constants.
Kink locations (sieve-function breakpoints, step-table edges, indicator
boundaries) are harvested automatically from the tree and attached to the
integration axes as pre-split features.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import quadrature
from .quadrature import AxisSpec, Region

__all__ = [
    "Add",
    "C",
    "Const",
    "Div",
    "EvalContext",
    "Expr",
    "Fn",
    "GConst",
    "HeadLevel",
    "Indicator",
    "Integral",
    "KOpt",
    "LevelSingle",
    "LevelTriple",
    "LogE",
    "MaxE",
    "MinE",
    "Mul",
    "Sub",
    "V",
    "Var",
    "WellMargin",
    "axis",
]

# Kink targets per table-backed function: second-derivative breaks of the
# sieve functions (plus the table edge where they flatten to their limit,
# so integrands of the form G - 1 are never sampled as all-zero), and every
# step edge of the savings tables.
_FN_TARGETS = {
    "F": (2.0, 3.0, 4.0, 40.0),
    "f": (2.0, 3.0, 4.0, 40.0),
    "omega": (2.0, 3.0, 4.0, 40.0),
    "H": tuple(round(2.0 + 0.1 * i, 1) for i in range(30)),
    "h": tuple(round(2.0 + 0.1 * i, 1) for i in range(30)),
}


@dataclass
class EvalContext:
    """Shared evaluation state for one term computation."""

    tables: dict
    steps: dict
    provider: object
    pinned_k: float | None = 12.3
    pin_G1: float | None = None
    pin_G2: float | None = None
    tol_by_dim: tuple = (1e-7, 1e-7, 1e-6, 5e-6)
    node_budget: int = 10**8
    nodes: int = 0
    clamp_events: int = 0
    oob_events: int = 0
    chosen_k: float | None = None
    warnings: list = field(default_factory=list)
    g_resolver: object = None
    g_cache: dict = field(default_factory=dict)

    def tol_for(self, dim: int) -> float:
        return self.tol_by_dim[dim - 1]


class Expr:
    children: tuple = ()

    def ev(self, env, ctx):
        raise NotImplementedError

    # -- operator sugar -------------------------------------------------
    def __add__(self, o):
        return Add(self, _c(o))

    def __radd__(self, o):
        return Add(_c(o), self)

    def __sub__(self, o):
        return Sub(self, _c(o))

    def __rsub__(self, o):
        return Sub(_c(o), self)

    def __mul__(self, o):
        return Mul(self, _c(o))

    def __rmul__(self, o):
        return Mul(_c(o), self)

    def __truediv__(self, o):
        return Div(self, _c(o))

    def __rtruediv__(self, o):
        return Div(_c(o), self)

    def __neg__(self):
        return Sub(Const(0.0), self)


def _c(v) -> Expr:
    return v if isinstance(v, Expr) else Const(float(v))


class Const(Expr):
    def __init__(self, value: float):
        self.value = float(value)

    def ev(self, env, ctx):
        return self.value


class Var(Expr):
    def __init__(self, name: str):
        self.name = name

    def ev(self, env, ctx):
        return np.asarray(env[self.name], dtype=float)


C = Const
V = Var


class _Bin(Expr):
    def __init__(self, a, b):
        self.a = _c(a)
        self.b = _c(b)
        self.children = (self.a, self.b)


class Add(_Bin):
    def ev(self, env, ctx):
        return self.a.ev(env, ctx) + self.b.ev(env, ctx)


class Sub(_Bin):
    def ev(self, env, ctx):
        return self.a.ev(env, ctx) - self.b.ev(env, ctx)


class Mul(_Bin):
    def ev(self, env, ctx):
        return self.a.ev(env, ctx) * self.b.ev(env, ctx)


class Div(_Bin):
    """Division with a vanishing-denominator guard."""

    guard = 1e-14

    def ev(self, env, ctx):
        den = np.asarray(self.b.ev(env, ctx), dtype=float)
        if (np.abs(den) < self.guard).any():
            names = ", ".join(sorted(env)) or "(constant)"
            raise quadrature.QuadratureError(
                f"denominator vanished while integrating over {names}")
        return self.a.ev(env, ctx) / den


class MinE(_Bin):
    def ev(self, env, ctx):
        return np.minimum(self.a.ev(env, ctx), self.b.ev(env, ctx))


class MaxE(_Bin):
    def ev(self, env, ctx):
        return np.maximum(self.a.ev(env, ctx), self.b.ev(env, ctx))


class LogE(Expr):
    def __init__(self, arg):
        self.arg = _c(arg)
        self.children = (self.arg,)

    def ev(self, env, ctx):
        return np.log(self.arg.ev(env, ctx))


class Fn(Expr):
    """Table-backed function leaf: F, f, omega, H, or h.

    ``invalid='inf'`` maps non-positive arguments of F to +inf instead of a
    domain error, so a pointwise min against another branch stays total on
    regions whose indicator split leaves boundary samples outside F's domain.
    """

    def __init__(self, kind: str, arg, invalid: str | None = None):
        if kind not in _FN_TARGETS:
            raise ValueError(f"unknown function kind {kind!r}")
        self.kind = kind
        self.arg = _c(arg)
        self.invalid = invalid
        self.children = (self.arg,)

    def ev(self, env, ctx):
        arg = np.asarray(self.arg.ev(env, ctx), dtype=float)
        if self.kind in ("H", "h"):
            val, oob = ctx.steps[self.kind].eval_with_flags(arg)
            ctx.oob_events += oob
            return val
        table = ctx.tables[self.kind]
        if self.kind == "F" and self.invalid == "inf":
            scalar = arg.ndim == 0
            arr = np.atleast_1d(arg)
            bad = arr <= 0.0
            if bad.any():
                val, cl = table.eval_with_flags(np.where(bad, 1.0, arr))
                ctx.clamp_events += cl
                out = np.where(bad, np.inf, np.atleast_1d(val))
                return out[0] if scalar else out
        val, cl = table.eval_with_flags(arg)
        ctx.clamp_events += cl
        return val


class LevelSingle(Expr):
    def __init__(self, t1):
        self.t1 = _c(t1)
        self.children = (self.t1,)

    def ev(self, env, ctx):
        return ctx.provider.single(self.t1.ev(env, ctx))


class LevelTriple(Expr):
    def __init__(self, t1, t2, t3):
        self.ts = (_c(t1), _c(t2), _c(t3))
        self.children = self.ts

    def ev(self, env, ctx):
        return ctx.provider.triple(*(t.ev(env, ctx) for t in self.ts))


class HeadLevel(Expr):
    """The provider's level for the unfactored head term."""

    def ev(self, env, ctx):
        return ctx.provider.head_level()


class WellMargin(Expr):
    """min over m of theta - (t_1 + ... + t_{m-1} + 2 t_m); > 0 iff the
    exponent vector is well-factorable (strict inequalities)."""

    def __init__(self, ts, theta):
        self.ts = tuple(_c(t) for t in ts)
        self.theta = _c(theta)
        self.children = self.ts + (self.theta,)

    def ev(self, env, ctx):
        theta = np.asarray(self.theta.ev(env, ctx), dtype=float)
        vals = [np.asarray(t.ev(env, ctx), dtype=float) for t in self.ts]
        margin = None
        partial = 0.0
        for t in vals:
            m = theta - (partial + 2.0 * t)
            margin = m if margin is None else np.minimum(margin, m)
            partial = partial + t
        return margin


class Indicator(Expr):
    def __init__(self, margin):
        self.margin = _c(margin)
        self.children = (self.margin,)

    def ev(self, env, ctx):
        return (np.asarray(self.margin.ev(env, ctx)) > 0.0).astype(float)


class GConst(Expr):
    """One of the switched-set constants; pinned value or computed lazily."""

    def __init__(self, which: str):
        if which not in ("G1", "G2"):
            raise ValueError("which must be G1 or G2")
        self.which = which

    def ev(self, env, ctx):
        pinned = ctx.pin_G1 if self.which == "G1" else ctx.pin_G2
        if pinned is not None:
            return float(pinned)
        if self.which not in ctx.g_cache:
            if ctx.g_resolver is None:
                raise RuntimeError(
                    f"{self.which} is neither pinned nor resolvable")
            ctx.g_cache[self.which] = float(ctx.g_resolver(self.which))
        return ctx.g_cache[self.which]


class Integral(Expr):
    """Nested integral node; evaluated per scalar point of the outer env."""

    def __init__(self, axes, body, tol_scale: float = 0.5):
        self.body = _c(body)
        self.axes = tuple(attach_breaks(axes, self.body))
        self.tol_scale = tol_scale

    def _one(self, env, ctx):
        tol = ctx.tol_for(len(self.axes)) * self.tol_scale
        return quadrature.integrate(Region(self.axes), self.body, tol, ctx,
                                    base_env=env).value

    def ev(self, env, ctx):
        arrays = {k: np.asarray(v, dtype=float) for k, v in env.items()}
        shape = np.broadcast_shapes(*(a.shape for a in arrays.values())) \
            if arrays else ()
        if shape == ():
            return self._one({k: float(a) for k, a in arrays.items()}, ctx)
        flat = {k: np.broadcast_to(a, shape).ravel() for k, a in arrays.items()}
        n = int(np.prod(shape))
        out = np.empty(n)
        for j in range(n):
            out[j] = self._one({k: float(v[j]) for k, v in flat.items()}, ctx)
        return out.reshape(shape)


class KOpt(Expr):
    """Inner scalar optimization over the sharpening parameter k.

    With a pinned k in the context the body is evaluated vectorized at that
    k; otherwise each scalar outer point runs a log-grid + golden-section
    search over [kmin, kmax].
    """

    def __init__(self, k_name: str, body, kmin: float, kmax: float,
                 sense: str = "min"):
        self.k_name = k_name
        self.body = _c(body)
        self.kmin = float(kmin)
        self.kmax = float(kmax)
        self.sense = sense

    def ev(self, env, ctx):
        if ctx.pinned_k is not None:
            k = max(self.kmin, float(ctx.pinned_k))
            ctx.chosen_k = k
            return self.body.ev({**env, self.k_name: k}, ctx)
        arrays = {k: np.asarray(v, dtype=float) for k, v in env.items()}
        shape = np.broadcast_shapes(*(a.shape for a in arrays.values())) \
            if arrays else ()

        def solve(point_env):
            k_star, val = quadrature.optimize_scalar(
                lambda k: float(np.asarray(
                    self.body.ev({**point_env, self.k_name: k}, ctx))),
                self.kmin, self.kmax, self.sense, warnings=ctx.warnings)
            ctx.chosen_k = k_star
            return val

        if shape == ():
            return solve({k: float(a) for k, a in arrays.items()})
        flat = {k: np.broadcast_to(a, shape).ravel() for k, a in arrays.items()}
        n = int(np.prod(shape))
        out = np.empty(n)
        for j in range(n):
            out[j] = solve({k: float(v[j]) for k, v in flat.items()})
        return out.reshape(shape)


# ---------------------------------------------------------------------------
# Axis construction and automatic kink harvesting.
# ---------------------------------------------------------------------------


def _bound_callable(b):
    if isinstance(b, Expr):
        return lambda env, ctx, _e=b: float(np.asarray(_e.ev(env, ctx)))
    if callable(b):
        return b
    return float(b)


def axis(name: str, lower, upper, breaks: tuple = ()) -> AxisSpec:
    """AxisSpec whose bounds may be plain numbers or expressions of the
    outer variables."""
    return AxisSpec(name, _bound_callable(lower), _bound_callable(upper),
                    tuple(breaks))


def free_vars(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    out = set()
    for ch in getattr(e, "children", ()):
        out |= free_vars(ch)
    return out


def collect_features(e: Expr):
    """(feature, targets) pairs for every kink source in the tree, not
    descending into nested integrals or k-optimizations (those attach their
    own breakpoints when constructed)."""
    if isinstance(e, (Integral, KOpt)):
        return
    if isinstance(e, Fn):
        yield (e.arg, _FN_TARGETS[e.kind])
    if isinstance(e, WellMargin):
        yield (e, (0.0,))
    for ch in getattr(e, "children", ()):
        yield from collect_features(ch)


def attach_breaks(axes, body: Expr):
    """Assign each harvested kink feature to the innermost axis it varies
    along, so every axis interval is pre-split before adaptivity."""
    axes = tuple(axes)
    names = [ax.name for ax in axes]
    per_axis = {name: [] for name in names}
    for feature, targets in collect_features(body):
        fv = free_vars(feature)
        depth = -1
        for i, name in enumerate(names):
            if name in fv:
                depth = i
        if depth >= 0:
            per_axis[names[depth]].append((feature, tuple(targets)))
    return tuple(
        replace(ax, breaks=ax.breaks + tuple(per_axis[ax.name]))
        for ax in axes)

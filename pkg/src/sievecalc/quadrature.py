"""Deterministic adaptive nested quadrature for 1-4 dimensional integrands.

Each axis is integrated by adaptive Simpson; the innermost axis is evaluated
vectorized, outer axes recurse scalar point by scalar point.  Axis intervals
are pre-split at declared breakpoints (function kinks, step-table edges,
indicator boundaries) before adaptivity, and all panel contributions are
pairwise-summed in interval order so results are independent of evaluation
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AxisSpec",
    "FuncIntegrand",
    "QuadratureError",
    "QuadratureResult",
    "Region",
    "integrate",
    "optimize_scalar",
    "pairwise_sum",
]

_MAX_DEPTH = 48


class QuadratureError(RuntimeError):
    """Integration failure; carries the best estimate found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass
class QuadratureResult:
    value: float
    est_abs_error: float
    nodes_used: int
    clamp_events: int


@dataclass(frozen=True)
class AxisSpec:
    """One integration axis; bounds may depend on the outer variables.

    ``lower``/``upper`` are floats or callables ``(env, ctx) -> float``.
    ``breaks`` entries are floats, callables ``(env, ctx) -> iterable``, or
    ``(feature, targets)`` pairs requesting a split wherever the feature
    expression crosses one of the target values along this axis.
    """

    name: str
    lower: object
    upper: object
    breaks: tuple = ()


@dataclass(frozen=True)
class Region:
    axes: tuple

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 4:
            raise ValueError("regions support 1 to 4 axes")


class FuncIntegrand:
    """Adapter turning a plain callable over the env dict into an integrand."""

    def __init__(self, fn):
        self.fn = fn

    def ev(self, env, ctx):
        return self.fn(env)


class _LocalCounter:
    def __init__(self):
        self.nodes = 0
        self.node_budget = 10**8


def pairwise_sum(values) -> float:
    """Sum floats with a fixed-shape pairwise tree (order-stable rounding)."""
    vals = [float(v) for v in values]
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def _bound(b, env, ctx) -> float:
    return float(b(env, ctx)) if callable(b) else float(b)


def _scan_feature(feature, targets, env, ctx, name, a, b):
    """Roots of feature(t) == target on [a, b] by sign scan + bisection.

    All detected brackets are refined simultaneously with vectorized
    bisection so each iteration costs one feature evaluation.
    """
    ts = np.linspace(a, b, 65)
    vals = np.asarray(feature.ev({**env, name: ts}, ctx), dtype=float)
    if vals.ndim == 0:
        return []
    los, his, glos, tgts = [], [], [], []
    for tgt in targets:
        g = vals - tgt
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        for i in idx:
            los.append(ts[i])
            his.append(ts[i + 1])
            glos.append(g[i])
            tgts.append(tgt)
    if not los:
        return []
    lo = np.array(los)
    hi = np.array(his)
    glo = np.array(glos)
    tgt = np.array(tgts)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        gm = np.asarray(feature.ev({**env, name: mid}, ctx),
                        dtype=float) - tgt
        same = (gm > 0) == (glo > 0)
        lo = np.where(same, mid, lo)
        glo = np.where(same, gm, glo)
        hi = np.where(same, hi, mid)
    return list(0.5 * (lo + hi))


def _axis_breaks(ax, env, ctx, a, b):
    pts = set()
    for entry in ax.breaks:
        if isinstance(entry, (int, float)):
            pts.add(float(entry))
        elif isinstance(entry, tuple):
            feature, targets = entry
            pts.update(_scan_feature(feature, targets, env, ctx, ax.name, a, b))
        else:
            pts.update(float(p) for p in entry(env, ctx))
    eps = 1e-13 * max(1.0, abs(a), abs(b))
    return sorted(p for p in pts if a + eps < p < b - eps)


def _eval_vec(f_vec, xs, counter):
    counter.nodes += xs.size
    if counter.nodes > counter.node_budget:
        raise QuadratureError(
            f"node budget {counter.node_budget} exceeded")
    vals = np.asarray(f_vec(xs), dtype=float)
    if vals.ndim == 0:
        vals = np.full(xs.shape, float(vals))
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise QuadratureError(f"non-finite integrand value at t={bad!r}")
    return vals


def _adaptive(f_vec, a, b, tol, counter):
    """Adaptive Simpson on [a, b]; returns (value, error_estimate)."""
    xs0 = np.array([a, 0.5 * (a + b), b])
    f0 = _eval_vec(f_vec, xs0, counter)
    whole = (b - a) / 6.0 * (f0[0] + 4.0 * f0[1] + f0[2])
    stack = [(a, b, f0[0], f0[1], f0[2], whole, 0)]
    contribs = []
    total_len = b - a
    while stack:
        mids = np.empty(2 * len(stack))
        for i, (x0, x1, *_rest) in enumerate(stack):
            m = 0.5 * (x0 + x1)
            mids[2 * i] = 0.5 * (x0 + m)
            mids[2 * i + 1] = 0.5 * (m + x1)
        fmids = _eval_vec(f_vec, mids, counter)
        nxt = []
        for i, (x0, x1, fa, fm, fb, s_whole, depth) in enumerate(stack):
            flm, frm = fmids[2 * i], fmids[2 * i + 1]
            m = 0.5 * (x0 + x1)
            h = x1 - x0
            s_left = h / 12.0 * (fa + 4.0 * flm + fm)
            s_right = h / 12.0 * (fm + 4.0 * frm + fb)
            delta = s_left + s_right - s_whole
            if abs(delta) <= 15.0 * tol * (h / total_len) or depth >= _MAX_DEPTH:
                contribs.append((x0, s_left + s_right + delta / 15.0,
                                 abs(delta) / 15.0))
            else:
                nxt.append((x0, m, fa, flm, fm, s_left, depth + 1))
                nxt.append((m, x1, fm, frm, fb, s_right, depth + 1))
        stack = nxt
    contribs.sort(key=lambda c: c[0])
    value = pairwise_sum(c[1] for c in contribs)
    err = float(sum(c[2] for c in contribs))
    return value, err


def integrate(region: Region, integrand, tol: float, ctx=None,
              base_env=None) -> QuadratureResult:
    """Nested adaptive Simpson over the region; deterministic.

    Per-axis absolute tolerance is tol/(3*dim), halved per nesting level;
    the outer acceptance threshold scales with panel width, so inner noise
    at a comparable tolerance cannot stall outer refinement.
    Empty slices (upper bound not above the lower bound) contribute exactly 0.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    counter = ctx if (ctx is not None and hasattr(ctx, "nodes")) else _LocalCounter()
    dims = len(region.axes)
    base_tol = tol / (3.0 * dims)
    nodes0 = counter.nodes
    clamp0 = getattr(ctx, "clamp_events", 0)
    top_err = [0.0]
    top_done = []

    def eval_axis(i, env):
        ax = region.axes[i]
        a = _bound(ax.lower, env, ctx)
        b = _bound(ax.upper, env, ctx)
        if not b > a:
            return 0.0
        axis_tol = base_tol * (0.5 ** i)
        if i == dims - 1:
            def f_raw(ts):
                return integrand.ev({**env, ax.name: np.asarray(ts, dtype=float)}, ctx)
        else:
            def f_raw(ts):
                return np.array(
                    [eval_axis(i + 1, {**env, ax.name: float(t)})
                     for t in np.atleast_1d(ts)])
        cuts = [a] + _axis_breaks(ax, env, ctx, a, b) + [b]
        # Wide positive axes (the 1/t-weighted ones) integrate far better in
        # log coordinates: substitute t = e^x so the panel density adapts to
        # the geometric scale instead of piling up near the lower endpoint.
        use_log = a > 0.0 and b / a >= 4.0
        if use_log:
            def f_vec(xs):
                ts = np.exp(np.asarray(xs, dtype=float))
                return np.asarray(f_raw(ts), dtype=float) * ts
            cuts = [float(np.log(c)) for c in cuts]
            a, b = cuts[0], cuts[-1]
        else:
            f_vec = f_raw
        seg_vals = []
        for sa, sb in zip(cuts, cuts[1:]):
            if sb - sa <= 1e-15:
                continue
            v, e = _adaptive(f_vec, sa, sb, axis_tol * (sb - sa) / (b - a),
                             counter)
            seg_vals.append(v)
            if i == 0:
                top_err[0] += e
                top_done.append(v)
        return pairwise_sum(seg_vals)

    try:
        value = eval_axis(0, dict(base_env) if base_env else {})
    except QuadratureError as exc:
        exc.best = pairwise_sum(top_done) if top_done else None
        raise
    est = min(tol, top_err[0] + base_tol * max(0, dims - 1))
    return QuadratureResult(
        value=value,
        est_abs_error=est,
        nodes_used=counter.nodes - nodes0,
        clamp_events=(getattr(ctx, "clamp_events", 0) - clamp0) if ctx else 0,
    )


def optimize_scalar(fn, kmin: float, kmax: float, sense: str = "min",
                    warnings=None):
    """Scalar optimization: 64-point log grid, then golden-section refinement.

    Non-finite evaluations are excluded (a warning is recorded when a sink is
    provided).  Returns (optimizer, optimum).
    """
    if not kmin < kmax:
        raise ValueError("kmin must be below kmax")
    sign = 1.0 if sense == "min" else -1.0
    grid = np.geomspace(kmin, kmax, 64)
    vals = []
    for k in grid:
        v = float(fn(float(k)))
        if not np.isfinite(v):
            if warnings is not None:
                warnings.append(f"non-finite objective at k={k:.6g}; excluded")
            v = np.inf if sense == "min" else -np.inf
        vals.append(v)
    vals = np.array(vals)
    i = int(np.argmin(sign * vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = sign * fn(c), sign * fn(d)
    while hi - lo > 1e-3:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = sign * fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = sign * fn(d)
    k_star = 0.5 * (lo + hi)
    best = float(fn(k_star))
    grid_best = float(vals[i])
    if sign * best > sign * grid_best:
        return float(grid[i]), grid_best
    return float(k_star), best

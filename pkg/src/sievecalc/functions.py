"""Linear-sieve functions F and f, the Buchstab function, and the H/h step tables.

F, f and the Buchstab function are solved on a uniform grid from their
integrated delay recurrences:

    s F(s) = 2 e^gamma                           for 0 < s <= 3,
    s F(s) = 2 e^gamma + int_3^s f(t-1) dt       for s > 3,
    s f(s) = int_2^s F(t-1) dt                   for s >= 2  (f = 0 below 2),
    u w(u) = 1 + int_2^u w(t-1) dt               for u >= 2  (w = 1/u on [1,2]).

The cumulative integrals are evaluated by composite Simpson on the grid,
marching forward one delay unit at a time so every integrand sample is
already known.  Between grid samples a monotone cubic (PCHIP) interpolant
is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator

from .constants import TWO_EXP_GAMMA

__all__ = [
    "DomainError",
    "FunctionTable",
    "StepTable",
    "build_function_table",
    "eval_sieve_function",
    "eval_step_lower",
    "load_step_tables",
]

_VALID_KINDS = ("F", "f", "omega")


class DomainError(ValueError):
    """Argument outside the mathematical domain of a sieve function."""


@dataclass(frozen=True)
class FunctionTable:
    """Immutable sampled solution of one sieve delay recurrence."""

    kind: str
    grid_start: float
    grid_step: float
    values: np.ndarray
    s_max: float
    _interp: PchipInterpolator = field(repr=False, compare=False)

    def grid(self) -> np.ndarray:
        return self.grid_start + self.grid_step * np.arange(len(self.values))

    def eval_with_flags(self, s) -> tuple[np.ndarray, int]:
        """Evaluate at s (scalar or array); returns (values, clamp_count).

        Clamp count is the number of arguments above s_max that were served
        the table-end value.
        """
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)

        high = s > self.s_max
        clamped = int(np.count_nonzero(high))

        if self.kind == "F":
            if (s <= 0.0).any():
                raise DomainError("F(s) requires s > 0")
            low = s <= 2.0
        elif self.kind == "f":
            low = s <= 2.0
        else:  # omega
            if (s < 1.0).any():
                raise DomainError("omega(u) requires u >= 1")
            low = None

        if low is None or not low.any():
            if clamped == len(s):
                out = np.full(s.shape, self.values[-1])
            else:
                out = np.asarray(self._interp(np.minimum(s, self.s_max)),
                                 dtype=float)
                if clamped:
                    out[high] = self.values[-1]
            return (out[0] if scalar else out), clamped

        out = np.empty_like(s)
        if self.kind == "F":
            out[low] = TWO_EXP_GAMMA / s[low]
        else:
            out[low] = 0.0
        mid = ~(low | high)
        if mid.any():
            out[mid] = self._interp(s[mid])
        out[high] = self.values[-1]
        return (out[0] if scalar else out), clamped

    def __call__(self, s):
        return self.eval_with_flags(s)[0]


def _solve_linear_sieve(s_max: float, step: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solve the coupled F/f recurrences on [2, s_max]; returns (grid, F, f)."""
    m = int(round(1.0 / step))
    n_blocks = int(round(s_max - 2.0))
    n = n_blocks * m + 1
    grid = 2.0 + np.arange(n) / m

    F = np.empty(n)
    f = np.empty(n)

    def analytic_F(s):
        return TWO_EXP_GAMMA / s

    # Cumulative integrals sF_int = int_3^s f(t-1) dt, sf_int = int_2^s F(t-1) dt.
    sF_int = np.zeros(n)
    sf_int = np.zeros(n)
    for j in range(n_blocks):
        lo, hi = j * m, (j + 1) * m
        idx = np.arange(lo, hi + 1)
        s = grid[idx]

        # f(s-1): zero while s <= 3, else one delay unit back in the f array.
        if j == 0:
            f_delay = np.zeros(len(idx))
        else:
            f_delay = f[idx - m]
        # F(s-1): analytic while s-1 <= 2, else one delay unit back.
        if j == 0:
            F_delay = analytic_F(s - 1.0)
        else:
            F_delay = F[idx - m]

        h = 1.0 / m
        sF_int[idx] = sF_int[lo] + cumulative_simpson(f_delay, dx=h, initial=0.0)
        sf_int[idx] = sf_int[lo] + cumulative_simpson(F_delay, dx=h, initial=0.0)

        F[idx] = (TWO_EXP_GAMMA + sF_int[idx]) / s
        f[idx] = sf_int[idx] / s

    return grid, F, f


def _solve_buchstab(u_max: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Solve the Buchstab recurrence on [1, u_max]; returns (grid, w)."""
    m = int(round(1.0 / step))
    n_blocks = int(round(u_max - 1.0))
    n = n_blocks * m + 1
    grid = 1.0 + np.arange(n) / m

    w = np.empty(n)
    w[: m + 1] = 1.0 / grid[: m + 1]

    uw_int = np.zeros(n)  # int_2^u w(t-1) dt
    for j in range(1, n_blocks):
        lo, hi = j * m, (j + 1) * m
        idx = np.arange(lo, hi + 1)
        w_delay = w[idx - m]
        uw_int[idx] = uw_int[lo] + cumulative_simpson(w_delay, dx=1.0 / m, initial=0.0)
        w[idx] = (1.0 + uw_int[idx]) / grid[idx]
    return grid, w


_solver_cache: dict[tuple, tuple] = {}


def build_function_table(kind: str, s_max: float = 40.0, grid_step: float = 1e-4) -> FunctionTable:
    """Build the sampled table for one of F, f, or the Buchstab function."""
    if kind not in _VALID_KINDS:
        raise ValueError(f"unknown function kind {kind!r}")
    if not grid_step > 0.0:
        raise ValueError("grid_step must be positive")
    if grid_step > 1e-3:
        raise ValueError("grid_step must be <= 1e-3")
    if s_max < 3.0:
        raise ValueError("s_max below the delay horizon (minimum 3)")
    if s_max < 5.0:
        raise ValueError("s_max must be at least 5")
    if abs(round(s_max) - s_max) > 1e-12:
        raise ValueError("s_max must be an integer number of delay units")

    key = (round(s_max), int(round(1.0 / grid_step)))
    if kind in ("F", "f"):
        ck = ("Ff",) + key
        if ck not in _solver_cache:
            _solver_cache[ck] = _solve_linear_sieve(s_max, grid_step)
        grid, F, f = _solver_cache[ck]
        values = F if kind == "F" else f
        start = 2.0
    else:
        ck = ("w",) + key
        if ck not in _solver_cache:
            _solver_cache[ck] = _solve_buchstab(s_max, grid_step)
        grid, values = _solver_cache[ck]
        start = 1.0

    interp = PchipInterpolator(grid, values, extrapolate=False)
    return FunctionTable(
        kind=kind,
        grid_start=start,
        grid_step=grid_step,
        values=values,
        s_max=float(s_max),
        _interp=interp,
    )


def eval_sieve_function(table: FunctionTable, s: float) -> float:
    """Interpolated access with analytic branches; clamps beyond s_max."""
    val, _ = table.eval_with_flags(float(s))
    return float(val)


# ---------------------------------------------------------------------------
# Step tables for the double-sieve savings functions H and h.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepTable:
    """Piecewise-constant lower bounds on one of the savings functions."""

    kind: str
    rows: tuple  # of (s_lo, s_hi, bound, flags)
    _edges: np.ndarray = field(repr=False, compare=False)
    _bounds: np.ndarray = field(repr=False, compare=False)

    @property
    def s_lo(self) -> float:
        return self.rows[0][0]

    @property
    def s_hi(self) -> float:
        return self.rows[-1][1]

    def eval_with_flags(self, s) -> tuple[np.ndarray, int]:
        """Row lower bound containing s; 0 outside the tabulated range.

        Also returns the number of queries that fell outside the range
        (these weaken the computed bound in the safe direction).
        """
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        idx = np.searchsorted(self._edges, s, side="left") - 1
        inside = (idx >= 0) & (idx < len(self._bounds))
        out = np.where(inside, self._bounds[np.clip(idx, 0, len(self._bounds) - 1)], 0.0)
        if self.kind == "h":
            # closed point row at the left endpoint
            out = np.where(s == self.rows[0][0], self.rows[0][2], out)
        oob = int(np.count_nonzero(~inside & (s != self.rows[0][0]))) if self.kind == "h" \
            else int(np.count_nonzero(~inside))
        return (out[0] if scalar else out), oob

    def __call__(self, s):
        return self.eval_with_flags(s)[0]


def _parse_step_rows(text: str) -> dict[str, StepTable]:
    rows: dict[str, list] = {"H": [], "h": []}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, lo, hi, bound, flags = line.split()
        rows[kind].append((float(lo), float(hi), float(bound), flags))
    tables = {}
    for kind, rws in rows.items():
        intervals = [r for r in rws if r[0] < r[1]]
        prev_hi = None
        for r in intervals:
            if prev_hi is not None and abs(r[0] - prev_hi) > 1e-12:
                raise ValueError(f"{kind} rows leave a gap at s={prev_hi}")
            if r[2] < 0.0:
                raise ValueError(f"{kind} bound negative at s_lo={r[0]}")
            prev_hi = r[1]
        edges = np.array([intervals[0][0]] + [r[1] for r in intervals])
        bounds = np.array([r[2] for r in intervals])
        tables[kind] = StepTable(kind=kind, rows=tuple(rws), _edges=edges, _bounds=bounds)
    return tables


def load_step_tables() -> dict[str, StepTable]:
    """Load the bundled H/h tables from the plain-text data file."""
    text = resources.files("sievecalc.data").joinpath("step_tables.txt").read_text()
    return _parse_step_rows(text)


def eval_step_lower(table: StepTable, s: float) -> float:
    """Tabulated lower bound at s; 0 outside the covered range (total function)."""
    val, _ = table.eval_with_flags(float(s))
    return float(val)

"""Distribution-level providers and the well-factorable exponent predicate.

The level functions themselves are published only by reference, so a
provider either returns a constant level (the admissible cap, the classical
1/2 baseline, or any user constant) or evaluates a piecewise-region file
transcribed from the cited sources.  Every equidistribution-dependent
integrand is gated through a provider.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constants import (
    CAP_THETA0,
    CAP_THETA1,
    TRIPLE_THRESHOLD_THETA0,
    TRIPLE_THRESHOLD_THETA1,
    U_DEFAULT,
)

__all__ = [
    "ConfigError",
    "ExponentVector",
    "LevelProvider",
    "level_single",
    "level_triple",
    "load_piecewise_regions",
    "well_factorable_exponents",
]

ALPHAS = ("theta0", "theta1")
_CAPS = {"theta0": CAP_THETA0, "theta1": CAP_THETA1}
_THRESHOLDS = {"theta0": TRIPLE_THRESHOLD_THETA0, "theta1": TRIPLE_THRESHOLD_THETA1}


class ConfigError(ValueError):
    """Invalid or incomplete level configuration."""


@dataclass(frozen=True)
class PiecewiseRegion:
    alpha: str
    arity: int          # 1 or 3
    lo: tuple           # per-variable lower bounds
    hi: tuple           # per-variable upper bounds
    coeffs: tuple       # (c0, c1, c2, c3) of the affine level expression

    def contains(self, ts) -> np.ndarray:
        mask = np.ones(np.shape(ts[0]), dtype=bool)
        for t, lo, hi in zip(ts, self.lo, self.hi):
            mask &= (t >= lo) & (t <= hi)
        return mask

    def level(self, ts) -> np.ndarray:
        c0, c1, c2, c3 = self.coeffs
        val = c0 + c1 * ts[0]
        if self.arity == 3:
            val = val + c2 * ts[1] + c3 * ts[2]
        return np.asarray(val, dtype=float)


def _parse_level_expr(tokens: list[str]) -> tuple:
    """Parse 'c' or 'c0 + c1*t1 + c2*t2 + c3*t3' into (c0, c1, c2, c3)."""
    expr = " ".join(tokens).replace(" ", "")
    coeffs = [0.0, 0.0, 0.0, 0.0]
    # normalize leading sign and split on +/- while keeping signs
    terms, cur = [], ""
    for ch in expr:
        if ch in "+-" and cur and cur[-1] not in "eE":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    for term in terms:
        if not term:
            continue
        if "*" in term:
            c, var = term.split("*")
            if var not in ("t1", "t2", "t3"):
                raise ConfigError(f"unknown variable {var!r} in level expression")
            coeffs[int(var[1])] += float(c) if c not in ("", "+", "-") else float(c + "1")
        else:
            coeffs[0] += float(term)
    return tuple(coeffs)


def load_piecewise_regions(text: str) -> list[PiecewiseRegion]:
    """Parse a piecewise-region file (see data/levels_builtin.txt header)."""
    regions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            alpha, arity = parts[0], int(parts[1])
            if alpha not in ALPHAS:
                raise ConfigError(f"unknown alpha {alpha!r}")
            if arity == 1:
                lo, hi = (float(parts[2]),), (float(parts[3]),)
                expr = parts[4:]
            elif arity == 3:
                lo = (float(parts[2]), float(parts[4]), float(parts[6]))
                hi = (float(parts[3]), float(parts[5]), float(parts[7]))
                expr = parts[8:]
            else:
                raise ConfigError(f"arity must be 1 or 3, got {arity}")
            if not expr:
                raise ConfigError("missing level expression")
            coeffs = _parse_level_expr(expr)
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"levels file line {lineno}: {exc}") from exc
        regions.append(PiecewiseRegion(alpha, arity, lo, hi, coeffs))
    if not regions:
        raise ConfigError("levels file defines no regions")
    return regions


@dataclass(frozen=True)
class LevelProvider:
    """Distribution-level function for one setting (theta0 or theta1)."""

    alpha: str
    mode: str                      # 'constant' | 'piecewise'
    constant_level: float = 0.0
    regions: tuple = ()
    u_default: float = U_DEFAULT
    source: str = "constant"       # identity tag for mixed-provider checks

    @classmethod
    def constant(cls, alpha: str, level: float) -> "LevelProvider":
        if alpha not in ALPHAS:
            raise ConfigError(f"unknown alpha {alpha!r}")
        cap = _CAPS[alpha]
        if not 0.5 <= level <= cap + 1e-15:
            raise ConfigError(
                f"constant level {level} outside [1/2, {cap}] for {alpha}"
            )
        return cls(alpha=alpha, mode="constant", constant_level=float(level),
                   source=f"constant:{level!r}")

    @classmethod
    def cap(cls, alpha: str) -> "LevelProvider":
        return cls.constant(alpha, _CAPS[alpha])

    @classmethod
    def from_file(cls, path, alpha: str) -> "LevelProvider":
        text = open(path).read()
        regions = tuple(r for r in load_piecewise_regions(text) if r.alpha == alpha)
        if not regions:
            raise ConfigError(f"levels file has no regions for alpha={alpha}")
        return cls(alpha=alpha, mode="piecewise", regions=regions,
                   source=f"piecewise:{path}")

    @classmethod
    def bundled(cls, alpha: str) -> "LevelProvider":
        text = resources.files("sievecalc.data").joinpath("levels_builtin.txt").read_text()
        regions = tuple(r for r in load_piecewise_regions(text) if r.alpha == alpha)
        return cls(alpha=alpha, mode="piecewise", regions=regions,
                   source="piecewise:bundled")

    @property
    def level_cap(self) -> float:
        return _CAPS[self.alpha]

    @property
    def triple_threshold(self) -> float:
        return _THRESHOLDS[self.alpha]

    def head_level(self) -> float:
        """Level used for the r=0 head term 500 f(500 theta)."""
        if self.mode == "constant":
            return self.constant_level
        return self.level_cap

    def _full_constant(self, arity: int):
        """The constant level if a single constant region covers the whole
        unit box for this arity; None otherwise.  Cached (frozen dataclass,
        so via object.__setattr__)."""
        cache = getattr(self, "_fc_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_fc_cache", cache)
        if arity not in cache:
            val = None
            matching = [r for r in self.regions if r.arity == arity]
            if len(matching) == 1:
                r = matching[0]
                if (all(lo <= 0.0 for lo in r.lo)
                        and all(hi >= 1.0 for hi in r.hi)
                        and all(c == 0.0 for c in r.coeffs[1:])):
                    val = float(self._check_range(r.coeffs[0])[()])
            cache[arity] = val
        return cache[arity]

    def _piecewise_eval(self, ts, arity: int, where=None) -> np.ndarray:
        """Evaluate the matching regions; ``where`` limits the points that
        must be covered (a gap outside it is not an error)."""
        shape = np.shape(ts[0])
        out = np.zeros(shape)
        covered = np.zeros(shape, dtype=bool)
        for region in self.regions:
            if region.arity != arity:
                continue
            mask = region.contains(ts) & ~covered
            out = np.where(mask, region.level(ts), out)
            covered |= mask
        gaps = ~covered if where is None else (where & ~covered)
        if gaps.any():
            bad = np.broadcast_to(np.asarray(ts[0]), shape)[gaps]
            raise ConfigError(
                f"piecewise levels ({self.alpha}, arity {arity}) leave a gap "
                f"at t1={np.atleast_1d(bad)[0]:.6g}"
            )
        return out

    def _check_range(self, levels) -> np.ndarray:
        levels = np.asarray(levels, dtype=float)
        if (levels < 0.5 - 1e-12).any() or (levels > self.level_cap + 1e-12).any():
            raise ConfigError(
                f"level outside [1/2, {self.level_cap}] for alpha={self.alpha}"
            )
        return np.minimum(levels, self.level_cap)

    def single(self, t1):
        """Level for a single constrained exponent t1."""
        t1 = np.asarray(t1, dtype=float)
        scalar = t1.ndim == 0
        t1 = np.atleast_1d(t1)
        if np.any(t1 <= 0.0) or np.any(t1 >= 1.0):
            raise ConfigError("t1 must lie in (0, 1)")
        if self.mode == "constant":
            out = np.full(t1.shape, self.constant_level)
        else:
            c1 = self._full_constant(1)
            if c1 is not None:
                return c1 if scalar else np.full(t1.shape, c1)
            out = self._piecewise_eval((t1,), 1)
        out = self._check_range(out)
        return float(out[0]) if scalar else out

    def triple(self, t1, t2, t3):
        """Triple-argument level with fallback to single(t1) above threshold."""
        t1 = np.asarray(t1, dtype=float)
        t2 = np.asarray(t2, dtype=float)
        t3 = np.asarray(t3, dtype=float)
        if not (t1.shape == t2.shape == t3.shape):
            t1, t2, t3 = np.broadcast_arrays(t1, t2, t3)
        scalar = t1.ndim == 0
        t1, t2, t3 = np.atleast_1d(t1), np.atleast_1d(t2), np.atleast_1d(t3)
        if ((t3 <= 0.0).any() or (t1 < t2 - 1e-12).any()
                or (t2 < t3 - 1e-12).any()):
            raise ConfigError("triple level requires t1 >= t2 >= t3 > 0")
        if self.mode == "constant":
            out = np.full(t1.shape, self.constant_level)
        else:
            c3, c1 = self._full_constant(3), self._full_constant(1)
            if c3 is not None and c3 == c1:
                return c3 if scalar else np.full(t1.shape, c3)
            fallback = t1 > self.triple_threshold
            out = self._piecewise_eval((t1, t2, t3), 3, where=~fallback)
            if fallback.any():
                out = np.where(fallback,
                               self._piecewise_eval((t1,), 1, where=fallback),
                               out)
        out = self._check_range(out)
        return float(out[0]) if scalar else out


def level_single(provider: LevelProvider, t1: float) -> float:
    return float(np.asarray(provider.single(t1)))


def level_triple(provider: LevelProvider, t1: float, t2: float, t3: float) -> float:
    return float(np.asarray(provider.triple(t1, t2, t3)))


@dataclass(frozen=True)
class ExponentVector:
    """Moduli-factorization exponents (descending) plus the level exponent."""

    ts: tuple
    theta: float

    def __post_init__(self):
        if len(self.ts) == 0 or len(self.ts) > 4:
            raise ValueError("exponent vector must have 1..4 components")
        if any(t <= 0.0 for t in self.ts):
            raise ValueError("exponents must be positive")
        if any(t >= 1.0 for t in self.ts):
            raise ValueError("exponents must be below 1")
        if any(a < b for a, b in zip(self.ts, self.ts[1:])):
            raise ValueError("exponents must be non-increasing")


def well_factorable_exponents(v: ExponentVector) -> bool:
    """True iff t1+...+t_{m-1} + 2 t_m < theta (strict) for every m."""
    partial = 0.0
    for t in v.ts:
        if not partial + 2.0 * t < v.theta:
            return False
        partial += t
    return True


def well_factorable_indicator(ts: list[np.ndarray], theta) -> np.ndarray:
    """Vectorized strict well-factorable indicator over exponent arrays."""
    arrays = np.broadcast_arrays(*[np.asarray(t, dtype=float) for t in ts])
    theta = np.asarray(theta, dtype=float)
    ok = np.ones(arrays[0].shape, dtype=bool)
    partial = np.zeros(arrays[0].shape)
    for t in arrays:
        ok &= partial + 2.0 * t < theta
        partial = partial + t
    return ok.astype(float)

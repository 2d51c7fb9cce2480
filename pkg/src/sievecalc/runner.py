"""Top-level evaluation driver: provider resolution, whole-theorem runs,
and optional multi-process term evaluation (SIEVECALC_THREADS).

Term specifications hold closures and are not picklable, so the parallel
path ships only the run configuration to each worker, which rebuilds its
registry locally (cheap next to the integrals themselves).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .levels import ConfigError, LevelProvider
from .terms.base import eval_term, make_context
from .terms.goldbach import GOLDBACH_TERM_IDS, term_registry_goldbach
from .terms.twin import TWIN_TERM_IDS, term_registry_twin

__all__ = [
    "RunConfig",
    "registry_for",
    "resolve_provider",
    "run_terms",
    "term_ids_for",
    "thread_count",
]

_FAMILY_ALPHA = {"goldbach": "theta1", "twin": "theta0"}

# Published switched-set constants, used as the default pins so that every
# other term reproduces independently of this one evaluation.
PUBLISHED_G = {"G1": 6.06932, "G2": 5.81637}

DEFAULT_TOL_1D = 1e-7


@dataclass(frozen=True)
class RunConfig:
    """Picklable description of one evaluation setting."""

    family: str
    levels: str = "bundled"        # bundled | cap | baseline | constant:<v> | <path>
    pinned_k: float | None = 12.3  # None = optimize per term
    pin_G1: float | None = PUBLISHED_G["G1"]
    pin_G2: float | None = PUBLISHED_G["G2"]
    tol: float = DEFAULT_TOL_1D    # 1D/2D tolerance; 3D/4D scale with it

    def __post_init__(self):
        if self.family not in _FAMILY_ALPHA:
            raise ConfigError(f"unknown family {self.family!r}")
        if not self.tol > 0.0:
            raise ConfigError("tolerance must be positive")
        for name in ("pinned_k", "pin_G1", "pin_G2"):
            v = getattr(self, name)
            if v is not None and not v > 0.0:
                raise ConfigError(f"{name} must be positive")


def resolve_provider(levels: str, alpha: str) -> LevelProvider:
    """Map a --levels argument to a provider for the given setting."""
    if levels == "bundled":
        return LevelProvider.bundled(alpha)
    if levels == "cap":
        return LevelProvider.cap(alpha)
    if levels == "baseline":
        return LevelProvider.constant(alpha, 0.5)
    if levels.startswith("constant:"):
        try:
            value = float(levels.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad constant level in {levels!r}") from exc
        return LevelProvider.constant(alpha, value)
    if os.path.exists(levels):
        return LevelProvider.from_file(levels, alpha)
    raise ConfigError(f"levels argument {levels!r} is neither a known mode "
                      "nor an existing file")


def registry_for(family: str) -> dict:
    if family == "goldbach":
        return {s.id: s for s in term_registry_goldbach()}
    if family == "twin":
        return {s.id: s for s in term_registry_twin()}
    raise ConfigError(f"unknown family {family!r}")


def term_ids_for(family: str) -> tuple:
    return GOLDBACH_TERM_IDS if family == "goldbach" else TWIN_TERM_IDS


def _tol_by_dim(tol: float) -> tuple:
    scale = tol / DEFAULT_TOL_1D
    return (tol, tol, 1e-6 * scale, 5e-6 * scale)


def build_context(cfg: RunConfig, specs: dict | None = None):
    """EvalContext for a run config, wiring the switched-set resolver so an
    unpinned constant is computed from its own specification on demand."""
    specs = specs if specs is not None else registry_for(cfg.family)
    provider = resolve_provider(cfg.levels, _FAMILY_ALPHA[cfg.family])
    ctx = make_context(cfg.family, provider=provider, pinned_k=cfg.pinned_k,
                       pin_G1=cfg.pin_G1, pin_G2=cfg.pin_G2,
                       tol_by_dim=_tol_by_dim(cfg.tol))

    def g_resolver(which: str) -> float:
        sub = make_context(cfg.family, provider=provider,
                           pinned_k=cfg.pinned_k,
                           tol_by_dim=_tol_by_dim(cfg.tol))
        return eval_term(specs[which], sub).value

    ctx.g_resolver = g_resolver
    return ctx, specs


def _eval_one(cfg: RunConfig, term_id: str):
    ctx, specs = build_context(cfg)
    if term_id not in specs:
        raise ConfigError(f"unknown term {term_id!r} for family {cfg.family}")
    return eval_term(specs[term_id], ctx)


def thread_count() -> int:
    raw = os.environ.get("SIEVECALC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"SIEVECALC_THREADS={raw!r} is not an integer") from exc
    if n < 1:
        raise ConfigError("SIEVECALC_THREADS must be >= 1")
    return n


def run_terms(cfg: RunConfig, term_ids=None, threads: int | None = None) -> dict:
    """Evaluate the requested terms (default: the family's full registry)."""
    ids = tuple(term_ids) if term_ids is not None else term_ids_for(cfg.family)
    threads = thread_count() if threads is None else threads
    if threads == 1 or len(ids) == 1:
        ctx, specs = build_context(cfg)
        out = {}
        for tid in ids:
            if tid not in specs:
                raise ConfigError(
                    f"unknown term {tid!r} for family {cfg.family}")
            out[tid] = eval_term(specs[tid], ctx)
        return out
    # The integrals are CPU-bound pure Python, so parallelism is by process.
    import multiprocessing as mp
    with ProcessPoolExecutor(max_workers=min(threads, len(ids)),
                             mp_context=mp.get_context("fork")) as pool:
        futures = {tid: pool.submit(_eval_one, cfg, tid) for tid in ids}
        return {tid: fut.result() for tid, fut in futures.items()}

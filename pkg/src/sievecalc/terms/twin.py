"""Term registry for the shifted-prime bound (second theorem).

Seventeen declarative specs: sixteen sieve terms plus the switched-set
constant G2.  Breakpoints are 1/12 and 1/7.2; two terms are negligible and
registered as exact zeros.
"""

from __future__ import annotations

from ..constants import EXP_GAMMA, TWIN_K1, TWIN_K2
from ..expr import (
    C,
    Fn,
    GConst,
    Indicator,
    Integral,
    KOpt,
    LevelSingle,
    LevelTriple,
    LogE,
    MaxE,
    MinE,
    V,
    WellMargin,
    axis,
)
from .base import PREF_TWIN, TermSpec, expansion_pieces, piece

__all__ = ["term_registry_twin", "TWIN_TERM_IDS"]

K1 = 12.0
K2 = 7.2
L1 = TWIN_K1                    # 1/12
L2 = TWIN_K2                    # 1/7.2
TWO7 = 2.0 / 7.0
SEVENTEEN42 = 17.0 / 42.0

t, t1, t2, t3, t4, k = V("t"), V("t1"), V("t2"), V("t3"), V("t4"), V("k")


def _spec_Sp1():
    return TermSpec("S'1", "twin", "lower", "theta_conditional", PREF_TWIN,
                    expansion_pieces(L1, "F", "f", "F", "f"))


def _spec_Sp2():
    return TermSpec("S'2", "twin", "lower", "theta_conditional", PREF_TWIN,
                    expansion_pieces(L2, "F", "f", "F", "f"))


def _lower_2d(lo1, hi1, lo2, hi2) -> tuple:
    """Max of the 12-branch and a k-maximized branch with its 1D correction."""
    branch_a = (C(K1)
                * Fn("f", C(K1) * (LevelTriple(t1, t2, C(L1)) - t1 - t2))
                / (t1 * t2))
    inner_ff = Integral(
        (axis("t3", C(1.0) / k, L1),),
        Fn("F", (LevelTriple(t1, t2, t3) - t1 - t2 - t3) / t3)
        / (t1 * t2 * t3 * t3))
    branch_k = (k * Fn("f", k * (LevelTriple(t1, t2, C(1.0) / k) - t1 - t2))
                / (t1 * t2) - inner_ff)
    integrand = MaxE(branch_a, KOpt("k", branch_k, K1, 500.0, "max"))
    return (piece(1.0, (axis("t1", lo1, hi1), axis("t2", lo2, hi2)),
                  integrand),)


def _spec_Sp3():
    return TermSpec("S'3", "twin", "lower", "theta_conditional", PREF_TWIN,
                    _lower_2d(L1, L2, L1, t1), has_k_branch=True)


def _spec_Sp4():
    return TermSpec("S'4", "twin", "lower", "theta_conditional", PREF_TWIN,
                    _lower_2d(L2, 0.25, L1, L2), has_k_branch=True)


def _spec_Sp5():
    e = (C(K1) * Fn("f", C(K1) * (LevelSingle(t2) - t1 - t2)) / (t1 * t2))
    axes = (axis("t1", L1, L2),
            axis("t2", 0.25, MinE(C(TWO7), C(SEVENTEEN42) - t1)))
    return TermSpec("S'5", "twin", "lower", "theta_conditional", PREF_TWIN,
                    (piece(1.0, axes, e),))


def _spec_Sp6():
    branch_a = (C(K1)
                * Fn("F", C(K1) * (LevelTriple(t1, C(L1), C(L1)) - t1)) / t1)
    inner_f = Integral(
        (axis("t2", C(1.0) / k, L1),),
        k * Fn("f", k * (LevelTriple(t1, t2, C(1.0) / k) - t1 - t2))
        / (t1 * t2))
    inner_ff = Integral(
        (axis("t2", C(1.0) / k, L1), axis("t3", C(1.0) / k, t2)),
        Fn("F", (LevelTriple(t1, t2, t3) - t1 - t2 - t3) / t3)
        / (t1 * t2 * t3 * t3))
    branch_k = (k * Fn("F", k * (LevelTriple(t1, C(1.0) / k, C(1.0) / k) - t1))
                / t1 - inner_f + inner_ff)
    integrand = MinE(branch_a, KOpt("k", branch_k, K1, 500.0, "min"))
    return TermSpec("S'6", "twin", "upper", "theta_conditional", PREF_TWIN,
                    (piece(1.0, (axis("t1", L1, 0.25),), integrand),),
                    has_k_branch=True)


def _spec_Sp7():
    branch_a = C(K1) * Fn("F", C(K1) * (LevelSingle(t1) - t1)) / t1
    inner_f = Integral(
        (axis("t2", C(1.0) / k, L1),),
        Fn("f", (LevelSingle(t1) - t1 - t2) / t2) / (t1 * t2 * t2))
    branch_k = k * Fn("F", k * (LevelSingle(t1) - t1)) / t1 - inner_f
    integrand = MinE(branch_a, KOpt("k", branch_k, K1, 500.0, "min"))
    return TermSpec("S'7", "twin", "upper", "theta_conditional", PREF_TWIN,
                    (piece(1.0, (axis("t1", 0.25, TWO7),), integrand),),
                    has_k_branch=True)


def _spec_Sp8():
    # Negligible: absorbed into the epsilon losses; exact zero contribution.
    return TermSpec("S'8", "twin", "upper", "theta_free", C(1.0), ())


def _spec_Sp9():
    e = Fn("F", t) / (C(2.0 * K1) - t)
    lo = (11.0 / 20.0 - 29.0 / 100.0) * K1          # 3.12
    hi = (4.0 / 7.0 - 2.0 / 7.0) * K1               # 24/7
    return TermSpec("S'9", "twin", "upper", "theta_free",
                    C(K1 / EXP_GAMMA), (piece(1.0, (axis("t", lo, hi),), e),))


def _spec_Sp10():
    e = Fn("F", t) / (C(11.0 / 20.0 * K1) - t)
    lo = (11.0 / 20.0 - 1.0 / 3.0) * K1             # 2.6
    hi = (11.0 / 20.0 - 29.0 / 100.0) * K1          # 3.12
    return TermSpec("S'10", "twin", "upper", "theta_free",
                    C(K1 / EXP_GAMMA), (piece(1.0, (axis("t", lo, hi),), e),))


def _spec_Sp11():
    return TermSpec("S'11", "twin", "upper", "theta_free", C(1.0), ())


def _log_term(tid, lo, hi, log_arg):
    e = LogE(log_arg) / t
    return TermSpec(tid, "twin", "upper", "G_conditional",
                    PREF_TWIN * GConst("G2"),
                    (piece(1.0, (axis("t", lo, hi),), e),))


def _spec_Sp12():
    return _log_term("S'12", 2.0, 11.0, C(2.0) - C(3.0) / (t + C(1.0)))


def _spec_Sp13():
    return _log_term("S'13", 2.5, 6.2, C(2.5) - C(3.5) / (t + C(1.0)))


def _spec_Sp14():
    return _log_term("S'14", 2.0, 2.5, t - C(1.0))


def _spec_Sp15():
    theta = LevelTriple(t1, t2, t3)
    total = t1 + t2 + t3 + t4
    ind = Indicator(WellMargin((t1, t2, t3, t4), theta))
    f_branch = (PREF_TWIN * Fn("F", (theta - total) / t4, invalid="inf")
                / (t1 * t2 * t3 * t4 * t4))
    w_branch = (PREF_TWIN * GConst("G2")
                * Fn("omega", (C(1.0) - total) / t3)
                / (t1 * t2 * t3 * t3 * t4))
    integrand = ind * MinE(f_branch, w_branch) + (C(1.0) - ind) * w_branch
    axes = (axis("t1", L1, L2), axis("t2", L1, t1),
            axis("t3", L1, t2), axis("t4", L1, t3))
    return TermSpec("S'15", "twin", "upper", "theta_conditional",
                    C(1.0), (piece(1.0, axes, integrand),))


def _spec_Sp16():
    theta = LevelTriple(t4, t3, t2)
    total = t1 + t2 + t3 + t4
    ind = Indicator(WellMargin((t4, t3, t2, t1), theta))
    f_branch = (PREF_TWIN * Fn("F", (theta - total) / t1, invalid="inf")
                / (t1 * t1 * t2 * t3 * t4))
    w_branch = (PREF_TWIN * GConst("G2")
                * Fn("omega", (C(1.0) - total) / t2)
                / (t1 * t2 * t2 * t3 * t4))
    integrand = ind * MinE(f_branch, w_branch) + (C(1.0) - ind) * w_branch
    axes = (axis("t1", L1, L2), axis("t2", t1, L2), axis("t3", t2, L2),
            axis("t4", L2, MinE(C(TWO7), C(SEVENTEEN42) - t3)))
    return TermSpec("S'16", "twin", "upper", "theta_conditional",
                    C(1.0), (piece(1.0, axes, integrand),))


def _spec_G2():
    return TermSpec("G2", "twin", "upper", "theta_conditional", C(1.0),
                    expansion_pieces(1.0 / 5.0, "f", "F", "f", "F"))


TWIN_TERM_IDS = tuple(f"S'{i}" for i in range(1, 17)) + ("G2",)

_BUILDERS = {
    "S'1": _spec_Sp1, "S'2": _spec_Sp2, "S'3": _spec_Sp3, "S'4": _spec_Sp4,
    "S'5": _spec_Sp5, "S'6": _spec_Sp6, "S'7": _spec_Sp7, "S'8": _spec_Sp8,
    "S'9": _spec_Sp9, "S'10": _spec_Sp10, "S'11": _spec_Sp11,
    "S'12": _spec_Sp12, "S'13": _spec_Sp13, "S'14": _spec_Sp14,
    "S'15": _spec_Sp15, "S'16": _spec_Sp16, "G2": _spec_G2,
}

_REGISTRY = None


def term_registry_twin() -> list:
    """All seventeen specs (S'1..S'16 and G2), built once and cached."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = [_BUILDERS[tid]() for tid in TWIN_TERM_IDS]
    return list(_REGISTRY)

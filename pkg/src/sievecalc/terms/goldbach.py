"""Term registry for the even-integer representation bound (first theorem).

Sixteen declarative specs: fifteen sieve terms plus the switched-set
constant G1.  Signs and integration limits follow the weighted-sieve
decomposition with breakpoints 1/11.49 and 1/6.18.
"""

from __future__ import annotations

from ..constants import EXP_GAMMA, KAPPA1, KAPPA2
from ..expr import (
    C,
    Fn,
    GConst,
    Indicator,
    Integral,
    KOpt,
    LevelSingle,
    LevelTriple,
    MinE,
    V,
    WellMargin,
    axis,
)
from .base import PREF_GOLDBACH, TermSpec, expansion_pieces, piece

__all__ = ["term_registry_goldbach", "GOLDBACH_TERM_IDS"]

K1 = 11.49
K2 = 6.18
L1 = KAPPA1                     # 1/11.49
L2 = KAPPA2                     # 1/6.18
T25 = 25.0 / 128.0
B3 = 0.5 - 3.0 / K1             # upper sifting edge of the 1D upper terms
B2 = 0.5 - 2.0 / K1
SPLIT9 = 0.5 - 2.0 / K2
CAP39 = 39.0 / 256.0
CAP15 = 1.5 / K1
TEG = 2.0 * EXP_GAMMA

t, t1, t2, t3, t4, k = V("t"), V("t1"), V("t2"), V("t3"), V("t4"), V("k")


def _savings_H(kk, tt1):
    """Double-sieve saving 2k e^g H(k(1/2-t1)) / ((k(1/2-t1)) t1)."""
    arg = kk * (C(0.5) - tt1)
    return C(TEG) * kk * Fn("H", arg) / (arg * tt1)


def _upper_1d(lo, hi, level_expr_of, with_H: bool) -> tuple:
    """Shared shape of the 1D upper terms: pointwise min of the 11.49-branch
    and a k-optimized branch carrying the single-variable sifting correction."""
    lvl1 = level_expr_of()
    branch_a = C(K1) * Fn("F", C(K1) * (lvl1 - t1)) / t1
    if with_H:
        branch_a = branch_a - _savings_H(C(K1), t1)
    inner_f = Integral(
        (axis("t2", C(1.0) / k, L1),),
        Fn("f", (lvl1 - t1 - t2) / t2) / (t1 * t2 * t2))
    branch_b = k * Fn("F", k * (lvl1 - t1)) / t1 - inner_f
    if with_H:
        branch_b = branch_b - _savings_H(k, t1)
    integrand = MinE(branch_a, KOpt("k", branch_b, K1, 500.0, "min"))
    return (piece(1.0, (axis("t1", lo, hi),), integrand),)


def _spec_S1():
    return TermSpec("S1", "goldbach", "lower", "theta_conditional",
                    PREF_GOLDBACH, expansion_pieces(L1, "F", "f", "F", "f"))


def _spec_S2():
    return TermSpec("S2", "goldbach", "lower", "theta_conditional",
                    PREF_GOLDBACH, expansion_pieces(L2, "F", "f", "F", "f"))


def _spec_S3():
    lvl_a = LevelTriple(t1, C(L1), C(L1))
    branch_a = (C(K1) * Fn("F", C(K1) * (lvl_a - t1)) / t1
                - _savings_H(C(K1), t1))
    lvl_k = LevelTriple(t1, C(1.0) / k, C(1.0) / k)
    inner_f = Integral(
        (axis("t2", C(1.0) / k, L1),),
        k * Fn("f", k * (LevelTriple(t1, t2, C(1.0) / k) - t1 - t2))
        / (t1 * t2))
    harg = k * (C(0.5) - t1 - t2)
    inner_h = Integral(
        (axis("t2", C(1.0) / k, L1),),
        C(TEG) * k * Fn("h", harg) / (harg * t1 * t2))
    inner_ff = Integral(
        (axis("t2", C(1.0) / k, L1), axis("t3", C(1.0) / k, t2)),
        Fn("F", (LevelTriple(t1, t2, t3) - t1 - t2 - t3) / t3)
        / (t1 * t2 * t3 * t3))
    branch_b = (k * Fn("F", k * (lvl_k - t1)) / t1
                - _savings_H(k, t1) - inner_f - inner_h + inner_ff)
    integrand = MinE(branch_a, KOpt("k", branch_b, K1, 500.0, "min"))
    return TermSpec("S3", "goldbach", "upper", "theta_conditional",
                    PREF_GOLDBACH,
                    (piece(1.0, (axis("t1", L1, T25),), integrand),),
                    has_k_branch=True)


def _spec_S4():
    return TermSpec("S4", "goldbach", "upper", "theta_conditional",
                    PREF_GOLDBACH,
                    _upper_1d(T25, 0.25, lambda: LevelSingle(t1), True),
                    has_k_branch=True)


def _spec_S5():
    return TermSpec("S5", "goldbach", "upper", "theta_conditional",
                    PREF_GOLDBACH,
                    _upper_1d(0.25, 57.0 / 224.0, lambda: LevelSingle(t1),
                              False),
                    has_k_branch=True)


def _spec_S6():
    integrand = C(K1) * Fn("F", C(K1) * (C(0.5) - t)) / t
    return TermSpec("S6", "goldbach", "upper", "theta_free", PREF_GOLDBACH,
                    (piece(1.0, (axis("t", 57.0 / 224.0, 1.0 / 3.0),),
                           integrand),))


def _spec_S7():
    return TermSpec("S7", "goldbach", "upper", "theta_conditional",
                    PREF_GOLDBACH,
                    _upper_1d(T25, B3, lambda: LevelSingle(t1), True),
                    has_k_branch=True)


def _f_saving(lo1, hi1, lo2, hi2):
    e = (C(K1) * Fn("f", C(K1) * (LevelTriple(t1, t2, C(L1)) - t1 - t2))
         / (t1 * t2))
    return piece(1.0, (axis("t1", lo1, hi1), axis("t2", lo2, hi2)), e)


def _h_saving(lo1, hi1, lo2, hi2):
    harg = C(K1) * (C(0.5) - t1 - t2)
    e = C(K1) * C(TEG) * Fn("h", harg) / (harg * t1 * t2)
    return piece(1.0, (axis("t1", lo1, hi1), axis("t2", lo2, hi2)), e)


def _spec_S8():
    return TermSpec("S8", "goldbach", "lower", "theta_conditional",
                    PREF_GOLDBACH,
                    (_f_saving(L1, L2, L1, t1), _h_saving(L1, L2, L1, t1)))


def _spec_S9():
    return TermSpec("S9", "goldbach", "lower", "theta_conditional",
                    PREF_GOLDBACH,
                    (_f_saving(L2, T25, L1, L2),
                     _h_saving(L2, SPLIT9, L1, L2),
                     _h_saving(SPLIT9, T25, L1, CAP39)))


def _spec_S10():
    return TermSpec("S10", "goldbach", "lower", "theta_conditional",
                    PREF_GOLDBACH,
                    (_f_saving(T25, B3, L1, L2),
                     _h_saving(T25, B3, L1, CAP15)))


def _omega_double(lo1, hi1, lo2, hi2):
    e = Fn("omega", (C(1.0) - t1 - t2) / t2) / (t1 * t2 * t2)
    return piece(1.0, (axis("t1", lo1, hi1), axis("t2", lo2, hi2)), e)


def _spec_S11():
    return TermSpec("S11", "goldbach", "upper", "G_conditional",
                    PREF_GOLDBACH * GConst("G1"),
                    (_omega_double(B3, 1.0 / 3.0, t1, (C(1.0) - t1) * 0.5),))


def _spec_S12():
    return TermSpec("S12", "goldbach", "upper", "G_conditional",
                    PREF_GOLDBACH * GConst("G1"),
                    (_omega_double(L1, 1.0 / 3.0, 1.0 / 3.0,
                                   (C(1.0) - t1) * 0.5),))


def _spec_S13():
    e = C(1.0) / (t1 * t2 * (C(1.0) - t1 - t2))
    return TermSpec("S13", "goldbach", "upper", "G_conditional",
                    PREF_GOLDBACH * GConst("G1"),
                    (piece(1.0, (axis("t1", L2, B3),
                                 axis("t2", B3, (C(1.0) - t1) * 0.5)), e),))


def _spec_S14():
    theta = LevelTriple(t1, t2, t3)
    total = t1 + t2 + t3 + t4
    ind = Indicator(WellMargin((t1, t2, t3, t4), theta))
    f_branch = (PREF_GOLDBACH * Fn("F", (theta - total) / t4, invalid="inf")
                / (t1 * t2 * t3 * t4 * t4))
    w_branch = (PREF_GOLDBACH * GConst("G1")
                * Fn("omega", (C(1.0) - total) / t3)
                / (t1 * t2 * t3 * t3 * t4))
    integrand = ind * MinE(f_branch, w_branch) + (C(1.0) - ind) * w_branch
    axes = (axis("t1", L1, L2), axis("t2", L1, t1),
            axis("t3", L1, t2), axis("t4", L1, t3))
    return TermSpec("S14", "goldbach", "upper", "theta_conditional",
                    C(1.0), (piece(1.0, axes, integrand),))


def _spec_S15():
    theta = LevelTriple(t4, t3, t2)
    total = t1 + t2 + t3 + t4
    ind = Indicator(WellMargin((t4, t3, t2, t1), theta))
    f_branch = (PREF_GOLDBACH * Fn("F", (theta - total) / t1, invalid="inf")
                / (t1 * t1 * t2 * t3 * t4))
    w_branch = (PREF_GOLDBACH * GConst("G1")
                * Fn("omega", (C(1.0) - total) / t2)
                / (t1 * t2 * t2 * t3 * t4))
    integrand = ind * MinE(f_branch, w_branch) + (C(1.0) - ind) * w_branch
    axes = (axis("t1", L1, L2), axis("t2", t1, L2),
            axis("t3", t2, L2), axis("t4", L2, C(B2) - t3))
    return TermSpec("S15", "goldbach", "upper", "theta_conditional",
                    C(1.0), (piece(1.0, axes, integrand),))


def _spec_G1():
    return TermSpec("G1", "goldbach", "upper", "theta_conditional", C(1.0),
                    expansion_pieces(T25, "f", "F", "f", "F"))


GOLDBACH_TERM_IDS = tuple(f"S{i}" for i in range(1, 16)) + ("G1",)

_BUILDERS = {
    "S1": _spec_S1, "S2": _spec_S2, "S3": _spec_S3, "S4": _spec_S4,
    "S5": _spec_S5, "S6": _spec_S6, "S7": _spec_S7, "S8": _spec_S8,
    "S9": _spec_S9, "S10": _spec_S10, "S11": _spec_S11, "S12": _spec_S12,
    "S13": _spec_S13, "S14": _spec_S14, "S15": _spec_S15, "G1": _spec_G1,
}

_REGISTRY = None


def term_registry_goldbach() -> list:
    """All sixteen specs (S1..S15 and G1), built once and cached."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = [_BUILDERS[tid]() for tid in GOLDBACH_TERM_IDS]
    return list(_REGISTRY)

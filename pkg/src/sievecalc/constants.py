"""Shared numerical constants and sieve breakpoints."""

import math

EULER_GAMMA = 0.5772156649015329
EXP_GAMMA = math.exp(EULER_GAMMA)          # e^gamma = 1.7810724179901979
TWO_EXP_GAMMA = 2.0 * EXP_GAMMA            # 2 e^gamma = 3.5621448359803958

# Level settings: exponent toward GRH-type progress (theta) per setting and
# the maximum admissible distribution level in each setting.
THETA1 = 7.0 / 32.0
THETA0 = 0.0
CAP_THETA1 = 19101.0 / 32000.0             # 0.59690625
CAP_THETA0 = 2497.0 / 4000.0               # 0.62425

# Triple-argument level admissibility thresholds on t1.
TRIPLE_THRESHOLD_THETA1 = (1.0 - THETA1) / 4.0                     # 25/128
TRIPLE_THRESHOLD_THETA0 = (1.0 - THETA0) / (4.0 - 3.0 * THETA0)    # 1/4

# Smallest sifting exponent used throughout the decompositions.
U_DEFAULT = 1.0 / 500.0

# Sifting-parameter breakpoints of the goldbach-side decomposition.
KAPPA1 = 1.0 / 11.49
KAPPA2 = 1.0 / 6.18

# Breakpoints of the twin-side decomposition.
TWIN_K1 = 1.0 / 12.0
TWIN_K2 = 1.0 / 7.2


def euler_gamma() -> float:
    """Euler-Mascheroni constant to full double precision."""
    return EULER_GAMMA

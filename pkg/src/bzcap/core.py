"""Scalar information-theoretic primitives shared by every other module.

Binary entropy in nats and bits, the two auxiliary functions ``phi`` and
``psi`` that parameterize the optimal operating points of the broadcast
Z channel, and a bracketing root-finder for monotone scalar functions.

All internal math is carried in nats; conversion to bits happens only at
reporting boundaries.
"""

from __future__ import annotations

import math
from typing import Callable

__all__ = [
    "LN2",
    "entropy_nats",
    "entropy_bits",
    "phi",
    "psi",
    "solve_monotone_root",
]

LN2 = math.log(2.0)


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name}={p!r} is not a probability in [0, 1]")
    return p


def entropy_nats(p: float) -> float:
    """Binary entropy -p*ln(p) - (1-p)*ln(1-p) in nats, with 0*ln(0) := 0."""
    p = _check_probability(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -p * math.log(p) - q * math.log(q)


def entropy_bits(p: float) -> float:
    """Binary entropy in bits: ``entropy_nats(p) / ln 2``."""
    return entropy_nats(p) / LN2


def phi(x: float, ch) -> float:
    """Ratio ln(1-(1-alpha1)x) / ln(1-(1-alpha2)x), continuously extended at 0.

    Strictly increasing in x on [0, 1] whenever alpha1 < alpha2.  The value
    at a given x is the trade-off multiplier at which that x is the optimal
    conditional zero-probability of the stronger user.

    ``ch`` is any object with ``alpha1`` and ``alpha2`` attributes.
    """
    x = _check_probability(x, "x")
    a1, a2 = ch.alpha1, ch.alpha2
    if x == 0.0:
        return (1.0 - a1) / (1.0 - a2)
    denom_arg = 1.0 - (1.0 - a2) * x
    if denom_arg <= 0.0:
        raise ValueError(f"phi undefined: 1-(1-alpha2)x = {denom_arg} <= 0")
    return math.log1p(-(1.0 - a1) * x) / math.log(denom_arg)


def psi(x: float) -> float:
    """The map 1 / (x*e^{H(x)/x} + x) with H in nats; psi(x) is in (0, 1).

    psi(1-alpha) is the optimal zero-probability of a single-user Z channel
    with crossover alpha, and supplies the endpoints of the boundary sweep.
    """
    x = _check_probability(x, "x")
    if x == 0.0:
        raise ValueError("psi undefined at x = 0")
    return 1.0 / (x * math.exp(entropy_nats(x) / x) + x)


def solve_monotone_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> float:
    """Bisection root of a monotone function on a bracketing interval.

    Requires f(lo) and f(hi) to have opposite signs (or one to be zero).
    Deterministic: the same inputs always produce the same root estimate,
    with final bracket width at most ``tol``.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not lo < hi:
        raise ValueError(f"invalid bracket: lo={lo} >= hi={hi}")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ValueError(
            f"f does not bracket a root on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket at floating-point resolution
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)

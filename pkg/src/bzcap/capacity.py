"""Rate formulas and the explicit optimal boundary of the broadcast Z channel.

For a strategy (mu1, mu2, gamma) the two users' achievable rates have closed
forms in the binary entropy function; the optimal boundary is swept by
gamma = 0 strategies whose (mu1, mu2) satisfy one scalar equation per point.
Every boundary point maximizes I1 + lambda*I2 for its trade-off multiplier
lambda = phi(mu1).

All rates here are in nats; ``RatePair`` exposes bit conversions for
reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import BroadcastZChannelParams, Strategy
from .core import LN2, entropy_nats, phi, psi, solve_monotone_root

__all__ = [
    "RatePair",
    "BoundaryPoint",
    "rates_general",
    "rates_independent",
    "solve_mu2",
    "optimal_for_lambda",
    "trace_boundary",
    "endpoint_tangent_slopes",
]

_NEG_DUST = -1e-12


def _clamp_rate(r: float, label: str) -> float:
    if r < 0.0:
        if r < _NEG_DUST:
            raise ValueError(f"{label} = {r} is negative beyond floating-point dust")
        return 0.0
    return r


@dataclass(frozen=True)
class RatePair:
    """Achievable rate pair (r1, r2) in nats; negative dust is clamped to 0."""

    r1: float
    r2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "r1", _clamp_rate(float(self.r1), "r1"))
        object.__setattr__(self, "r2", _clamp_rate(float(self.r2), "r2"))

    @property
    def r1_bits(self) -> float:
        return self.r1 / LN2

    @property
    def r2_bits(self) -> float:
        return self.r2 / LN2


@dataclass(frozen=True)
class BoundaryPoint:
    """One point of the optimal boundary: strategy hooks plus its rate pair.

    ``lam`` is the trade-off multiplier at which (mu1, mu2) maximizes
    I1 + lam * I2; boundary points always have gamma = 0.
    """

    mu1: float
    mu2: float
    lam: float
    rates: RatePair


def rates_general(s: Strategy, ch: BroadcastZChannelParams) -> RatePair:
    """Rate pair (I1, I2) in nats for an arbitrary strategy (mu1, mu2, gamma).

    I2 = H((m2b*g + m2*m1)(1-a2)) - m2b*H(g(1-a2)) - m2*H(m1(1-a2))
    I1 = m2b*(H(g(1-a1)) - g*H(1-a1)) + m2*(H(m1(1-a1)) - m1*H(1-a1))
    with m2b = 1 - mu2.
    """
    a1, a2 = ch.alpha1, ch.alpha2
    m1, m2, g = s.mu1, s.mu2, s.gamma
    m2b = 1.0 - m2
    i2 = (
        entropy_nats((m2b * g + m2 * m1) * (1.0 - a2))
        - m2b * entropy_nats(g * (1.0 - a2))
        - m2 * entropy_nats(m1 * (1.0 - a2))
    )
    i1 = m2b * (entropy_nats(g * (1.0 - a1)) - g * entropy_nats(1.0 - a1)) + m2 * (
        entropy_nats(m1 * (1.0 - a1)) - m1 * entropy_nats(1.0 - a1)
    )
    return RatePair(i1, i2)


def rates_independent(mu1: float, mu2: float, ch: BroadcastZChannelParams) -> RatePair:
    """Rate pair (I1, I2) in nats for the gamma = 0 (independent encoding) case.

    I2 = H(mu2*mu1*(1-a2)) - mu2*H(mu1*(1-a2));
    I1 = mu2*H(mu1*(1-a1)) - mu2*mu1*H(1-a1).
    """
    a1, a2 = ch.alpha1, ch.alpha2
    i2 = entropy_nats(mu2 * mu1 * (1.0 - a2)) - mu2 * entropy_nats(mu1 * (1.0 - a2))
    i1 = mu2 * entropy_nats(mu1 * (1.0 - a1)) - mu2 * mu1 * entropy_nats(1.0 - a1)
    return RatePair(i1, i2)


def _pairing_residual(mu1: float, mu2: float, ch: BroadcastZChannelParams) -> float:
    """Residual of the boundary pairing equation linking mu2 to mu1.

    Zero exactly when (H(m1*x1) - m1*H(x1)) * ln(1 - m1*x2) equals
    (H(m1*x2) - m1*x2*ln((1 - m2*m1*x2)/(m2*m1*x2))) * ln(1 - m1*x1),
    where x1 = 1-alpha1 and x2 = 1-alpha2.
    """
    x1, x2 = 1.0 - ch.alpha1, 1.0 - ch.alpha2
    z = mu2 * mu1 * x2
    lhs = (entropy_nats(mu1 * x1) - mu1 * entropy_nats(x1)) * math.log1p(-mu1 * x2)
    rhs = (entropy_nats(mu1 * x2) - mu1 * x2 * math.log((1.0 - z) / z)) * math.log1p(
        -mu1 * x1
    )
    return lhs - rhs


def solve_mu2(mu1: float, ch: BroadcastZChannelParams) -> float:
    """The unique mu2 in (0, 1] paired with mu1 on the optimal boundary.

    Closed form: with lam = phi(mu1), A = H(mu1*(1-a1)) - mu1*H(1-a1) and
    c = (H(mu1*(1-a2)) - A/lam) / (mu1*(1-a2)), the pairing equation gives
    mu2 = 1 / (mu1*(1-a2)*(e^c + 1)).  The residual of the original
    equation is re-checked to 1e-10 before returning.
    """
    lo = psi(1.0 - ch.alpha1)
    if mu1 < lo - 1e-12:
        raise ValueError(
            f"mu1={mu1} below the boundary range [{lo}, 1]; no pairing root exists"
        )
    mu1 = min(max(mu1, lo), 1.0)
    x1, x2 = 1.0 - ch.alpha1, 1.0 - ch.alpha2
    lam = phi(mu1, ch)
    a_term = entropy_nats(mu1 * x1) - mu1 * entropy_nats(x1)
    c = (entropy_nats(mu1 * x2) - a_term / lam) / (mu1 * x2)
    mu2 = 1.0 / (mu1 * x2 * (math.exp(c) + 1.0))
    mu2 = min(mu2, 1.0)
    residual = _pairing_residual(mu1, mu2, ch)
    if abs(residual) > 1e-10:
        raise ArithmeticError(
            f"pairing residual {residual:.3e} exceeds 1e-10 at mu1={mu1}"
        )
    return mu2


def optimal_for_lambda(lam: float, ch: BroadcastZChannelParams) -> BoundaryPoint:
    """The boundary point maximizing I1 + lam*I2 for a trade-off lam >= 0.

    Small lam saturates the stronger user (mu2 = 1, mu1 = psi(1-alpha1));
    large lam saturates the weaker user (mu1 = 1, mu2 = psi(1-alpha2));
    in between, mu1 solves phi(mu1) = lam and mu2 follows from the pairing
    equation.
    """
    if lam < 0.0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    mu1_lo = psi(1.0 - ch.alpha1)
    lam_lo = phi(mu1_lo, ch)
    lam_hi = phi(1.0, ch)
    if lam <= lam_lo:
        mu1, mu2 = mu1_lo, 1.0
    elif lam >= lam_hi:
        mu1, mu2 = 1.0, psi(1.0 - ch.alpha2)
    else:
        mu1 = solve_monotone_root(lambda x: phi(x, ch) - lam, mu1_lo, 1.0, tol=1e-12)
        mu2 = solve_mu2(mu1, ch)
    return BoundaryPoint(mu1=mu1, mu2=mu2, lam=lam, rates=rates_independent(mu1, mu2, ch))


def trace_boundary(ch: BroadcastZChannelParams, n_points: int) -> list[BoundaryPoint]:
    """Sweep the optimal boundary with n_points values of mu1.

    mu1 runs over [psi(1-alpha1), 1] inclusive, ascending; the first point
    maximizes R1 alone (R2 = 0) and the last maximizes R2 alone (R1 = 0).
    """
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    lo = psi(1.0 - ch.alpha1)
    points = []
    for i in range(n_points):
        mu1 = lo + (1.0 - lo) * i / (n_points - 1)
        mu2 = solve_mu2(mu1, ch)
        points.append(
            BoundaryPoint(
                mu1=mu1,
                mu2=mu2,
                lam=phi(mu1, ch),
                rates=rates_independent(mu1, mu2, ch),
            )
        )
    return points


def endpoint_tangent_slopes(ch: BroadcastZChannelParams) -> tuple[float, float]:
    """Boundary tangent slopes dR2/dR1 at the two single-user endpoints.

    Returns (-1/phi(psi(1-alpha1)), -1/phi(1)): the slope where R2 = 0 and
    the slope where R1 = 0 respectively.
    """
    return (-1.0 / phi(psi(1.0 - ch.alpha1), ch), -1.0 / phi(1.0, ch))

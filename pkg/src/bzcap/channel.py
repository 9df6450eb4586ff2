"""Broadcast Z channel model and Monte Carlo machinery.

The Z channel maps input ``x`` to output ``x OR n`` with ``n`` a Bernoulli
noise bit, so a transmitted 1 is always received as 1 and a transmitted 0
flips with the channel's crossover probability.  The two-user broadcast
version has one transmitter and two such arms with crossovers
``alpha1 < alpha2``; the worse arm is statistically a degraded copy of the
better one, obtained by appending a third Z stage with crossover
``alpha_delta``.

This module provides seeded, reproducible sampling of all of these pieces,
the OR-superposition source used by independent encoding, and plug-in
mutual-information estimation with delta-method standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BroadcastZChannelParams",
    "Strategy",
    "RngStream",
    "EmpiricalRates",
    "DegradationReport",
    "make_channel",
    "sample_z",
    "sample_or_source",
    "empirical_rates",
    "verify_degradation",
]


@dataclass(frozen=True)
class BroadcastZChannelParams:
    """Crossover pair (alpha1, alpha2) plus the derived degradation stage.

    ``alpha_delta`` satisfies 1 - alpha2 = (1 - alpha1)(1 - alpha_delta):
    a Z(alpha1) arm followed by an independent Z(alpha_delta) stage has the
    same marginal as the Z(alpha2) arm.
    """

    alpha1: float
    alpha2: float
    alpha_delta: float = field(init=False)

    def __post_init__(self) -> None:
        a1, a2 = float(self.alpha1), float(self.alpha2)
        if not (0.0 < a1 < 1.0 and 0.0 < a2 < 1.0):
            raise ValueError(f"crossovers must lie strictly in (0,1): ({a1}, {a2})")
        if not a1 < a2:
            raise ValueError(f"require alpha1 < alpha2, got ({a1}, {a2})")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)
        object.__setattr__(self, "alpha_delta", (a2 - a1) / (1.0 - a1))


def make_channel(alpha1: float, alpha2: float) -> BroadcastZChannelParams:
    """Validated constructor for a two-arm broadcast Z channel."""
    return BroadcastZChannelParams(alpha1, alpha2)


@dataclass(frozen=True)
class Strategy:
    """Transmission strategy (mu1, mu2, gamma) of conditional zero-probabilities.

    mu2 = Pr(x2 = 0), mu1 = Pr(x = 0 | x2 = 0), gamma = Pr(x = 0 | x2 = 1).
    The triple (gamma, 1 - mu2, mu1) induces the same joint distribution of
    (x, x2)-statistics and therefore the same rate pair; ``canonical`` picks
    the representative with gamma <= mu1.
    """

    mu1: float
    mu2: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("mu1", "mu2", "gamma"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability in [0, 1]")
            object.__setattr__(self, name, v)

    def canonical(self) -> "Strategy":
        if self.gamma <= self.mu1:
            return self
        return Strategy(self.gamma, 1.0 - self.mu2, self.mu1)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: (seed, stream_id) fully determine output.

    Distinct stream ids give statistically independent substreams of the
    same seed, so Monte Carlo work can be sharded deterministically.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> np.random.Generator:
        """Generator for sub-unit ``index`` (e.g. one simulation frame).

        Keyed by (stream_id, index), so results do not depend on how work
        is batched across sub-units.
        """
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, index))
        return np.random.Generator(np.random.Philox(ss))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"rng must be RngStream or numpy Generator, got {type(rng)!r}")


def sample_z(x, alpha: float, rng) -> np.ndarray:
    """Pass bits through a Z channel: y = x OR Bernoulli(alpha).

    ``x`` may be a scalar bit or a bit array; the output has the same shape.
    A 1 is never received as 0.
    """
    gen = _as_generator(rng)
    x = np.asarray(x, dtype=np.int8)
    noise = (gen.random(x.shape) < alpha).astype(np.int8)
    return x | noise


def sample_or_source(mu1: float, mu2: float, rng, n: int = 1):
    """Draw (x1, x2, x = x1 OR x2) with Pr(x1=0)=mu1, Pr(x2=0)=mu2, independent.

    Returns three int8 arrays of length ``n``.
    """
    gen = _as_generator(rng)
    x1 = (gen.random(n) >= mu1).astype(np.int8)
    x2 = (gen.random(n) >= mu2).astype(np.int8)
    return x1, x2, x1 | x2


@dataclass(frozen=True)
class EmpiricalRates:
    """Plug-in estimates (bits) of the two users' information rates.

    r1_bits estimates I(X; Y1 | X2); r2_bits estimates I(X2; Y2).
    Standard errors come from the delta method on the contingency counts.
    """

    r1_bits: float
    r2_bits: float
    se1_bits: float
    se2_bits: float
    n: int


def _plugin_mi_bits(joint_counts: np.ndarray, n: int) -> tuple[float, float]:
    """Plug-in mutual information (bits) and delta-method SE from a 2-D table."""
    p = joint_counts.astype(np.float64) / n
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log2(p / (px * py))
    g[~np.isfinite(g)] = 0.0
    mi = float((p * g).sum())
    var = max(float((p * g * g).sum()) - mi * mi, 0.0) / n
    return mi, math.sqrt(var)


def _plugin_cond_mi_bits(joint_counts: np.ndarray, n: int) -> tuple[float, float]:
    """Plug-in conditional MI I(X;Y|Z) in bits from a (z, x, y) count table."""
    p = joint_counts.astype(np.float64) / n
    pz = p.sum(axis=(1, 2), keepdims=True)
    px_z = p.sum(axis=2, keepdims=True)
    py_z = p.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log2(p * pz / (px_z * py_z))
    g[~np.isfinite(g)] = 0.0
    mi = float((p * g).sum())
    var = max(float((p * g * g).sum()) - mi * mi, 0.0) / n
    return mi, math.sqrt(var)


def empirical_rates(
    mu1: float,
    mu2: float,
    ch: BroadcastZChannelParams,
    n: int,
    rng,
) -> EmpiricalRates:
    """Monte Carlo rate estimates for independent OR-superposition encoding.

    Draws ``n`` independent symbol pairs, passes the OR through both channel
    arms, and returns plug-in estimates of I(X2; Y2) and I(X; Y1 | X2) in
    bits, each with a delta-method standard error.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    gen = _as_generator(rng)
    x1, x2, x = sample_or_source(mu1, mu2, gen, n)
    y1 = sample_z(x, ch.alpha1, gen)
    y2 = sample_z(x, ch.alpha2, gen)

    c2 = np.bincount(2 * x2 + y2, minlength=4).reshape(2, 2)
    r2, se2 = _plugin_mi_bits(c2, n)

    c1 = np.bincount(4 * x2 + 2 * x + y1, minlength=8).reshape(2, 2, 2)
    r1, se1 = _plugin_cond_mi_bits(c1, n)
    return EmpiricalRates(r1_bits=r1, r2_bits=r2, se1_bits=se1, se2_bits=se2, n=n)


@dataclass(frozen=True)
class DegradationReport:
    """Empirical check that Z(alpha1) followed by Z(alpha_delta) looks like Z(alpha2)."""

    n: int
    n_zero_inputs: int
    empirical_crossover: float
    alpha2: float
    deviation: float
    se: float


def verify_degradation(
    ch: BroadcastZChannelParams,
    n: int,
    rng,
    ones_density: float = 0.0,
) -> DegradationReport:
    """Simulate the two-stage degraded arm and compare with the direct arm.

    Sends an input stream (all zeros by default) through Z(alpha1) and then
    Z(alpha_delta), and reports the empirical Pr(Y2=1 | X=0) against alpha2.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    gen = _as_generator(rng)
    x = (gen.random(n) < ones_density).astype(np.int8)
    y1 = sample_z(x, ch.alpha1, gen)
    y2 = sample_z(y1, ch.alpha_delta, gen)
    zero_in = x == 0
    n0 = int(zero_in.sum())
    if n0 == 0:
        crossover = float("nan")
        se = float("nan")
    else:
        crossover = float(y2[zero_in].mean())
        se = math.sqrt(max(crossover * (1.0 - crossover), 0.0) / n0)
    return DegradationReport(
        n=n,
        n_zero_inputs=n0,
        empirical_crossover=crossover,
        alpha2=ch.alpha2,
        deviation=abs(crossover - ch.alpha2),
        se=se,
    )

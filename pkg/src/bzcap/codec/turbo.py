"""Parallel-concatenated nonlinear trellis codes over the Z channel.

Two identical table-driven constituents encode the same information
pair-symbol stream, the second through a seeded uniform pair-symbol
interleaver.  Their outputs are multiplexed per section (6 bits from
constituent 1, then 6 from constituent 2), giving 12 coded bits per
2 information bits: overall rate 1/6.  Frames start in state 0 and are
left unterminated; the backward recursion is initialised uniformly.

Decoding is symbol-level MAP (forward-backward) per constituent with
extrinsic exchange.  All recursion arithmetic is carried in the log
domain; branches made impossible by the channel's one-sided constraint
(a received 0 where the label has a 1) carry -inf, not a large negative
constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .labels import LABEL_BITS, N_INPUTS, N_STATES
from .trellis import TrellisSpec, _bits_to_symbols, _symbols_to_bits, encode_symbols

__all__ = [
    "SYMBOL_ZERO",
    "SYMBOL_ONE",
    "SYMBOL_ERASURE",
    "DecodingFailure",
    "TurboConfig",
    "turbo_encode",
    "z_symbol_likelihoods",
    "bcjr_decode",
    "turbo_decode",
    "turbo_decode_batch",
]

SYMBOL_ZERO = 0
SYMBOL_ONE = 1
SYMBOL_ERASURE = 2

NEG_INF = float("-inf")

# Floor (in nats) applied to normalized extrinsic log-probabilities before
# they are fed back as priors.  Keeps one constituent's certainty from
# zeroing out inputs for the other while staying far below any likelihood
# scale that matters (e^-60 ~ 9e-27).
_EXTRINSIC_FLOOR = -60.0


class DecodingFailure(RuntimeError):
    """Total likelihood of a trellis section was zero; no codeword fits."""


@dataclass(frozen=True)
class TurboConfig:
    """Two identical constituents, a pair-symbol interleaver, and a schedule.

    ``interleaver_length`` counts 2-bit input symbols (trellis sections per
    constituent), so a frame carries ``2 * interleaver_length`` information
    bits and ``12 * interleaver_length`` coded bits.
    """

    trellis: TrellisSpec
    interleaver_length: int
    interleaver_seed: int
    iterations: int = 10
    permutation: np.ndarray = field(init=False, repr=False, compare=False)
    inverse_permutation: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.interleaver_length < 1:
            raise ValueError(f"interleaver_length must be >= 1, got {self.interleaver_length}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0 <= int(self.interleaver_seed) < 2**64:
            raise ValueError("interleaver_seed must fit in an unsigned 64-bit integer")
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(self.interleaver_seed))))
        perm = rng.permutation(self.interleaver_length).astype(np.int64)
        if not np.array_equal(np.sort(perm), np.arange(self.interleaver_length)):
            raise AssertionError("interleaver is not a permutation")
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "inverse_permutation", np.argsort(perm).astype(np.int64))

    @property
    def info_bits_per_frame(self) -> int:
        return 2 * self.interleaver_length

    @property
    def coded_bits_per_frame(self) -> int:
        return 12 * self.interleaver_length


def turbo_encode(info: np.ndarray, cfg: TurboConfig) -> np.ndarray:
    """Encode ``2*K`` information bits into ``12*K`` coded bits."""
    symbols = _bits_to_symbols(info)
    if symbols.size != cfg.interleaver_length:
        raise ValueError(
            f"info carries {symbols.size} pair-symbols, config expects {cfg.interleaver_length}"
        )
    return _encode_symbol_batch(symbols[None, :], cfg)[0]


def _encode_symbol_batch(symbols: np.ndarray, cfg: TurboConfig) -> np.ndarray:
    """Encode (batch, K) pair-symbols into (batch, 12K) coded bits."""
    batch, k = symbols.shape
    c1 = encode_symbols(symbols, cfg.trellis).reshape(batch, k, LABEL_BITS)
    c2 = encode_symbols(symbols[:, cfg.permutation], cfg.trellis).reshape(batch, k, LABEL_BITS)
    out = np.empty((batch, k, 2 * LABEL_BITS), dtype=np.int8)
    out[:, :, :LABEL_BITS] = c1
    out[:, :, LABEL_BITS:] = c2
    return out.reshape(batch, 12 * k)


def z_symbol_likelihoods(y, crossover: float):
    """Per-bit likelihoods (P[y | c=0], P[y | c=1]) on the Z channel.

    A received 0 rules out a transmitted 1 entirely; a received 1 is certain
    under c=1 and has probability ``crossover`` under c=0; an erasure carries
    no information and scores (1, 1).
    """
    if not 0.0 < crossover < 1.0:
        raise ValueError(f"crossover must be in (0,1), got {crossover}")
    arr = np.asarray(y)
    if arr.size and (arr.min() < 0 or arr.max() > 2):
        raise ValueError("symbols must be 0 (zero), 1 (one), or 2 (erasure)")
    like0 = np.ones(arr.shape, dtype=np.float64)
    like1 = np.ones(arr.shape, dtype=np.float64)
    like0[arr == SYMBOL_ZERO] = 1.0 - crossover
    like1[arr == SYMBOL_ZERO] = 0.0
    like0[arr == SYMBOL_ONE] = crossover
    if arr.ndim == 0 or np.isscalar(y):
        return float(like0), float(like1)
    return like0, like1


def _branch_logmetrics(
    received: np.ndarray, spec: TrellisSpec, crossover: float, hard_inputs: bool = False
) -> np.ndarray:
    """Log-likelihood of each received section under each of the 64 branches.

    ``received`` is (batch, 6*K) ternary; the result is (batch, K, 64) with
    -inf marking branches whose label has a 1 where a 0 was received.  The
    hard-input variant scores plain bit agreement under a symmetric crossover
    model instead, discarding the one-sided certainty (no -inf entries); it
    exists for the low-noise regime where full soft metrics buy nothing.
    """
    if not 0.0 < crossover < 1.0:
        raise ValueError(f"crossover must be in (0,1), got {crossover}")
    batch, n = received.shape
    if n % LABEL_BITS:
        raise ValueError(f"received length {n} is not a multiple of {LABEL_BITS}")
    k = n // LABEL_BITS
    r = received.reshape(batch * k, LABEL_BITS)
    y_zero = (r == SYMBOL_ZERO).astype(np.float64)
    y_one = (r == SYMBOL_ONE).astype(np.float64)
    bits = spec.label_table.label_bits.astype(np.float64)  # (64, 6)
    n_zero_zero = y_zero @ (1.0 - bits).T  # y=0 against label 0
    n_zero_one = y_zero @ bits.T  # y=0 against label 1 (impossible soft)
    n_one_zero = y_one @ (1.0 - bits).T  # y=1 against label 0 (crossover)
    if hard_inputs:
        n_one_one = y_one @ bits.T
        mismatches = n_zero_one + n_one_zero
        matches = n_zero_zero + n_one_one
        gp = matches * math.log1p(-crossover) + mismatches * math.log(crossover)
    else:
        gp = n_zero_zero * math.log1p(-crossover) + n_one_zero * math.log(crossover)
        gp[n_zero_one > 0.5] = NEG_INF
    return gp.reshape(batch, k, N_STATES * N_INPUTS)


@njit(cache=True, fastmath=False)
def _lse2(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    return a + math.log1p(math.exp(b - a))


@njit(cache=True, fastmath=False)
def _bcjr_kernel(gp, logprior, next_state, out_post, fail):
    """Forward-backward over the 16-state trellis, batched over frames.

    gp: (B, K, 64) branch channel log-metrics; logprior: (B, K, 4);
    out_post: (B, K, 4) normalized log-posteriors.  fail[b] records the
    1-based section at which total likelihood hit zero (0 = success).
    """
    n_frames, k, _ = gp.shape
    for b in range(n_frames):
        alpha = np.full((k + 1, N_STATES), NEG_INF)
        alpha[0, 0] = 0.0
        failed_at = 0
        for t in range(k):
            for s2 in range(N_STATES):
                alpha[t + 1, s2] = NEG_INF
            for s in range(N_STATES):
                a = alpha[t, s]
                if a == NEG_INF:
                    continue
                for u in range(N_INPUTS):
                    v = a + gp[b, t, s * N_INPUTS + u] + logprior[b, t, u]
                    if v == NEG_INF:
                        continue
                    s2 = next_state[s, u]
                    alpha[t + 1, s2] = _lse2(alpha[t + 1, s2], v)
            m = NEG_INF
            for s2 in range(N_STATES):
                if alpha[t + 1, s2] > m:
                    m = alpha[t + 1, s2]
            if m == NEG_INF:
                failed_at = t + 1
                break
            for s2 in range(N_STATES):
                alpha[t + 1, s2] -= m
        if failed_at:
            fail[b] = failed_at
            continue
        beta = np.zeros((k + 1, N_STATES))
        for t in range(k - 1, -1, -1):
            m = NEG_INF
            for s in range(N_STATES):
                acc = NEG_INF
                for u in range(N_INPUTS):
                    v = gp[b, t, s * N_INPUTS + u] + logprior[b, t, u]
                    if v == NEG_INF:
                        continue
                    acc = _lse2(acc, v + beta[t + 1, next_state[s, u]])
                beta[t, s] = acc
                if acc > m:
                    m = acc
            if m == NEG_INF:
                failed_at = t + 1
                break
            for s in range(N_STATES):
                beta[t, s] -= m
        if failed_at:
            fail[b] = failed_at
            continue
        for t in range(k):
            total = NEG_INF
            for u in range(N_INPUTS):
                acc = NEG_INF
                for s in range(N_STATES):
                    a = alpha[t, s]
                    if a == NEG_INF:
                        continue
                    v = gp[b, t, s * N_INPUTS + u]
                    if v == NEG_INF:
                        continue
                    acc = _lse2(acc, a + v + beta[t + 1, next_state[s, u]])
                acc += logprior[b, t, u]
                out_post[b, t, u] = acc
                total = _lse2(total, acc)
            if total == NEG_INF:
                fail[b] = t + 1
                break
            for u in range(N_INPUTS):
                out_post[b, t, u] -= total


def _bcjr_log_batch(gp: np.ndarray, logprior: np.ndarray, spec: TrellisSpec) -> np.ndarray:
    """Run the MAP kernel; returns (B, K, 4) normalized log-posteriors."""
    n_frames, k, _ = gp.shape
    out = np.empty((n_frames, k, N_INPUTS))
    fail = np.zeros(n_frames, dtype=np.int64)
    _bcjr_kernel(gp, logprior, spec.next_state, out, fail)
    if fail.any():
        b = int(np.nonzero(fail)[0][0])
        raise DecodingFailure(
            f"zero total likelihood at section {int(fail[b]) - 1} of frame {b}: "
            "no trellis path is consistent with the received symbols"
        )
    return out


def _log_extrinsics(logpost: np.ndarray, logprior: np.ndarray) -> np.ndarray:
    """posterior / prior, renormalized per section, floored in the log domain."""
    ext = logpost - logprior
    ext[np.isnan(ext)] = NEG_INF
    ext -= _logsumexp_last(ext)
    np.maximum(ext, _EXTRINSIC_FLOOR, out=ext)
    ext -= _logsumexp_last(ext)
    return ext


def _logsumexp_last(x: np.ndarray) -> np.ndarray:
    m = np.max(x, axis=-1, keepdims=True)
    msafe = np.where(np.isfinite(m), m, 0.0)
    return msafe + np.log(np.exp(x - msafe).sum(axis=-1, keepdims=True))


def _validated_logprior(priors, k: int) -> np.ndarray:
    if priors is None:
        return np.full((1, k, N_INPUTS), -math.log(N_INPUTS))
    priors = np.asarray(priors, dtype=np.float64)
    if priors.shape != (k, N_INPUTS):
        raise ValueError(f"priors must have shape ({k}, {N_INPUTS}), got {priors.shape}")
    sums = priors.sum(axis=1)
    if priors.min() < 0 or np.abs(sums - 1.0).max() > 1e-9:
        raise ValueError("priors must be normalized per section")
    with np.errstate(divide="ignore"):
        return np.log(priors / sums[:, None])[None, :, :]


def bcjr_decode(
    received: np.ndarray,
    trellis: TrellisSpec,
    crossover: float,
    priors=None,
    hard_inputs: bool = False,
):
    """Symbol-MAP decode of one constituent frame.

    ``received`` is a ternary sequence of 6 symbols per trellis section
    (values 0, 1, or 2 = erasure).  Returns ``(posteriors, extrinsics)``,
    each (K, 4) in the probability domain; rows sum to 1.
    """
    received = np.asarray(received, dtype=np.int8)
    if received.ndim != 1:
        raise ValueError(f"received must be 1-D, got shape {received.shape}")
    if received.size == 0 or received.size % LABEL_BITS:
        raise ValueError(f"received length must be a positive multiple of {LABEL_BITS}")
    if received.min() < 0 or received.max() > 2:
        raise ValueError("received symbols must be 0, 1, or 2 (erasure)")
    k = received.size // LABEL_BITS
    gp = _branch_logmetrics(received[None, :], trellis, crossover, hard_inputs)
    logprior = _validated_logprior(priors, k)
    logpost = _bcjr_log_batch(gp, logprior, trellis)
    logext = _log_extrinsics(logpost, logprior)
    return np.exp(logpost[0]), np.exp(logext[0])


def turbo_decode_batch(
    received: np.ndarray,
    cfg: TurboConfig,
    crossover: float,
    hard_inputs: bool = False,
    track_decisions: bool = False,
):
    """Iteratively decode (batch, 12K) ternary frames; returns (batch, 2K) bits.

    With ``track_decisions`` the per-iteration hard decisions are returned as
    a second value, one (batch, K) symbol array per iteration.
    """
    received = np.asarray(received, dtype=np.int8)
    if received.ndim != 2:
        raise ValueError(f"received batch must be 2-D, got shape {received.shape}")
    batch, n = received.shape
    if n != cfg.coded_bits_per_frame:
        raise ValueError(f"received length {n} != 12*K = {cfg.coded_bits_per_frame}")
    k = cfg.interleaver_length
    sections = received.reshape(batch, k, 2 * LABEL_BITS)
    r1 = np.ascontiguousarray(sections[:, :, :LABEL_BITS]).reshape(batch, k * LABEL_BITS)
    r2 = np.ascontiguousarray(sections[:, :, LABEL_BITS:]).reshape(batch, k * LABEL_BITS)
    gp1 = _branch_logmetrics(r1, cfg.trellis, crossover, hard_inputs)
    gp2 = _branch_logmetrics(r2, cfg.trellis, crossover, hard_inputs)
    perm = cfg.permutation
    prior1 = np.full((batch, k, N_INPUTS), -math.log(N_INPUTS))
    decisions = []
    post2_natural = np.empty_like(prior1)
    for _ in range(cfg.iterations):
        post1 = _bcjr_log_batch(gp1, prior1, cfg.trellis)
        prior2 = _log_extrinsics(post1, prior1)[:, perm, :]
        post2 = _bcjr_log_batch(gp2, prior2, cfg.trellis)
        prior1 = np.empty_like(prior1)
        prior1[:, perm, :] = _log_extrinsics(post2, prior2)
        if track_decisions:
            post2_natural[:, perm, :] = post2
            decisions.append(post2_natural.argmax(axis=2).astype(np.int64))
    post2_natural[:, perm, :] = post2
    bits = _symbols_to_bits(post2_natural.argmax(axis=2))
    if track_decisions:
        return bits, decisions
    return bits


def turbo_decode(
    received: np.ndarray, cfg: TurboConfig, crossover: float, hard_inputs: bool = False
) -> np.ndarray:
    """Decode one frame of 12K ternary symbols to 2K information bits.

    Runs ``cfg.iterations`` rounds of extrinsic exchange between the two
    constituents and decides each pair-symbol by maximum posterior from the
    second constituent (whose prior carries the first's extrinsics).
    """
    received = np.asarray(received, dtype=np.int8)
    if received.ndim != 1:
        raise ValueError(f"received must be 1-D, got shape {received.shape}")
    return turbo_decode_batch(received[None, :], cfg, crossover, hard_inputs)[0]

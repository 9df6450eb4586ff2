"""Two-user link simulation: superposition-free OR multiplexing with
successive decoding at the better receiver.

Both users transmit independently encoded turbo codewords; the channel
input is their bitwise OR.  Receiver 2 decodes its own stream directly,
treating user 1 as part of the noise (effective crossover
``1 - (1 - alpha2) * mu1``).  Receiver 1 first decodes user 2 the same way
(crossover ``1 - (1 - alpha1) * mu1``), re-encodes the estimate, erases
every position where user 2 transmitted a 1, and then decodes its own
stream over the resulting Z channel with erasures at crossover ``alpha1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import BroadcastZChannelParams, RngStream, sample_z
from .trellis import stationary_ones_fraction
from .turbo import (
    SYMBOL_ERASURE,
    DecodingFailure,
    TurboConfig,
    _encode_symbol_batch,
    turbo_decode_batch,
    turbo_encode,
)

__all__ = ["SimReport", "successive_decode_rx1", "ber_experiment"]


@dataclass(frozen=True)
class SimReport:
    """Accumulated results of a bit-error-rate run.

    ``info_bits`` counts information bits per user over the whole run; the
    two density fields are the measured ones fractions of each user's
    transmitted codewords.  ``rx1_user2_bit_errors`` tracks how often
    receiver 1's first stage (decoding user 2 as a stepping stone)
    disagreed with user 2's true bits — expected to be zero at the nominal
    operating point, reported so that violations are visible.
    """

    info_bits: int
    bit_errors_user1: int
    bit_errors_user2: int
    frame_errors_user1: int
    frame_errors_user2: int
    measured_ones_density_1: float
    measured_ones_density_2: float
    seed: int
    frames: int
    rx1_user2_bit_errors: int

    def __post_init__(self) -> None:
        for name in ("bit_errors_user1", "bit_errors_user2", "rx1_user2_bit_errors"):
            v = getattr(self, name)
            if not 0 <= v <= self.info_bits:
                raise ValueError(f"{name}={v} outside [0, info_bits={self.info_bits}]")
        for name in ("frame_errors_user1", "frame_errors_user2"):
            v = getattr(self, name)
            if not 0 <= v <= self.frames:
                raise ValueError(f"{name}={v} outside [0, frames={self.frames}]")
        for name in ("measured_ones_density_1", "measured_ones_density_2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")


def _check_frame_compat(cfg1: TurboConfig, cfg2: TurboConfig) -> None:
    if cfg1.interleaver_length != cfg2.interleaver_length:
        raise ValueError(
            "both users must use the same frame length, got "
            f"{cfg1.interleaver_length} and {cfg2.interleaver_length} pair-symbols"
        )


def _effective_crossover(mu1: float, alpha: float) -> float:
    """Crossover seen by user 2's code when user 1's ones act as noise."""
    if not 0.0 < mu1 <= 1.0:
        raise ValueError(f"mu1 must be in (0,1], got {mu1}")
    return 1.0 - (1.0 - alpha) * mu1


def successive_decode_rx1(
    y1: np.ndarray,
    cfg1: TurboConfig,
    cfg2: TurboConfig,
    mu1: float,
    ch: BroadcastZChannelParams,
):
    """Decode both streams from receiver 1's output for one frame.

    Returns ``(xhat2, xhat1)`` information bit sequences.  Stage 1 decodes
    user 2 treating user 1's ones as extra crossover; stage 2 re-encodes the
    estimate and erases positions where it puts a 1; stage 3 decodes user 1
    from the remaining clean Z channel.  A decoding failure is re-raised
    with the stage that failed.
    """
    _check_frame_compat(cfg1, cfg2)
    y1 = np.asarray(y1, dtype=np.int8)
    if y1.ndim != 1 or y1.size != cfg2.coded_bits_per_frame:
        raise ValueError(f"y1 must be a frame of {cfg2.coded_bits_per_frame} bits")
    try:
        xhat2 = turbo_decode_batch(y1[None, :], cfg2, _effective_crossover(mu1, ch.alpha1))[0]
    except DecodingFailure as exc:
        raise DecodingFailure(f"stage 1 (user-2 decode at receiver 1) failed: {exc}") from exc
    c2_hat = turbo_encode(xhat2, cfg2)
    y_erased = np.where(c2_hat == 1, np.int8(SYMBOL_ERASURE), y1)
    try:
        xhat1 = turbo_decode_batch(y_erased[None, :], cfg1, ch.alpha1)[0]
    except DecodingFailure as exc:
        raise DecodingFailure(f"stage 3 (user-1 decode with erasures) failed: {exc}") from exc
    return xhat2, xhat1


def _decode_rx1_batch(y1, cfg1, cfg2, mu1, ch):
    """Batched successive decoding; returns (xhat2, xhat1) bit arrays."""
    xhat2 = turbo_decode_batch(y1, cfg2, _effective_crossover(mu1, ch.alpha1))
    c2_hat = _encode_symbol_batch(_pack_symbol_batch(xhat2), cfg2)
    y_erased = np.where(c2_hat == 1, np.int8(SYMBOL_ERASURE), y1)
    xhat1 = turbo_decode_batch(y_erased, cfg1, ch.alpha1)
    return xhat2, xhat1


def _pack_symbol_batch(bits: np.ndarray) -> np.ndarray:
    return 2 * bits[:, 0::2].astype(np.int64) + bits[:, 1::2]


def ber_experiment(
    cfg1: TurboConfig,
    cfg2: TurboConfig,
    ch: BroadcastZChannelParams,
    frames: int,
    rng: RngStream,
    mu1: float | None = None,
    noiseless: bool = False,
    rx2_hard_inputs: bool = False,
    batch_size: int = 32,
) -> SimReport:
    """Monte Carlo bit-error run over the two-user link.

    Every frame draws fresh information bits for both users, transmits the
    OR of the two codewords through both channel arms, runs successive
    decoding at receiver 1 and direct decoding of user 2 at receiver 2.
    ``mu1`` is the zeros density the decoders assume for user 1's codeword
    stream; by default it is user 1's own asymptotic encoder density, i.e.
    the matched value.  ``noiseless`` turns off both arms' noise (the
    inter-user interference remains).  Frame draws come from per-frame
    substreams of ``rng``, so reports are independent of ``batch_size``.

    A decoding failure (zero section likelihood — not expected on this
    channel) counts as a frame error with every bit of the frame in error.
    """
    _check_frame_compat(cfg1, cfg2)
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if mu1 is None:
        mu1 = 1.0 - stationary_ones_fraction(cfg1.trellis)
    k = cfg1.interleaver_length
    bits_per_frame = 2 * k
    coded = 12 * k

    be1 = be2 = fe1 = fe2 = s1_errors = 0
    ones1 = ones2 = 0
    rx2_crossover = _effective_crossover(mu1, ch.alpha2)

    for start in range(0, frames, batch_size):
        idx = range(start, min(start + batch_size, frames))
        batch = len(idx)
        info1 = np.empty((batch, bits_per_frame), dtype=np.int8)
        info2 = np.empty((batch, bits_per_frame), dtype=np.int8)
        y1 = np.empty((batch, coded), dtype=np.int8)
        y2 = np.empty((batch, coded), dtype=np.int8)
        c1 = np.empty((batch, coded), dtype=np.int8)
        c2 = np.empty((batch, coded), dtype=np.int8)
        for row, frame in enumerate(idx):
            gen = rng.substream(frame)
            info1[row] = gen.integers(0, 2, size=bits_per_frame, dtype=np.int8)
            info2[row] = gen.integers(0, 2, size=bits_per_frame, dtype=np.int8)
            c1[row] = turbo_encode(info1[row], cfg1)
            c2[row] = turbo_encode(info2[row], cfg2)
            x = c1[row] | c2[row]
            if noiseless:
                y1[row] = x
                y2[row] = x
            else:
                y1[row] = sample_z(x, ch.alpha1, gen)
                y2[row] = sample_z(x, ch.alpha2, gen)
        ones1 += int(c1.sum())
        ones2 += int(c2.sum())

        try:
            xhat2_rx1, xhat1 = _decode_rx1_batch(y1, cfg1, cfg2, mu1, ch)
            err1 = (xhat1 != info1).sum(axis=1)
            s1_err = (xhat2_rx1 != info2).sum(axis=1)
        except DecodingFailure:
            err1, s1_err = _rx1_per_frame(y1, info1, info2, cfg1, cfg2, mu1, ch)
        try:
            xhat2 = turbo_decode_batch(y2, cfg2, rx2_crossover, hard_inputs=rx2_hard_inputs)
            err2 = (xhat2 != info2).sum(axis=1)
        except DecodingFailure:
            err2 = _rx2_per_frame(y2, info2, cfg2, rx2_crossover, rx2_hard_inputs)

        be1 += int(err1.sum())
        be2 += int(err2.sum())
        s1_errors += int(s1_err.sum())
        fe1 += int((err1 > 0).sum())
        fe2 += int((err2 > 0).sum())

    total_info = frames * bits_per_frame
    total_coded = frames * coded
    return SimReport(
        info_bits=total_info,
        bit_errors_user1=be1,
        bit_errors_user2=be2,
        frame_errors_user1=fe1,
        frame_errors_user2=fe2,
        measured_ones_density_1=ones1 / total_coded,
        measured_ones_density_2=ones2 / total_coded,
        seed=rng.seed,
        frames=frames,
        rx1_user2_bit_errors=s1_errors,
    )


def _rx1_per_frame(y1, info1, info2, cfg1, cfg2, mu1, ch):
    """Fallback when a batch hits a decoding failure: isolate per frame."""
    batch, bits_per_frame = info1.shape
    err1 = np.empty(batch, dtype=np.int64)
    s1_err = np.empty(batch, dtype=np.int64)
    for row in range(batch):
        try:
            xhat2, xhat1 = successive_decode_rx1(y1[row], cfg1, cfg2, mu1, ch)
            err1[row] = int((xhat1 != info1[row]).sum())
            s1_err[row] = int((xhat2 != info2[row]).sum())
        except DecodingFailure:
            err1[row] = bits_per_frame
            s1_err[row] = bits_per_frame
    return err1, s1_err


def _rx2_per_frame(y2, info2, cfg2, crossover, hard_inputs):
    batch, bits_per_frame = info2.shape
    err2 = np.empty(batch, dtype=np.int64)
    for row in range(batch):
        try:
            xhat2 = turbo_decode_batch(y2[row : row + 1], cfg2, crossover, hard_inputs)[0]
            err2[row] = int((xhat2 != info2[row]).sum())
        except DecodingFailure:
            err2[row] = bits_per_frame
    return err2

"""Table-driven nonlinear trellis encoding.

A constituent code is a 16-state machine consuming 2 input bits per section
and emitting the 6-bit label stored at (state, input).  The next-state rule
is a feedback-free shift register: the new state is the input pair followed
by the upper half of the old state, next(s1 s2 s3 s4, u1 u2) =
(u1, u2, s1, s2).  Custom next-state tables are accepted as long as each
state's four successors are distinct, which is what the forward-backward
recursion requires.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .labels import N_INPUTS, N_STATES, LabelTable

__all__ = [
    "TrellisSpec",
    "shift_next_state",
    "trellis_encode",
    "stationary_ones_fraction",
]


def shift_next_state() -> np.ndarray:
    """The (16, 4) next-state table of the input shift register.

    next(s, u) has the input pair in the two most significant state bits and
    the old top two state bits shifted into the bottom.
    """
    ns = np.empty((N_STATES, N_INPUTS), dtype=np.int64)
    for s in range(N_STATES):
        for u in range(N_INPUTS):
            ns[s, u] = u * 4 + (s >> 2)
    return ns


@dataclass(frozen=True)
class TrellisSpec:
    """A label table plus a next-state rule (defaults to the shift register)."""

    label_table: LabelTable
    next_state: np.ndarray = field(default_factory=shift_next_state)

    def __post_init__(self) -> None:
        ns = np.asarray(self.next_state, dtype=np.int64)
        if ns.shape != (N_STATES, N_INPUTS):
            raise ValueError(f"next-state table must be 16x4, got {ns.shape}")
        if ns.min() < 0 or ns.max() >= N_STATES:
            raise ValueError("next-state entries must be states 0..15")
        for s in range(N_STATES):
            if len(set(ns[s].tolist())) != N_INPUTS:
                raise ValueError(
                    f"state {s:04b} has repeated successors {ns[s].tolist()}; "
                    "the four successors of each state must be distinct"
                )
        object.__setattr__(self, "next_state", ns)


def _bits_to_symbols(info: np.ndarray) -> np.ndarray:
    """Pack an even-length bit sequence into 2-bit symbols (first bit is MSB)."""
    info = np.asarray(info, dtype=np.int64)
    if info.ndim != 1:
        raise ValueError(f"info must be a 1-D bit sequence, got shape {info.shape}")
    if info.size % 2:
        raise ValueError(f"info length must be even, got {info.size}")
    if info.size and (info.min() < 0 or info.max() > 1):
        raise ValueError("info must contain bits only")
    return 2 * info[0::2] + info[1::2]


def _symbols_to_bits(symbols: np.ndarray) -> np.ndarray:
    """Inverse of _bits_to_symbols along the last axis."""
    symbols = np.asarray(symbols)
    out = np.empty(symbols.shape[:-1] + (symbols.shape[-1] * 2,), dtype=np.int8)
    out[..., 0::2] = (symbols >> 1) & 1
    out[..., 1::2] = symbols & 1
    return out


def encode_symbols(symbols: np.ndarray, spec: TrellisSpec) -> np.ndarray:
    """Encode a batch of symbol sequences; returns (batch, sections*6) bits.

    Frames start in state 0 and are left unterminated.
    """
    symbols = np.atleast_2d(np.asarray(symbols, dtype=np.int64))
    batch, k = symbols.shape
    bits = spec.label_table.label_bits  # (64, 6)
    ns = spec.next_state
    edge = np.empty((batch, k), dtype=np.int64)
    state = np.zeros(batch, dtype=np.int64)
    for t in range(k):
        u = symbols[:, t]
        edge[:, t] = state * N_INPUTS + u
        state = ns[state, u]
    return bits[edge].reshape(batch, k * 6)


def trellis_encode(info: np.ndarray, spec: TrellisSpec) -> np.ndarray:
    """Encode a bit sequence: 6 output bits per 2 input bits, state 0 start."""
    symbols = _bits_to_symbols(info)
    if symbols.size == 0:
        return np.zeros(0, dtype=np.int8)
    return encode_symbols(symbols[None, :], spec)[0]


def stationary_ones_fraction(spec: TrellisSpec) -> float:
    """Asymptotic ones density of codewords under uniform random input.

    Computed from the stationary distribution of the state chain (uniform
    input symbols induce a Markov chain on states); this is the density the
    matched decoder should assume for the code as interference.
    """
    ns = spec.next_state
    transition = np.zeros((N_STATES, N_STATES))
    for s in range(N_STATES):
        for u in range(N_INPUTS):
            transition[s, ns[s, u]] += 1.0 / N_INPUTS
    pi = np.full(N_STATES, 1.0 / N_STATES)
    for _ in range(10_000):
        nxt = pi @ transition
        if np.abs(nxt - pi).max() < 1e-15:
            pi = nxt
            break
        pi = nxt
    weights = spec.label_table.label_bits.sum(axis=1).reshape(N_STATES, N_INPUTS)
    return float((pi[:, None] * weights).sum() / (N_INPUTS * 6))

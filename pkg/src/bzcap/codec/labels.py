"""Label tables for the nonlinear trellis constituent codes.

A label table assigns one 6-bit output word to every (state, input) pair of
a 16-state trellis with 2-bit inputs.  Unlike a linear convolutional code,
the output is a pure table lookup with no algebraic structure; the tables
are designed so that codewords have a controlled density of ones, which is
what matches each user's code to its optimal input distribution on the
Z channel.

Tables are stored as plain text: comment lines start with '#', and each of
the 16 data lines reads ``SSSS o1 o2 o3 o4`` with a binary state label and
four 2-digit octal output words (inputs 00, 01, 10, 11 in order), states
ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

__all__ = [
    "LabelTable",
    "LabelTableError",
    "parse_label_table",
    "load_label_table",
    "format_label_table",
    "shipped_table_path",
]

N_STATES = 16
N_INPUTS = 4
LABEL_BITS = 6


class LabelTableError(ValueError):
    """Malformed label-table document (carries row/column context)."""


@dataclass(frozen=True)
class LabelTable:
    """16x4 table of 6-bit output labels, one per (state, input) pair."""

    labels: np.ndarray  # (16, 4) int array of 6-bit words
    k0: int = 2
    n0: int = LABEL_BITS
    _bits: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (N_STATES, N_INPUTS):
            raise LabelTableError(
                f"label table must be {N_STATES}x{N_INPUTS}, got {labels.shape}"
            )
        if labels.min() < 0 or labels.max() >= (1 << LABEL_BITS):
            raise LabelTableError("labels must be 6-bit words (0..0o77)")
        object.__setattr__(self, "labels", labels)
        shifts = np.arange(LABEL_BITS - 1, -1, -1)
        bits = ((labels.reshape(-1, 1) >> shifts) & 1).astype(np.int8)
        object.__setattr__(self, "_bits", bits)

    @property
    def label_bits(self) -> np.ndarray:
        """(64, 6) bit expansion, row index = state * 4 + input."""
        return self._bits

    def ones_fraction(self) -> float:
        """Fraction of ones over all table entries (uniform state and input)."""
        return float(self._bits.mean())


def parse_label_table(text: str) -> LabelTable:
    """Parse a label-table document into a LabelTable.

    Grammar: '#'-prefixed comment lines (and blank lines) are ignored; the
    16 data lines must be ``SSSS o1 o2 o3 o4`` with SSSS the binary state in
    ascending order and oX octal words below 0o100.
    """
    labels = np.zeros((N_STATES, N_INPUTS), dtype=np.int64)
    row = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 1 + N_INPUTS:
            raise LabelTableError(
                f"line {lineno}: expected state + {N_INPUTS} labels, "
                f"got {len(fields)} fields: {line!r}"
            )
        if row >= N_STATES:
            raise LabelTableError(f"line {lineno}: more than {N_STATES} data rows")
        state_txt = fields[0]
        if len(state_txt) != 4 or set(state_txt) - {"0", "1"}:
            raise LabelTableError(
                f"line {lineno}: state must be 4 binary digits, got {state_txt!r}"
            )
        state = int(state_txt, 2)
        if state != row:
            raise LabelTableError(
                f"line {lineno}: states must ascend; expected "
                f"{row:04b}, got {state_txt}"
            )
        for col, tok in enumerate(fields[1:]):
            try:
                value = int(tok, 8)
            except ValueError as exc:
                raise LabelTableError(
                    f"line {lineno}, column {col + 1}: {tok!r} is not octal"
                ) from exc
            if value >= (1 << LABEL_BITS):
                raise LabelTableError(
                    f"line {lineno}, column {col + 1}: 0o{tok} exceeds 6 bits"
                )
            labels[row, col] = value
        row += 1
    if row != N_STATES:
        raise LabelTableError(f"expected {N_STATES} data rows, got {row}")
    return LabelTable(labels=labels)


def format_label_table(table: LabelTable) -> str:
    """Render a LabelTable back to the text format (bit-exact round-trip)."""
    lines = []
    for state in range(N_STATES):
        entries = " ".join(f"{int(v):02o}" for v in table.labels[state])
        lines.append(f"{state:04b} {entries}")
    return "\n".join(lines) + "\n"


def shipped_table_path(user: int) -> str:
    """Filesystem path of the in-repo rate-1/6 table for user 1 or 2."""
    if user not in (1, 2):
        raise ValueError(f"user must be 1 or 2, got {user}")
    res = resources.files("bzcap.data") / f"user{user}_rate16.txt"
    return str(res)


def load_label_table(path: str) -> LabelTable:
    """Read and parse a label-table file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_label_table(fh.read())

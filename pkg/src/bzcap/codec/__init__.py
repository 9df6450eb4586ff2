"""Nonlinear turbo codec and successive-decoding link simulation."""

from .labels import (
    LabelTable,
    LabelTableError,
    format_label_table,
    load_label_table,
    parse_label_table,
    shipped_table_path,
)
from .link import SimReport, ber_experiment, successive_decode_rx1
from .trellis import (
    TrellisSpec,
    shift_next_state,
    stationary_ones_fraction,
    trellis_encode,
)
from .turbo import (
    SYMBOL_ERASURE,
    SYMBOL_ONE,
    SYMBOL_ZERO,
    DecodingFailure,
    TurboConfig,
    bcjr_decode,
    turbo_decode,
    turbo_decode_batch,
    turbo_encode,
    z_symbol_likelihoods,
)

__all__ = [
    "LabelTable",
    "LabelTableError",
    "parse_label_table",
    "format_label_table",
    "load_label_table",
    "shipped_table_path",
    "TrellisSpec",
    "shift_next_state",
    "trellis_encode",
    "stationary_ones_fraction",
    "TurboConfig",
    "turbo_encode",
    "turbo_decode",
    "turbo_decode_batch",
    "bcjr_decode",
    "z_symbol_likelihoods",
    "SYMBOL_ZERO",
    "SYMBOL_ONE",
    "SYMBOL_ERASURE",
    "DecodingFailure",
    "SimReport",
    "successive_decode_rx1",
    "ber_experiment",
]

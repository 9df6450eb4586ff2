"""Capacity region and coded transmission for the two-user broadcast Z channel.

The package computes the explicit capacity-region boundary and the optimal
transmission strategies of a broadcast channel whose two arms are Z channels
(output = input OR Bernoulli noise), verifies the analytic results against
brute-force grid oracles, and implements an end-to-end coded scheme:
independent per-user encoding with table-driven nonlinear turbo codes,
OR superposition on the channel, and successive decoding at the better
receiver.
"""

from .capacity import (
    BoundaryPoint,
    RatePair,
    endpoint_tangent_slopes,
    optimal_for_lambda,
    rates_general,
    rates_independent,
    solve_mu2,
    trace_boundary,
)
from .channel import (
    BroadcastZChannelParams,
    DegradationReport,
    EmpiricalRates,
    RngStream,
    Strategy,
    empirical_rates,
    make_channel,
    sample_or_source,
    sample_z,
    verify_degradation,
)
from .core import entropy_bits, entropy_nats, phi, psi, solve_monotone_root

__version__ = "0.1.0"

"""Acceptance gate: the eight package-level criteria, one test each.

Every test prints a single ``ACCEPTANCE n: PASS/FAIL`` line with the
measured numbers and then asserts.  Criteria are implemented exactly as
stated; two of them (2 and 7) encode claims that the measurements show to
be unattainable as written, and those tests fail honestly rather than
being loosened — see the repository notes for the analysis.
"""

import json

import numpy as np
import pytest

from bzcap import (
    RngStream,
    empirical_rates,
    make_channel,
    psi,
    rates_independent,
)
from bzcap.core import LN2
from bzcap.cli import main
from bzcap.codec import (
    TrellisSpec,
    TurboConfig,
    ber_experiment,
    turbo_decode_batch,
    turbo_encode,
)
from bzcap.verify import (
    boundary_clearance,
    grid_hull,
    GridSpec,
    run_degradation_suite,
    run_derivatives_suite,
    run_gfunction_suite,
    run_optimizer_suite,
)
from bzcap.capacity import trace_boundary

CH = make_channel(0.15, 0.6)


def _report(n: int, ok: bool, detail: str) -> str:
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    return line


def test_criterion_1_single_user_endpoints():
    v1 = psi(1.0 - CH.alpha1)
    v2 = psi(1.0 - CH.alpha2)
    ok = 0.4445 <= v1 <= 0.4455 and 0.3915 <= v2 <= 0.3925
    line = _report(1, ok, f"psi(0.85)={v1:.6f} in [0.4445,0.4455], psi(0.4)={v2:.6f} in [0.3915,0.3925]")
    assert ok, line


def test_criterion_2_boundary_vs_brute_force():
    hull = grid_hull(CH, GridSpec(step=0.01))
    trace = trace_boundary(CH, 200)
    rep = boundary_clearance(hull, trace)
    clause_a = rep["max_frontier_excess_bits"] <= 1e-3
    interior_on_frontier = int((rep["interior_within_tol"] <= 1e-3).sum())
    clause_b = interior_on_frontier == 0
    ok = clause_a and clause_b
    line = _report(
        2,
        ok,
        f"frontier excess {rep['max_frontier_excess_bits']:.3e} bits (<=1e-3: {clause_a}); "
        f"{interior_on_frontier} strictly interior strategies within 1e-3 bits of the "
        f"boundary, min slack {rep['interior_min_slack_bits']:.3e} bits (none allowed: {clause_b})",
    )
    assert ok, line


def test_criterion_3_closed_form_optimizer_vs_grid():
    rep = run_optimizer_suite(CH, step=1e-3, n_lambdas=20)
    ok = rep["passed"] and rep["worst_distance"] <= 2e-3
    line = _report(
        3,
        ok,
        f"20 lambdas spanning all cases, worst argmax distance {rep['worst_distance']:.3e} "
        f"(tol 2e-3), disagreements: {rep['disagreements']}",
    )
    assert ok, line


def test_criterion_4_derivative_properties():
    der = run_derivatives_suite(samples=1000, channels=20, seed=0, fd_tol=1e-6)
    gf = run_gfunction_suite(step=0.05)
    ok = der["passed"] and gf["passed"]
    line = _report(
        4,
        ok,
        f"{der['checked']} interior points on 20 channels: {der['sign_failures']} sign "
        f"failures, {der['slope_failures']} slope failures, worst FD residual "
        f"{der['worst_fd_residual']:.2e} (tol 1e-6); g-grid min {gf['min_g']:.2e} > 0, "
        f"diagonal {gf['worst_diagonal']:.1e} <= 1e-12",
    )
    assert ok, line


def test_criterion_5_rate_gap_reproduction():
    p = rates_independent(0.804, 0.5, CH)
    gap1 = p.r1 / LN2 - 1.0 / 6.0
    gap2 = p.r2 / LN2 - 1.0 / 6.0
    closed_ok = 0.0 < gap1 <= 0.04 and 0.0 < gap2 <= 0.02
    emp = empirical_rates(0.804, 0.5, CH, 10_000_000, RngStream(17))
    d1 = abs(emp.r1_bits - p.r1 / LN2)
    d2 = abs(emp.r2_bits - p.r2 / LN2)
    mc_ok = d1 <= 3 * emp.se1_bits and d2 <= 3 * emp.se2_bits and d1 <= 0.003 and d2 <= 0.003
    ok = closed_ok and mc_ok
    line = _report(
        5,
        ok,
        f"closed-form gaps over 1/6: R1 +{gap1:.4f} in (0,0.04], R2 +{gap2:.4f} in (0,0.02]; "
        f"MC at 1e7: |d1|={d1:.2e} (3se={3*emp.se1_bits:.2e}), |d2|={d2:.2e} "
        f"(3se={3*emp.se2_bits:.2e})",
    )
    assert ok, line


def test_criterion_6_degradation_composition():
    rep = run_degradation_suite(CH, 10_000_000, RngStream(2), tol=0.002)
    ok = rep["passed"]
    line = _report(
        6,
        ok,
        f"two-stage empirical crossover {rep['empirical_crossover']:.6f} vs 0.6, "
        f"deviation {rep['deviation']:.2e} (tol 2e-3) at n=1e7",
    )
    assert ok, line


def test_criterion_7_codec_properties(table1, table2):
    cfg1 = TurboConfig(trellis=TrellisSpec(label_table=table1), interleaver_length=2048, interleaver_seed=202)
    cfg2 = TurboConfig(trellis=TrellisSpec(label_table=table2), interleaver_length=2048, interleaver_seed=303)

    # noiseless clause: encode/decode identity per code on 100 random frames
    noiseless_fail = 0
    gen = np.random.default_rng(7)
    for cfg, crossover in ((cfg1, CH.alpha1), (cfg2, CH.alpha2)):
        info = gen.integers(0, 2, size=(100, cfg.info_bits_per_frame), dtype=np.int8)
        for start in range(0, 100, 25):
            chunk = info[start : start + 25]
            coded = np.stack([turbo_encode(row, cfg) for row in chunk])
            decoded = turbo_decode_batch(coded, cfg, crossover)
            noiseless_fail += int((decoded != chunk).any(axis=1).sum())
    noiseless_ok = noiseless_fail == 0

    rep = ber_experiment(cfg1, cfg2, CH, frames=250, rng=RngStream(12345), batch_size=32)
    assert rep.info_bits >= 1_000_000
    ber1 = rep.bit_errors_user1 / rep.info_bits
    ber2 = rep.bit_errors_user2 / rep.info_bits
    density_ok = (
        abs(rep.measured_ones_density_1 - 0.196) <= 0.01
        and abs(rep.measured_ones_density_2 - 0.5) <= 0.01
    )
    ber_ok = ber1 <= 1e-3 and ber2 <= 1e-3
    ok = noiseless_ok and density_ok and ber_ok
    line = _report(
        7,
        ok,
        f"densities ({rep.measured_ones_density_1:.6f}, {rep.measured_ones_density_2:.6f}) "
        f"vs (0.196, 0.5) +/-0.01: {density_ok}; noiseless per-code identity "
        f"{200 - noiseless_fail}/200 frames: {noiseless_ok}; BER1={ber1:.3e}, BER2={ber2:.3e} "
        f"(both <=1e-3: {ber_ok}) over {rep.info_bits} info bits; "
        f"receiver-1 stage-1 bit errors (soft expectation, logged): {rep.rx1_user2_bit_errors}",
    )
    assert ok, line


def test_criterion_8_deterministic_artifacts(tmp_path):
    commands = {
        "simulate": ["simulate", "--mu1", "0.8", "--mu2", "0.5", "--samples", "50000", "--seed", "3"],
        "codec": ["codec", "--k", "64", "--frames", "2", "--iters", "2", "--seed", "3"],
        "verify": ["verify", "degradation", "--samples", "50000", "--seed", "3"],
    }
    mismatched = []
    for name, argv in commands.items():
        a = tmp_path / f"{name}_a.json"
        b = tmp_path / f"{name}_b.json"
        assert main([*argv, "--out", str(a)]) in (0, 1)
        assert main([*argv, "--out", str(b)]) in (0, 1)
        if a.read_bytes() != b.read_bytes():
            mismatched.append(name)
        json.loads(a.read_text())  # artifacts must stay valid JSON
    ok = not mismatched
    line = _report(
        8,
        ok,
        "byte-identical reruns for simulate/codec/verify"
        + ("" if ok else f"; mismatches: {mismatched}"),
    )
    assert ok, line

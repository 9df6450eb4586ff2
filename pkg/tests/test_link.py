"""Two-user link simulation: successive decoding and error accounting."""

import numpy as np
import pytest

from bzcap.channel import RngStream
from bzcap.codec import (
    DecodingFailure,
    SimReport,
    ber_experiment,
    successive_decode_rx1,
    turbo_encode,
)
from bzcap.codec.link import _effective_crossover
from bzcap.codec.trellis import stationary_ones_fraction


class TestEffectiveCrossover:
    def test_frozen_values(self):
        assert _effective_crossover(0.804, 0.15) == pytest.approx(0.3166)
        assert _effective_crossover(0.804, 0.6) == pytest.approx(0.6784)

    def test_transparent_user1_leaves_plain_arm(self):
        # mu1 = 1 means user 1 never transmits a one
        assert _effective_crossover(1.0, 0.15) == pytest.approx(0.15)

    def test_rejects_out_of_range(self):
        for bad in (0.0, -0.2, 1.5):
            with pytest.raises(ValueError, match="mu1"):
                _effective_crossover(bad, 0.15)


class TestSimReportValidation:
    def _kwargs(self, **over):
        base = dict(
            info_bits=1000,
            bit_errors_user1=3,
            bit_errors_user2=5,
            frame_errors_user1=1,
            frame_errors_user2=2,
            measured_ones_density_1=0.21,
            measured_ones_density_2=0.5,
            seed=1,
            frames=10,
            rx1_user2_bit_errors=0,
        )
        base.update(over)
        return base

    def test_accepts_consistent_counts(self):
        SimReport(**self._kwargs())

    def test_rejects_bit_errors_beyond_total(self):
        with pytest.raises(ValueError, match="bit_errors_user1"):
            SimReport(**self._kwargs(bit_errors_user1=1001))

    def test_rejects_frame_errors_beyond_frames(self):
        with pytest.raises(ValueError, match="frame_errors_user2"):
            SimReport(**self._kwargs(frame_errors_user2=11))

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError, match="density"):
            SimReport(**self._kwargs(measured_ones_density_1=1.2))


class TestSuccessiveDecode:
    def test_noiseless_frame_recovers_both_users(self, small_cfg1, small_cfg2, ch):
        gen = RngStream(99).substream(0)
        info1 = gen.integers(0, 2, size=128, dtype=np.int8)
        info2 = gen.integers(0, 2, size=128, dtype=np.int8)
        y1 = turbo_encode(info1, small_cfg1) | turbo_encode(info2, small_cfg2)
        mu1 = 1.0 - stationary_ones_fraction(small_cfg1.trellis)
        xhat2, xhat1 = successive_decode_rx1(y1, small_cfg1, small_cfg2, mu1, ch)
        np.testing.assert_array_equal(xhat2, info2)
        np.testing.assert_array_equal(xhat1, info1)

    def test_rejects_wrong_frame_size(self, small_cfg1, small_cfg2, ch):
        with pytest.raises(ValueError, match="frame"):
            successive_decode_rx1(np.zeros(10, dtype=np.int8), small_cfg1, small_cfg2, 0.8, ch)

    def test_rejects_mismatched_lengths(self, small_cfg1, spec2, ch):
        from bzcap.codec import TurboConfig

        other = TurboConfig(trellis=spec2, interleaver_length=32, interleaver_seed=5)
        with pytest.raises(ValueError, match="same frame length"):
            successive_decode_rx1(
                np.zeros(small_cfg1.coded_bits_per_frame, dtype=np.int8),
                small_cfg1,
                other,
                0.8,
                ch,
            )


class TestBerExperiment:
    def test_noiseless_small_run_is_error_free(self, small_cfg1, small_cfg2, ch):
        rep = ber_experiment(small_cfg1, small_cfg2, ch, frames=8, rng=RngStream(99), noiseless=True)
        assert rep.info_bits == 8 * 128
        assert rep.bit_errors_user1 == 0
        assert rep.bit_errors_user2 == 0
        assert rep.frame_errors_user1 == 0
        assert rep.frame_errors_user2 == 0
        assert rep.rx1_user2_bit_errors == 0
        assert rep.measured_ones_density_1 == pytest.approx(0.21, abs=0.03)
        assert rep.measured_ones_density_2 == pytest.approx(0.5, abs=0.03)

    def test_deterministic_given_seed(self, small_cfg1, small_cfg2, ch):
        a = ber_experiment(small_cfg1, small_cfg2, ch, frames=5, rng=RngStream(7))
        b = ber_experiment(small_cfg1, small_cfg2, ch, frames=5, rng=RngStream(7))
        assert a == b

    def test_independent_of_batch_size(self, small_cfg1, small_cfg2, ch):
        a = ber_experiment(small_cfg1, small_cfg2, ch, frames=5, rng=RngStream(7), batch_size=2)
        b = ber_experiment(small_cfg1, small_cfg2, ch, frames=5, rng=RngStream(7), batch_size=5)
        assert a == b

    def test_default_mu1_is_matched_encoder_density(self, small_cfg1, small_cfg2, ch):
        matched = 1.0 - stationary_ones_fraction(small_cfg1.trellis)
        a = ber_experiment(small_cfg1, small_cfg2, ch, frames=3, rng=RngStream(11))
        b = ber_experiment(small_cfg1, small_cfg2, ch, frames=3, rng=RngStream(11), mu1=matched)
        assert a == b

    def test_rejects_bad_arguments(self, small_cfg1, small_cfg2, ch):
        with pytest.raises(ValueError, match="frames"):
            ber_experiment(small_cfg1, small_cfg2, ch, frames=0, rng=RngStream(1))
        with pytest.raises(ValueError, match="batch_size"):
            ber_experiment(small_cfg1, small_cfg2, ch, frames=1, rng=RngStream(1), batch_size=0)

    def test_decoding_failure_counts_whole_frames(
        self, small_cfg1, small_cfg2, ch, monkeypatch
    ):
        def always_fail(*args, **kwargs):
            raise DecodingFailure("forced")

        monkeypatch.setattr("bzcap.codec.link.turbo_decode_batch", always_fail)
        rep = ber_experiment(small_cfg1, small_cfg2, ch, frames=3, rng=RngStream(5))
        assert rep.bit_errors_user1 == rep.info_bits
        assert rep.bit_errors_user2 == rep.info_bits
        assert rep.rx1_user2_bit_errors == rep.info_bits
        assert rep.frame_errors_user1 == 3
        assert rep.frame_errors_user2 == 3

    def test_report_carries_run_identity(self, small_cfg1, small_cfg2, ch):
        rep = ber_experiment(small_cfg1, small_cfg2, ch, frames=2, rng=RngStream(123), noiseless=True)
        assert rep.seed == 123
        assert rep.frames == 2


@pytest.mark.slow
class TestNoiselessAmbiguity:
    def test_full_scale_noiseless_is_nearly_but_not_perfectly_clean(self, table1, table2, ch):
        # At full frame length the OR link is no longer uniquely decodable:
        # wherever user 2 transmits a 1, user 1's bit is hidden from every
        # receiver, and rare codeword pairs collide there.  Successive
        # decoding still recovers user 2 and stage 1 exactly; user 1 picks
        # up a tiny residual error floor (measured ~3e-5).
        from bzcap.codec import TrellisSpec, TurboConfig

        cfg1 = TurboConfig(trellis=TrellisSpec(label_table=table1), interleaver_length=2048, interleaver_seed=202)
        cfg2 = TurboConfig(trellis=TrellisSpec(label_table=table2), interleaver_length=2048, interleaver_seed=303)
        rep = ber_experiment(cfg1, cfg2, ch, frames=8, rng=RngStream(2024), noiseless=True)
        assert rep.bit_errors_user2 == 0
        assert rep.rx1_user2_bit_errors == 0
        assert rep.bit_errors_user1 <= 1e-3 * rep.info_bits

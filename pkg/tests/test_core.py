import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bzcap import make_channel
from bzcap.core import LN2, entropy_bits, entropy_nats, phi, psi, solve_monotone_root

CH = make_channel(0.15, 0.6)


class TestEntropy:
    def test_reference_value(self):
        assert entropy_nats(0.85) == pytest.approx(0.42270908780599087, abs=1e-15)
        assert entropy_bits(0.85) == pytest.approx(0.60984030471640042, abs=1e-15)

    def test_endpoints_are_zero(self):
        assert entropy_nats(0.0) == 0.0
        assert entropy_nats(1.0) == 0.0

    def test_maximum_at_half(self):
        assert entropy_nats(0.5) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_rejects_non_probability(self):
        with pytest.raises(ValueError):
            entropy_nats(-0.01)
        with pytest.raises(ValueError):
            entropy_nats(1.01)

    @given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
    def test_symmetry(self, p):
        assert entropy_nats(p) == pytest.approx(entropy_nats(1.0 - p), abs=1e-12)

    @given(
        st.floats(min_value=0.01, max_value=0.99),
        st.floats(min_value=0.01, max_value=0.99),
    )
    def test_concavity_midpoint(self, p, q):
        mid = entropy_nats(0.5 * (p + q))
        assert mid >= 0.5 * (entropy_nats(p) + entropy_nats(q)) - 1e-12

    def test_bits_nats_ratio(self):
        assert entropy_bits(0.3) == pytest.approx(entropy_nats(0.3) / LN2, abs=1e-15)


class TestPhi:
    def test_reference_values(self):
        assert phi(1.0, CH) == pytest.approx(3.7138308977134482, abs=1e-13)
        assert phi(0.7, CH) == pytest.approx(2.751467341658634, abs=1e-13)
        assert phi(psi(0.85), CH) == pytest.approx(2.4243082625963391, abs=1e-13)

    def test_limit_at_zero(self):
        # lim x->0 of ln(1-(1-a1)x)/ln(1-(1-a2)x) = (1-a1)/(1-a2)
        assert phi(0.0, CH) == pytest.approx(0.85 / 0.40, abs=1e-15)
        assert phi(1e-9, CH) == pytest.approx(0.85 / 0.40, rel=1e-6)

    @given(
        st.floats(min_value=1e-6, max_value=1.0),
        st.floats(min_value=1e-6, max_value=1.0),
    )
    @settings(max_examples=200)
    def test_strictly_increasing(self, a, b):
        lo, hi = sorted((a, b))
        if hi - lo > 1e-9:
            assert phi(lo, CH) < phi(hi, CH)

    def test_rejects_out_of_domain(self):
        with pytest.raises(ValueError):
            phi(-0.1, CH)
        with pytest.raises(ValueError):
            phi(1.5, CH)


class TestPsi:
    def test_reference_values(self):
        assert psi(0.85) == pytest.approx(0.44491089103327929, abs=1e-15)
        assert psi(0.40) == pytest.approx(0.39190213948550923, abs=1e-15)
        assert psi(1.0) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            psi(0.0)

    @given(st.floats(min_value=1e-6, max_value=1.0))
    def test_range(self, x):
        v = psi(x)
        assert 0.0 < v <= 0.5


class TestSolveMonotoneRoot:
    def test_simple_root(self):
        r = solve_monotone_root(lambda x: x * x - 2.0, 0.0, 2.0)
        assert r == pytest.approx(math.sqrt(2.0), abs=1e-10)

    def test_decreasing_function(self):
        r = solve_monotone_root(lambda x: 1.0 - x, 0.0, 3.0)
        assert r == pytest.approx(1.0, abs=1e-10)

    def test_rejects_non_bracket(self):
        with pytest.raises(ValueError):
            solve_monotone_root(lambda x: x + 1.0, 0.0, 1.0)

    @given(st.floats(min_value=-0.9, max_value=20.0))
    @settings(max_examples=200)
    def test_left_inverse_of_phi(self, lam_offset):
        # for any lambda in phi's range, the bisection root maps back within 1e-9
        lam_lo, lam_hi = phi(psi(0.85), CH), phi(1.0, CH)
        lam = min(max(lam_lo + lam_offset, lam_lo), lam_hi)
        root = solve_monotone_root(lambda m: phi(m, CH) - lam, psi(0.85), 1.0)
        assert abs(phi(root, CH) - lam) <= 1e-9

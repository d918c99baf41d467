"""Post-expiry repricing: successor rule, peer statistics, penalty blend."""

from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demurrage import (
    InfeasibleRate,
    NoPeerData,
    OverduePolicy,
    PeerCoefficientSample,
    SeriesVersion,
    overdue_coefficient,
    peer_max,
    peer_mean,
    successor_coefficient,
)


def samples(*coefficients: str) -> list[PeerCoefficientSample]:
    return [
        PeerCoefficientSample(issuer_id=f"bank-{i}", coefficient=Decimal(c))
        for i, c in enumerate(coefficients)
    ]


coefficients = st.integers(1, 9999).map(lambda n: Decimal(n) / Decimal(100_000))
alphas = st.integers(0, 500).map(lambda n: Decimal(n) / Decimal(1000))


class TestSuccessorRule:
    def test_single_candidate(self):
        versions = [SeriesVersion("v2", issue_day=900, expiry_day=2000, coefficient=Decimal("0.00005"))]
        assert successor_coefficient(versions, 1000) == Decimal("0.00005")

    def test_no_candidate_falls_back(self):
        versions = [SeriesVersion("v0", issue_day=0, expiry_day=900, coefficient=Decimal("0.00005"))]
        assert successor_coefficient(versions, 1000) is None
        assert successor_coefficient([], 1000) is None

    def test_later_issued_candidate_wins(self):
        versions = [
            SeriesVersion("v1", issue_day=100, expiry_day=3000, coefficient=Decimal("0.00004")),
            SeriesVersion("v2", issue_day=500, expiry_day=2500, coefficient=Decimal("0.00007")),
        ]
        assert successor_coefficient(versions, 1000) == Decimal("0.00007")

    def test_candidate_must_be_issued_before_expiry(self):
        versions = [SeriesVersion("v3", issue_day=1500, expiry_day=3000, coefficient=Decimal("0.00009"))]
        assert successor_coefficient(versions, 1000) is None


class TestPeerStatistics:
    def test_single_sample_mean(self):
        assert peer_mean(samples("0.001")) == Decimal("0.001")

    def test_hand_mean(self):
        assert peer_mean(samples("0.001", "0.003")) == Decimal("0.002")

    def test_hand_max(self):
        assert peer_max(samples("0.001", "0.003")) == Decimal("0.003")
        assert peer_max(samples("0.002")) == Decimal("0.002")

    def test_empty_samples_rejected(self):
        with pytest.raises(NoPeerData):
            peer_mean([])
        with pytest.raises(NoPeerData):
            peer_max([])

    @given(st.lists(coefficients, min_size=1, max_size=10))
    @settings(max_examples=100, deadline=None)
    def test_permutation_invariance(self, values):
        forward = samples(*map(str, values))
        backward = list(reversed(forward))
        assert peer_mean(forward) == peer_mean(backward)
        assert peer_max(forward) == peer_max(backward)


class TestOverdueCoefficient:
    def test_hand_blend(self):
        got = overdue_coefficient(samples("0.001", "0.003"), OverduePolicy(Decimal("0.5")))
        assert got == Decimal("0.0035")

    def test_zero_alpha_is_peer_mean(self):
        peers = samples("0.001", "0.003")
        assert overdue_coefficient(peers, OverduePolicy(Decimal(0))) == peer_mean(peers)

    def test_equal_samples_at_half_alpha(self):
        peers = samples("0.002", "0.002", "0.002")
        got = overdue_coefficient(peers, OverduePolicy(Decimal("0.5")))
        assert got == Decimal("0.003")  # 1.5 x the common rate

    def test_infeasible_blend_rejected(self):
        with pytest.raises(InfeasibleRate):
            overdue_coefficient(samples("0.9", "0.9"), OverduePolicy(Decimal("0.5")))

    @given(st.lists(coefficients, min_size=1, max_size=10), alphas)
    @settings(max_examples=200, deadline=None)
    def test_lateness_never_rewarded(self, values, alpha):
        peers = samples(*map(str, values))
        policy = OverduePolicy(alpha)
        got = overdue_coefficient(peers, policy)
        assert got >= peer_mean(peers)
        assert got <= peer_mean(peers) + Decimal("0.5") * peer_max(peers)

    @given(st.lists(coefficients, min_size=1, max_size=10))
    @settings(max_examples=100, deadline=None)
    def test_half_alpha_bounded_by_three_halves_max(self, values):
        peers = samples(*map(str, values))
        got = overdue_coefficient(peers, OverduePolicy(Decimal("0.5")))
        assert got <= Decimal("1.5") * peer_max(peers)


class TestPolicyBounds:
    def test_alpha_clamped_to_valid_band(self):
        assert OverduePolicy(Decimal("0.7")).blend_alpha == Decimal("0.5")
        assert OverduePolicy(Decimal("-0.2")).blend_alpha == Decimal(0)
        assert OverduePolicy(Decimal("0.25")).blend_alpha == Decimal("0.25")

    def test_sample_coefficient_bounds(self):
        with pytest.raises(ValueError):
            PeerCoefficientSample("bank", Decimal(1))
        with pytest.raises(ValueError):
            PeerCoefficientSample("bank", Decimal(0))

    def test_sample_window_order(self):
        with pytest.raises(ValueError):
            PeerCoefficientSample("bank", Decimal("0.1"), window=(10, 5))
        ok = PeerCoefficientSample("bank", Decimal("0.1"), window=(5, 10))
        assert ok.window == (5, 10)

import random

import pytest
from hypothesis import given, settings, strategies as st

from capped_rnd.topology import Node, Topology
from capped_rnd.traffic import (
    CappedHoseModel,
    DemandSeries,
    SweepConfig,
    check_membership,
    gravity_peaks,
    ingest_time_series,
    load_demand_series,
    marginal_strength,
    peak_strength,
    sample_marginals,
    sigma_vectors,
    strength_vectors,
)

from conftest import random_model


class TestMarginalStrength:
    def test_unconstrained_marginal_is_weak(self):
        m = CappedHoseModel(["a", "b", "c"], {"a": 10, "b": 1, "c": 1},
                            {("a", "b"): 2, ("a", "c"): 4})
        assert marginal_strength(m, "a") == 0.0

    def test_marginal_at_max_peak_is_strong(self):
        m = CappedHoseModel(["a", "b", "c"], {"a": 4, "b": 1, "c": 1},
                            {("a", "b"): 2, ("a", "c"): 4})
        assert marginal_strength(m, "a") == 1.0

    def test_midpoint(self):
        # peaks {2,4}, U=5 -> 1 - (5-4)/(6-4) = 0.5
        m = CappedHoseModel(["a", "b", "c"], {"a": 5, "b": 9, "c": 9},
                            {("a", "b"): 2, ("a", "c"): 4})
        assert marginal_strength(m, "a") == pytest.approx(0.5)

    def test_degenerate_interval_is_zero(self):
        m = CappedHoseModel(["a", "b"], {"a": 1, "b": 1}, {("a", "b"): 3})
        assert marginal_strength(m, "a") == 0.0


class TestPeakStrength:
    def test_zero_peak_is_strong(self):
        m = CappedHoseModel(["a", "b"], {"a": 3, "b": 5}, {})
        assert peak_strength(m, "a", "b") == 1.0

    def test_saturating_peak_is_weak(self):
        m = CappedHoseModel(["a", "b"], {"a": 3, "b": 5}, {("a", "b"): 3})
        assert peak_strength(m, "a", "b") == 0.0

    def test_midpoint(self):
        m = CappedHoseModel(["a", "b"], {"a": 3, "b": 5}, {("a", "b"): 1.5})
        assert peak_strength(m, "a", "b") == pytest.approx(0.5)

    def test_zero_marginal_rule(self):
        m = CappedHoseModel(["a", "b"], {"a": 0, "b": 5}, {("a", "b"): 1})
        assert peak_strength(m, "a", "b") == 0.0


class TestStrengthVectors:
    def test_saturating_peaks_zero_pi(self):
        m = CappedHoseModel(["a", "b", "c"], {"a": 1, "b": 1, "c": 1},
                            {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1})
        sv = strength_vectors(m)
        assert all(v == 0.0 for v in sv.pi.values())
        assert sv.pi_norm == 0.0

    def test_loose_marginals_zero_mu(self):
        m = CappedHoseModel(["a", "b", "c"], {"a": 9, "b": 9, "c": 9},
                            {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 3})
        sv = strength_vectors(m)
        assert all(v == 0.0 for v in sv.mu.values())

    def test_matches_elementwise(self):
        rng = random.Random(3)
        m = random_model(rng, 3)
        sv = strength_vectors(m)
        for i in m.nodes:
            assert sv.mu[i] == marginal_strength(m, i)
        for (i, j), v in sv.pi.items():
            assert v == peak_strength(m, i, j)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_entries_in_unit_interval(self, seed):
        m = random_model(random.Random(seed), 5)
        sv = strength_vectors(m)
        assert all(0.0 <= v <= 1.0 for v in sv.mu.values())
        assert all(0.0 <= v <= 1.0 for v in sv.pi.values())

    def test_mu_monotone_in_marginal(self):
        peaks = {("a", "b"): 2.0, ("a", "c"): 4.0}
        prev = None
        for u in [4.0, 4.5, 5.0, 5.5, 6.0]:
            m = CappedHoseModel(["a", "b", "c"], {"a": u, "b": 9, "c": 9}, peaks)
            s = marginal_strength(m, "a")
            if prev is not None:
                assert s <= prev
            prev = s

    def test_pi_monotone_in_peak(self):
        prev = None
        for u in [0.0, 0.5, 1.0, 2.0, 3.0]:
            m = CappedHoseModel(["a", "b"], {"a": 3, "b": 5}, {("a", "b"): u})
            s = peak_strength(m, "a", "b")
            if prev is not None:
                assert s <= prev
            prev = s


class TestGravityPeaks:
    def topo(self):
        return Topology(
            [Node("a", 0, 0, population=100), Node("b", 4, 0, population=200)],
            [("a", "b", 1.0)],
        )

    def test_product_over_distance(self):
        peaks = gravity_peaks(self.topo())
        assert peaks[("a", "b")] == pytest.approx(100 * 200 / 4)

    def test_zero_population(self):
        t = Topology(
            [Node("a", 0, 0, population=0), Node("b", 4, 0, population=200)],
            [("a", "b", 1.0)],
        )
        assert gravity_peaks(t)[("a", "b")] == 0.0

    def test_no_diagonal(self):
        assert all(i != j for i, j in gravity_peaks(self.topo()))

    def test_squared_exponent(self):
        peaks = gravity_peaks(self.topo(), exponent=2)
        assert peaks[("a", "b")] == pytest.approx(100 * 200 / 16)

    def test_missing_population_raises(self):
        t = Topology(
            [Node("a", 0, 0), Node("b", 4, 0, population=1)], [("a", "b", 1.0)]
        )
        with pytest.raises(ValueError, match="population"):
            gravity_peaks(t)

    def test_zero_distance_raises(self):
        t = Topology(
            [Node("a", 0, 0, population=1), Node("b", 0, 0, population=1)],
            [("a", "b", 1.0)],
        )
        with pytest.raises(ValueError, match="zero distance"):
            gravity_peaks(t)


class TestSampleMarginals:
    peaks = {("a", "b"): 2.0, ("a", "c"): 4.0, ("b", "c"): 1.0}
    nodes = ("a", "b", "c")

    def test_sigma_zero_hits_lower_endpoint(self):
        cfg = SweepConfig(s=2, k=4, seed=1)
        m = sample_marginals(self.nodes, self.peaks, cfg, (0, 0, 0, 0))
        assert m["a"] == 4.0
        assert m["b"] == 2.0
        assert m["c"] == 4.0

    def test_sigma_full_hits_upper_endpoint(self):
        cfg = SweepConfig(s=2, k=4, seed=1)
        m = sample_marginals(self.nodes, self.peaks, cfg, (2, 2, 2, 2))
        assert m["a"] == 6.0
        assert m["b"] == 3.0
        assert m["c"] == 5.0

    def test_interpolation_value(self):
        # peaks {2,4}, sigma coordinate 1 of s=2 -> 4 + (1/2)(6-4) = 5
        cfg = SweepConfig(s=2, k=1, seed=1)
        m = sample_marginals(self.nodes, self.peaks, cfg, (1,))
        assert m["a"] == pytest.approx(5.0)

    def test_always_in_relevance_interval(self):
        cfg = SweepConfig(s=3, k=5, seed=9)
        for inst, sigma in enumerate(sigma_vectors(SweepConfig(s=3, k=5, seed=9))[:50]):
            m = sample_marginals(self.nodes, self.peaks, cfg, sigma, inst)
            assert 4.0 <= m["a"] <= 6.0
            assert 2.0 <= m["b"] <= 3.0
            assert 4.0 <= m["c"] <= 5.0

    def test_reproducible(self):
        cfg = SweepConfig(s=2, k=8, seed=77)
        a = sample_marginals(self.nodes, self.peaks, cfg, (0, 1, 2, 0, 1, 2, 0, 1), 5)
        b = sample_marginals(self.nodes, self.peaks, cfg, (0, 1, 2, 0, 1, 2, 0, 1), 5)
        assert a == b

    def test_no_peaks_gives_zero(self):
        cfg = SweepConfig(s=2, k=1, seed=1)
        m = sample_marginals(("a", "b", "c"), {("a", "b"): 1.0}, cfg, (2,))
        assert m["c"] == 0.0


class TestSigmaVectors:
    def test_full_enumeration_lexicographic(self):
        vecs = sigma_vectors(SweepConfig(s=1, k=2, seed=0))
        assert vecs == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_abilene_shape(self):
        assert len(sigma_vectors(SweepConfig(s=2, k=8, seed=0))) == 6561

    def test_sampling_when_too_large(self):
        vecs = sigma_vectors(SweepConfig(s=9, k=10, seed=4, sample_count=353))
        assert len(vecs) == 353
        assert vecs == sigma_vectors(SweepConfig(s=9, k=10, seed=4, sample_count=353))

    def test_too_large_without_sample_count(self):
        with pytest.raises(ValueError, match="sample_count"):
            sigma_vectors(SweepConfig(s=9, k=10, seed=4))


class TestTimeSeries:
    def test_single_symmetric_snapshot(self):
        ds = DemandSeries(["a", "b", "c"],
                          [{("a", "b"): 2.0, ("b", "a"): 2.0, ("a", "c"): 1.0, ("c", "a"): 1.0}])
        m = ingest_time_series(ds, 1)
        assert m.peak("a", "b") == 2.0
        assert m.marginal("a") == 3.0
        assert m.marginal("b") == 2.0

    def test_dominating_snapshot_wins(self):
        snap1 = {("a", "b"): 1.0}
        snap2 = {("a", "b"): 4.0}
        ds = DemandSeries(["a", "b"], [snap1, snap2])
        full = ingest_time_series(ds, 2)
        only2 = ingest_time_series(DemandSeries(["a", "b"], [snap2]), 1)
        assert full.peaks == only2.peaks
        assert full.marginals == only2.marginals

    def test_asymmetric_symmetrization(self):
        ds = DemandSeries(["a", "b"], [{("a", "b"): 3.0, ("b", "a"): 5.0}])
        m = ingest_time_series(ds, 1)
        assert m.peak("a", "b") == 5.0

    def test_members_admitted(self):
        rng = random.Random(5)
        nodes = ["a", "b", "c", "d"]
        snaps = []
        for _ in range(4):
            snap = {}
            for i in nodes:
                for j in nodes:
                    if i != j and rng.random() < 0.6:
                        snap[(i, j)] = rng.uniform(0, 3)
            snaps.append(snap)
        ds = DemandSeries(nodes, snaps)
        m = ingest_time_series(ds, len(snaps))
        from capped_rnd.traffic import symmetrize_snapshot

        for snap in snaps:
            assert check_membership(m, dict(symmetrize_snapshot(snap)))

    def test_horizon_bounds(self):
        ds = DemandSeries(["a", "b"], [{("a", "b"): 1.0}])
        with pytest.raises(ValueError):
            ingest_time_series(ds, 2)
        with pytest.raises(ValueError):
            ingest_time_series(ds, 0)

    def test_csv_roundtrip(self):
        text = "t,src,dst,demand\n1,a,b,2.5\n0,b,a,1.0\n"
        ds = load_demand_series(text)
        assert len(ds) == 2
        assert ds.snapshots[0] == {("b", "a"): 1.0}
        assert ds.snapshots[1] == {("a", "b"): 2.5}

    def test_csv_bad_header(self):
        with pytest.raises(ValueError, match="header"):
            load_demand_series("time,src,dst,demand\n")


class TestMembership:
    def model(self):
        return CappedHoseModel(["a", "b", "c"], {"a": 3, "b": 3, "c": 3},
                               {("a", "b"): 2, ("a", "c"): 2, ("b", "c"): 2})

    def test_zero_matrix(self):
        assert check_membership(self.model(), {})

    def test_peak_violation(self):
        assert not check_membership(self.model(), {("a", "b"): 2.1})

    def test_saturated_marginal_is_member(self):
        # row sum at a is exactly 3
        assert check_membership(self.model(), {("a", "b"): 2.0, ("a", "c"): 1.0})

    def test_marginal_violation(self):
        assert not check_membership(self.model(), {("a", "b"): 2.0, ("a", "c"): 1.5})

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_membership(self.model(), {("a", "z"): 1.0})

"""Confusion counting, replication aggregation, ROC sweeps, gold-standard FDR."""

import numpy as np
import pytest

from ebvariant import (
    LatentTruth,
    ReplicationCounts,
    aggregate_replications,
    gold_standard_fdr,
    roc_from_scores,
    score_callset,
    sensitivity_at_fdr,
    threshold_call,
)


def _truth(mu):
    mu = np.asarray(mu, dtype=bool)
    m = 3
    return LatentTruth(
        mu=mu,
        theta=np.where(mu[:, None], 0.01, 0.0) * np.ones((mu.size, m)),
        n_alt=np.zeros((mu.size, m), dtype=np.int64),
    )


def _calls(decisions):
    decisions = np.asarray(decisions, dtype=bool)
    scores = np.where(decisions, 0.0, 1.0)
    return threshold_call(scores, t=0.5)


class TestScoreCallset:
    def test_all_accept(self):
        counts = score_callset(_calls([0, 0, 0]), _truth([1, 0, 1]))
        assert (counts.rejections, counts.false_rejections) == (0, 0)
        assert counts.acceptances == 3
        assert counts.false_acceptances == 2

    def test_perfect_oracle(self):
        counts = score_callset(_calls([1, 0, 1]), _truth([1, 0, 1]))
        assert counts.false_rejections == 0
        assert counts.false_acceptances == 0
        assert counts.rejections == 2

    def test_adversarial_rejects_only_nulls(self):
        counts = score_callset(_calls([0, 1, 0]), _truth([1, 0, 1]))
        assert counts.false_rejections == counts.rejections == 1
        assert counts.n_nonnull == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            score_callset(_calls([0, 0]), _truth([1, 0, 1]))


class TestAggregateReplications:
    def test_mean_of_ratios_not_ratio_of_means(self):
        reps = [
            ReplicationCounts(10, 1, 90, 0, 10, 100),
            ReplicationCounts(0, 0, 100, 10, 10, 100),
        ]
        report = aggregate_replications(reps)
        assert report.fdr == pytest.approx(0.05)   # (0.1 + 0) / 2
        assert report.er == pytest.approx(5.0)
        assert report.ev == pytest.approx(0.5)
        assert report.fdr != pytest.approx(report.ev / report.er)

    def test_identical_replications(self):
        rep = ReplicationCounts(20, 2, 80, 5, 25, 100)
        report = aggregate_replications([rep, rep, rep])
        assert report.er == 20.0
        assert report.ev == 2.0
        assert report.fdr == pytest.approx(0.1)
        assert report.sensitivity == pytest.approx(18 / 25)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_replications([])

    def test_aggregate_fdr_in_convex_hull(self, rng):
        reps = []
        for _ in range(10):
            r = int(rng.integers(0, 50))
            v = int(rng.integers(0, r + 1))
            reps.append(ReplicationCounts(r, v, 100 - r, 0, 30, 100))
        report = aggregate_replications(reps)
        ratios = [c.false_rejections / max(c.rejections, 1) for c in reps]
        assert min(ratios) - 1e-12 <= report.fdr <= max(ratios) + 1e-12


class TestRocFromScores:
    def test_all_null_truth(self):
        scores = np.linspace(0.0, 1.0, 20)
        curve = roc_from_scores(scores, _truth(np.zeros(20)), max_calls=10)
        assert np.all(curve.sensitivity == 0.0)
        assert np.all(curve.fdr == 1.0)

    def test_perfect_separation(self):
        mu = np.array([1, 1, 0, 0, 0], dtype=bool)
        scores = np.array([0.01, 0.02, 0.8, 0.9, 0.95])
        curve = roc_from_scores(scores, _truth(mu), max_calls=5)
        assert curve.sensitivity[1] == pytest.approx(1.0)
        assert curve.fdr[1] == pytest.approx(0.0)
        assert sensitivity_at_fdr(curve, 0.0) == pytest.approx(1.0)

    def test_replication_averaging(self):
        mu = np.array([1, 0], dtype=bool)
        s1 = np.array([0.1, 0.9])   # correct ranking
        s2 = np.array([0.9, 0.1])   # inverted ranking
        curve = roc_from_scores([s1, s2], [_truth(mu), _truth(mu)], max_calls=1)
        assert curve.fdr[0] == pytest.approx(0.5)
        assert curve.sensitivity[0] == pytest.approx(0.5)

    def test_pure_function_reproducible(self, rng):
        scores = rng.random(100)
        mu = rng.random(100) < 0.2
        c1 = roc_from_scores(scores, _truth(mu), max_calls=50)
        c2 = roc_from_scores(scores.copy(), _truth(mu.copy()), max_calls=50)
        assert np.array_equal(c1.fdr, c2.fdr)
        assert np.array_equal(c1.sensitivity, c2.sensitivity)

    def test_sensitivity_nondecreasing_in_rank(self, rng):
        scores = rng.random(200)
        mu = rng.random(200) < 0.1
        curve = roc_from_scores(scores, _truth(mu), max_calls=200)
        assert np.all(np.diff(curve.sensitivity) >= -1e-15)

    def test_bad_max_calls(self):
        with pytest.raises(ValueError):
            roc_from_scores(np.array([0.5]), _truth([0]), max_calls=0)


class TestGoldStandardFdr:
    def test_all_calls_correct(self):
        calls = _calls([1, 1, 0])
        gold = {"s1": True, "s2": True, "s3": False}
        report = gold_standard_fdr(calls, ["s1", "s2", "s3"], gold)
        assert report.fdr == 0.0
        assert (report.tp, report.fp, report.other) == (2, 0, 0)

    def test_counts_and_ratio(self):
        decisions = np.zeros(115, dtype=bool)
        decisions[:115] = True
        ids = [f"v{i}" for i in range(115)]
        gold = {f"v{i}": True for i in range(90)}
        gold.update({f"v{i}": False for i in range(90, 100)})
        # ids 100..114 not in gold -> other
        report = gold_standard_fdr(_calls(decisions), ids, gold)
        assert (report.tp, report.fp, report.other) == (90, 10, 15)
        assert report.fdr == pytest.approx(0.1)

    def test_no_overlap_reports_none(self):
        report = gold_standard_fdr(_calls([1, 1]), ["a", "b"], {"zzz": True})
        assert report.fdr is None
        assert report.other == 2

    def test_alignment_checked(self):
        with pytest.raises(ValueError):
            gold_standard_fdr(_calls([1, 1]), ["a"], {})


class TestStepUpIntegration:
    def test_scoring_pipeline_consistency(self, small_dataset):
        """BFDR accounting agrees between the call set and confusion counts."""
        design, data, truth = small_dataset
        from ebvariant import call_pipeline

        calls = call_pipeline(data, design, alpha=0.05, mode="empirical")
        counts = score_callset(calls, truth)
        assert counts.rejections == calls.num_rejected
        assert counts.rejections + counts.acceptances == data.n_sites

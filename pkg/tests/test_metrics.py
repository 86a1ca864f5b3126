import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fakery.errors import LengthMismatchError, NoPositivesError, SingleClassError
from fakery.metrics import (
    ConfusionCounts,
    brier,
    confusion,
    evaluate,
    pr_auc,
    roc_auc,
    threshold_metrics,
    tune_threshold,
)
from fakery.models import rank_to_unit

from oracles import (
    brier_naive,
    pr_auc_steps,
    roc_auc_pairs,
    threshold_metrics_naive,
    tune_threshold_naive,
)


def _random_instance(rng, n_max=12):
    """Labels with both classes and probabilities with injected ties."""
    while True:
        n = int(rng.integers(2, n_max + 1))
        y = rng.integers(0, 2, size=n)
        if 0 < y.sum() < n:
            break
    p = rng.choice(np.round(rng.uniform(size=5), 2), size=n)
    return y, p


class TestConfusion:
    def test_basic(self):
        c = confusion([1, 0], [0.9, 0.1], 0.5)
        assert (c.tp, c.tn, c.fp, c.fn) == (1, 1, 0, 0)

    def test_tau_zero_all_positive(self):
        c = confusion([1, 0, 0], [0.0, 0.0, 0.5], 0.0)
        assert c.fp == 2 and c.fn == 0

    def test_ties_at_threshold(self):
        c = confusion([1, 1, 0, 0], [0.6, 0.4, 0.6, 0.4], 0.5)
        assert (c.tp, c.fn, c.fp, c.tn) == (1, 1, 1, 1)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            confusion([1, 0], [0.5], 0.5)


class TestThresholdMetrics:
    def test_balanced_mistakes(self):
        got = threshold_metrics(ConfusionCounts(tp=1, fp=1, tn=1, fn=1))
        assert got == (0.5, 0.5, 0.5, 0.5, 0.0)

    def test_perfect(self):
        _, _, f1, balacc, mcc = threshold_metrics(ConfusionCounts(tp=3, fp=0, tn=4, fn=0))
        assert (f1, balacc, mcc) == (1.0, 1.0, 1.0)

    def test_hand_arithmetic(self):
        prec, rec, f1, balacc, mcc = threshold_metrics(
            ConfusionCounts(tp=3, fp=1, tn=4, fn=2)
        )
        assert prec == 0.75
        assert rec == 0.6
        assert abs(f1 - 2 * 0.75 * 0.6 / 1.35) <= 1e-15
        assert abs(balacc - 0.7) <= 1e-15
        assert abs(mcc - 10 / np.sqrt(600)) <= 1e-15

    def test_zero_denominators(self):
        got = threshold_metrics(ConfusionCounts(tp=0, fp=0, tn=2, fn=2))
        assert got[0] == 0.0 and got[2] == 0.0 and got[4] == 0.0


class TestBrier:
    def test_exact_predictions(self):
        assert brier([0, 1], [0.0, 1.0]) == 0.0

    def test_all_half(self):
        assert brier([0, 1, 1], [0.5, 0.5, 0.5]) == 0.25

    def test_arithmetic(self):
        assert abs(brier([1, 0], [0.8, 0.4]) - 0.10) <= 1e-15


class TestRocAuc:
    def test_separated(self):
        assert roc_auc([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9]) == 1.0

    def test_all_tied(self):
        assert roc_auc([0, 1, 0, 1], [0.5] * 4) == 0.5

    def test_single_class(self):
        with pytest.raises(SingleClassError):
            roc_auc([1, 1], [0.1, 0.2])

    def test_matches_pair_counting(self, rng):
        for _ in range(200):
            y, p = _random_instance(rng)
            assert abs(roc_auc(y, p) - roc_auc_pairs(list(y), list(p))) <= 1e-12


class TestPrAuc:
    def test_separated(self):
        assert pr_auc([0, 1], [0.1, 0.9]) == 1.0

    def test_worst_order_two_samples(self):
        assert pr_auc([1, 0], [0.2, 0.9]) == 0.5

    def test_no_positives(self):
        with pytest.raises(NoPositivesError):
            pr_auc([0, 0], [0.1, 0.2])

    def test_matches_step_sum(self, rng):
        for _ in range(200):
            y, p = _random_instance(rng)
            assert abs(pr_auc(y, p) - pr_auc_steps(list(y), list(p))) <= 1e-12


class TestTuneThreshold:
    def test_clean_separation(self):
        result = tune_threshold([1, 1, 0, 0], [0.9, 0.8, 0.7, 0.1])
        assert result.tau_star == 0.8
        assert result.val_f1 == 1.0
        assert result.candidates_evaluated == 6

    def test_tie_prefers_smaller_tau(self):
        result = tune_threshold([1, 0], [0.6, 0.6])
        assert result.tau_star == 0.0
        assert abs(result.val_f1 - 2 / 3) <= 1e-15

    def test_distinct_separable(self, rng):
        p_pos = [0.7, 0.8, 0.9]
        p_neg = [0.1, 0.2, 0.3]
        result = tune_threshold([1, 1, 1, 0, 0, 0], p_pos + p_neg)
        assert result.val_f1 == 1.0
        assert result.tau_star == 0.7

    def test_single_class(self):
        with pytest.raises(SingleClassError):
            tune_threshold([1, 1], [0.2, 0.9])

    def test_matches_bruteforce(self, rng):
        for _ in range(100):
            y, p = _random_instance(rng)
            got = tune_threshold(y, p)
            want_tau, want_f1 = tune_threshold_naive(list(y), list(p))
            assert got.tau_star == want_tau
            assert abs(got.val_f1 - want_f1) <= 1e-12

    def test_reported_f1_consistent(self, rng):
        y, p = _random_instance(rng)
        got = tune_threshold(y, p)
        _, _, f1, _, _ = threshold_metrics(confusion(y, p, got.tau_star))
        assert got.val_f1 == f1


class TestEvaluate:
    def test_perfect(self):
        report = evaluate([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9], 0.5)
        assert report.pr_auc == report.roc_auc == report.f1 == 1.0
        assert report.balanced_accuracy == 1.0 and report.mcc == 1.0
        assert report.brier < 0.05

    def test_degenerate_half_probabilities(self):
        report = evaluate([0, 1, 0, 1], [0.5] * 4, 0.5)
        assert abs(report.f1 - 2 / 3) <= 1e-15
        assert report.balanced_accuracy == 0.5
        assert report.mcc == 0.0
        assert report.brier == 0.25

    def test_rank_scores_with_one_flip(self, rng):
        y = np.array([0, 0, 0, 1, 1, 1])
        scores = y.astype(float).copy()
        scores[0], scores[3] = scores[3], scores[0]  # one flip
        p = rank_to_unit(scores)
        report = evaluate(y, p, 0.5)
        prec, rec, f1, balacc, mcc = threshold_metrics_naive(list(y), list(p), 0.5)
        assert abs(report.f1 - f1) <= 1e-12
        assert abs(report.balanced_accuracy - balacc) <= 1e-12
        assert abs(report.mcc - mcc) <= 1e-12
        assert abs(report.roc_auc - roc_auc_pairs(list(y), list(p))) <= 1e-12
        assert abs(report.pr_auc - pr_auc_steps(list(y), list(p))) <= 1e-12
        assert abs(report.brier - brier_naive(list(y), list(p))) <= 1e-12

    def test_report_dict_keys(self):
        doc = evaluate([0, 1], [0.1, 0.9], 0.5).to_dict()
        assert set(doc) == {
            "pr_auc", "roc_auc", "f1", "mcc", "balanced_accuracy", "brier",
            "tau", "counts",
        }
        assert set(doc["counts"]) == {"tp", "fp", "tn", "fn"}


@given(
    data=st.lists(
        st.tuples(st.integers(0, 1), st.floats(0.01, 0.99)),
        min_size=4,
        max_size=40,
    )
)
@settings(max_examples=100, deadline=None)
def test_auc_monotone_transform_invariance(data):
    y = np.array([d[0] for d in data])
    p = np.array([d[1] for d in data])
    if 0 < y.sum() < len(y):
        q = 1.0 / (1.0 + np.exp(-(3.0 * p - 1.0)))  # strictly increasing
        assert roc_auc(y, p) == roc_auc(y, q)
        assert pr_auc(y, p) == pr_auc(y, q)
        # The tuned partition (samples predicted positive) is also invariant.
        tau_p = tune_threshold(y, p).tau_star
        tau_q = tune_threshold(y, q).tau_star
        assert ((p >= tau_p) == (q >= tau_q)).all()


@given(
    data=st.lists(
        st.tuples(st.integers(0, 1), st.floats(0.0, 1.0)),
        min_size=4,
        max_size=30,
    ),
    tau=st.floats(0.0, 1.0),
)
@settings(max_examples=100, deadline=None)
def test_balanced_accuracy_label_swap_symmetry(data, tau):
    y = np.array([d[0] for d in data])
    p = np.array([d[1] for d in data])
    if 0 < y.sum() < len(y):
        c = confusion(y, p, tau)
        # Complement rule: predict positive when 1-p > 1-tau, i.e. p < tau.
        swapped = ConfusionCounts(tp=c.tn, fp=c.fn, tn=c.tp, fn=c.fp)
        _, _, _, bal_a, _ = threshold_metrics(c)
        _, _, _, bal_b, _ = threshold_metrics(swapped)
        assert abs(bal_a - bal_b) <= 1e-12

"""Ranking metrics, thresholded metrics, calibration, and threshold tuning."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import LengthMismatchError, NoPositivesError, SingleClassError


@dataclass
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass
class ThresholdResult:
    tau_star: float
    val_f1: float
    candidates_evaluated: int


@dataclass
class MetricsReport:
    pr_auc: float
    roc_auc: float
    f1: float
    mcc: float
    balanced_accuracy: float
    brier: float
    tau: float
    counts: ConfusionCounts

    def to_dict(self) -> dict:
        return {
            "pr_auc": self.pr_auc,
            "roc_auc": self.roc_auc,
            "f1": self.f1,
            "mcc": self.mcc,
            "balanced_accuracy": self.balanced_accuracy,
            "brier": self.brier,
            "tau": self.tau,
            "counts": vars(self.counts),
        }


def _check_paired(y, p):
    y = np.asarray(y)
    p = np.asarray(p, dtype=np.float64)
    if y.shape != p.shape:
        raise LengthMismatchError(f"{y.shape} labels vs {p.shape} predictions")
    if y.size == 0:
        raise LengthMismatchError("empty inputs")
    return y, p


def confusion(y, p, tau: float) -> ConfusionCounts:
    """Counts under the decision rule: predict positive when p >= tau."""
    y, p = _check_paired(y, p)
    pred = p >= tau
    pos = y == 1
    return ConfusionCounts(
        tp=int(np.sum(pred & pos)),
        fp=int(np.sum(pred & ~pos)),
        tn=int(np.sum(~pred & ~pos)),
        fn=int(np.sum(~pred & pos)),
    )


def _safe_div(num: float, den: float) -> float:
    return num / den if den != 0 else 0.0


def threshold_metrics(c: ConfusionCounts):
    """(precision, recall, f1, balanced_accuracy, mcc); 0/0 defined as 0."""
    precision = _safe_div(c.tp, c.tp + c.fp)
    recall = _safe_div(c.tp, c.tp + c.fn)
    f1 = _safe_div(2 * precision * recall, precision + recall)
    tnr = _safe_div(c.tn, c.tn + c.fp)
    balanced_accuracy = 0.5 * (recall + tnr)
    denom = math.sqrt((c.tp + c.fp) * (c.tp + c.fn)) * math.sqrt(
        (c.tn + c.fp) * (c.tn + c.fn)
    )
    mcc = _safe_div(c.tp * c.tn - c.fp * c.fn, denom)
    return precision, recall, f1, balanced_accuracy, mcc


def brier(y, p) -> float:
    y, p = _check_paired(y, p)
    return float(np.mean((p - y) ** 2))


def roc_auc(y, p) -> float:
    """Tie-aware Mann-Whitney statistic."""
    y, p = _check_paired(y, p)
    n_pos = int(np.sum(y == 1))
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("both classes required for ROC-AUC")
    ranks = rankdata(p, method="average")
    return float((ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def pr_auc(y, p) -> float:
    """Average precision: descending-score sweep, tied scores grouped."""
    y, p = _check_paired(y, p)
    n_pos = int(np.sum(y == 1))
    if n_pos == 0:
        raise NoPositivesError("at least one positive required for PR-AUC")
    order = np.argsort(-p, kind="stable")
    y_sorted = y[order]
    p_sorted = p[order]
    # Group boundaries: index of the last element of each tied-score run.
    ends = np.flatnonzero(np.append(p_sorted[1:] != p_sorted[:-1], True))
    cum_tp = np.cumsum(y_sorted == 1)[ends]
    precision = cum_tp / (ends + 1)
    recall = cum_tp / n_pos
    delta_recall = np.diff(np.append(0.0, recall))
    return float(np.sum(delta_recall * precision))


def tune_threshold(y_val, p_val) -> ThresholdResult:
    """Exhaustive F1 scan over unique predictions plus {0, 1}.

    Ties on F1 break to the higher balanced accuracy, then the smaller tau.
    """
    y_val, p_val = _check_paired(y_val, p_val)
    if len(np.unique(y_val)) < 2:
        raise SingleClassError("both classes required for threshold tuning")
    candidates = np.unique(np.concatenate([p_val, [0.0, 1.0]]))
    best = None  # (f1, balacc, -tau) maximized
    best_tau = 0.0
    best_f1 = 0.0
    for tau in candidates:
        _, _, f1, balacc, _ = threshold_metrics(confusion(y_val, p_val, float(tau)))
        key = (f1, balacc, -float(tau))
        if best is None or key > best:
            best = key
            best_tau = float(tau)
            best_f1 = f1
    return ThresholdResult(
        tau_star=best_tau, val_f1=best_f1, candidates_evaluated=len(candidates)
    )


def evaluate(y_test, p_test, tau: float) -> MetricsReport:
    """All six report metrics at a fixed threshold."""
    y_test, p_test = _check_paired(y_test, p_test)
    if len(np.unique(y_test)) < 2:
        raise SingleClassError("both classes required for evaluation")
    counts = confusion(y_test, p_test, tau)
    _, _, f1, balacc, mcc = threshold_metrics(counts)
    return MetricsReport(
        pr_auc=pr_auc(y_test, p_test),
        roc_auc=roc_auc(y_test, p_test),
        f1=f1,
        mcc=mcc,
        balanced_accuracy=balacc,
        brier=brier(y_test, p_test),
        tau=tau,
        counts=counts,
    )

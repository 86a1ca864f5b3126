"""Soft voting and the rank-based score-to-probability transform."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass
class VotingModel:
    members: list

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        probs = np.stack([m.predict_proba(X) for m in self.members])
        return probs.mean(axis=0)


def rank_to_unit(scores) -> np.ndarray:
    """Map arbitrary real scores into (0, 1) preserving order.

    p_i = (avg_rank_i - 0.5) / n with average ranks for ties, so any strictly
    increasing transform of the scores leaves the output unchanged.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("scores must be non-empty")
    ranks = rankdata(scores, method="average")
    return (ranks - 0.5) / scores.size

"""CART-style trees: the shared TreeNode plus random forest / extra-trees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimensionError, SingleClassError
from ..rng import SplitMix64


@dataclass
class TreeNode:
    """Either a split (feature/threshold/children) or a leaf (value).

    Routing: x[feature] <= threshold goes left.
    """

    feature: Optional[int] = None
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def predict_one(self, x: np.ndarray) -> float:
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.value

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Vectorized apply via recursive index partitioning."""
        out = np.empty(X.shape[0])
        stack = [(self, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = node.value
            else:
                go_left = X[idx, node.feature] <= node.threshold
                stack.append((node.left, idx[go_left]))
                stack.append((node.right, idx[~go_left]))
        return out


def _gini_best_threshold(values: np.ndarray, y: np.ndarray):
    """Best midpoint threshold for one feature by weighted Gini impurity.

    Returns (impurity, threshold) or None when the feature is constant.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    t = y[order].astype(np.float64)
    n = len(v)
    distinct = np.flatnonzero(v[1:] > v[:-1])  # split after position i
    if distinct.size == 0:
        return None
    cum_pos = np.cumsum(t)
    n_left = distinct + 1.0
    n_right = n - n_left
    pos_left = cum_pos[distinct]
    pos_right = cum_pos[-1] - pos_left
    p_l = pos_left / n_left
    p_r = pos_right / n_right
    gini = n_left * 2 * p_l * (1 - p_l) + n_right * 2 * p_r * (1 - p_r)
    best = int(np.argmin(gini))
    i = distinct[best]
    threshold = 0.5 * (v[i] + v[i + 1])
    return float(gini[best]) / n, threshold


def _eval_threshold(values: np.ndarray, y: np.ndarray, threshold: float):
    left = values <= threshold
    n_l = int(left.sum())
    n_r = len(values) - n_l
    if n_l == 0 or n_r == 0:
        return None
    p_l = float(y[left].mean())
    p_r = float(y[~left].mean())
    gini = n_l * 2 * p_l * (1 - p_l) + n_r * 2 * p_r * (1 - p_r)
    return gini / len(values), threshold


def _sample_features(rng: SplitMix64, d: int, k: int) -> list[int]:
    """k distinct feature indices via partial Fisher-Yates."""
    pool = list(range(d))
    for i in range(k):
        j = i + rng.next_below(d - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def _grow_tree(X, y, idx, rng: SplitMix64, mode: str, max_features: int) -> TreeNode:
    y_node = y[idx]
    p = float(y_node.mean())
    if p == 0.0 or p == 1.0 or idx.size < 2:
        return TreeNode(value=p)
    d = X.shape[1]
    best = None  # (impurity, feature, threshold)
    for f in sorted(_sample_features(rng, d, max_features)):
        values = X[idx, f]
        if mode == "random_forest":
            cand = _gini_best_threshold(values, y_node)
        else:
            lo, hi = float(values.min()), float(values.max())
            if lo == hi:
                cand = None
            else:
                cand = _eval_threshold(values, y_node, lo + rng.next_float() * (hi - lo))
        if cand is None:
            continue
        impurity, threshold = cand
        if best is None or impurity < best[0] or (
            impurity == best[0] and (f, threshold) < best[1:]
        ):
            best = (impurity, f, threshold)
    if best is None:
        return TreeNode(value=p)
    _, f, threshold = best
    go_left = X[idx, f] <= threshold
    left_idx, right_idx = idx[go_left], idx[~go_left]
    if left_idx.size == 0 or right_idx.size == 0:
        return TreeNode(value=p)
    return TreeNode(
        feature=f,
        threshold=threshold,
        left=_grow_tree(X, y, left_idx, rng, mode, max_features),
        right=_grow_tree(X, y, right_idx, rng, mode, max_features),
    )


@dataclass
class ForestModel:
    trees: list[TreeNode]
    mode: str
    seed: int
    n_features: int

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionError(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        acc = np.zeros(X.shape[0])
        for tree in self.trees:
            acc += tree.predict(X)
        return acc / len(self.trees)


def forest_fit(
    X: np.ndarray,
    y: np.ndarray,
    mode: str = "random_forest",
    n_trees: int = 500,
    seed: int = 0,
) -> ForestModel:
    """Bagged Gini trees (random_forest) or randomized-threshold trees
    (extra_trees).  Trees grow until pure; sqrt(d) candidate features per
    node; all randomness comes from SplitMix64 streams derived from seed."""
    if mode not in ("random_forest", "extra_trees"):
        raise ValueError(f"unknown forest mode {mode!r}")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(np.unique(y)) < 2:
        raise SingleClassError("both classes required to fit")
    n, d = X.shape
    max_features = max(1, int(round(math.sqrt(d))))
    master = SplitMix64(seed)
    trees = []
    for _ in range(n_trees):
        rng = master.spawn()
        if mode == "random_forest":
            idx = (rng.block_u64(n) % np.uint64(n)).astype(np.int64)
        else:
            idx = np.arange(n)
        trees.append(_grow_tree(X, y, idx, rng, mode, max_features))
    return ForestModel(trees=trees, mode=mode, seed=seed, n_features=d)

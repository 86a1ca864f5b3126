"""Histogram gradient-boosted trees with leaf-wise or level-wise growth.

Second-order boosting on the logistic loss: per round g = p - y, h = p(1-p);
split gain = 0.5 * (GL^2/(HL+lam) + GR^2/(HR+lam) - (GL+GR)^2/(HL+HR+lam));
leaf value = -G/(H+lam).  Features are binned once by training-set quantiles
and histograms are accumulated per node, with the sibling histogram obtained
by subtraction from the parent.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, SingleClassError
from .trees import TreeNode

_BIN_STRIDE = 256  # fixed per-feature stride in the flattened histogram


@dataclass
class GbdtParams:
    n_trees: int = 500
    learning_rate: float = 0.05
    growth: str = "leaf_wise"  # or "level_wise"
    max_leaves: int = 31
    max_depth: int = 6
    l2_lambda: float = 1.0
    min_child_weight: float = 1.0
    n_bins: int = 255


@dataclass
class GbdtModel:
    base_score: float
    learning_rate: float
    trees: list[TreeNode]
    params: GbdtParams
    bin_edges: list[np.ndarray]
    n_features: int
    train_loss: list[float] = field(default_factory=list)

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionError(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        raw = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            raw += self.learning_rate * tree.predict(X)
        return raw

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        p = 1.0 / (1.0 + np.exp(-self.raw_scores(X)))
        # Strictly inside (0, 1) despite float saturation.
        return np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))


def quantile_bin_edges(X: np.ndarray, n_bins: int) -> list[np.ndarray]:
    """Per-feature interior quantile edges with duplicates collapsed."""
    qs = np.arange(1, n_bins) / n_bins
    table = np.quantile(X, qs, axis=0)
    return [np.unique(table[:, f]) for f in range(X.shape[1])]


def bin_matrix(X: np.ndarray, edges: list[np.ndarray]) -> np.ndarray:
    """Map values to bin ids: bin b holds values <= edges[b] (left routing)."""
    binned = np.empty(X.shape, dtype=np.uint8)
    for f, e in enumerate(edges):
        binned[:, f] = np.searchsorted(e, X[:, f], side="left")
    return binned


class _HistBuilder:
    def __init__(self, binned: np.ndarray, chunk: int = 4096):
        self._binned = binned
        self._d = binned.shape[1]
        self._offsets = (np.arange(self._d, dtype=np.int32) * _BIN_STRIDE)[None, :]
        self._chunk = chunk

    def build(self, idx: np.ndarray, g: np.ndarray, h: np.ndarray):
        """(G, H) histograms of shape (d, 256) over the given sample rows."""
        size = self._d * _BIN_STRIDE
        hist_g = np.zeros(size)
        hist_h = np.zeros(size)
        for start in range(0, idx.size, self._chunk):
            rows = idx[start : start + self._chunk]
            flat = (self._binned[rows].astype(np.int32) + self._offsets).ravel()
            hist_g += np.bincount(flat, weights=np.repeat(g[rows], self._d), minlength=size)
            hist_h += np.bincount(flat, weights=np.repeat(h[rows], self._d), minlength=size)
        return hist_g.reshape(self._d, _BIN_STRIDE), hist_h.reshape(self._d, _BIN_STRIDE)


def _best_split(hist_g, hist_h, n_bins_per_feature, lam, min_child_weight):
    """Scan all (feature, bin) cuts; returns (gain, feature, bin) or None.

    Ties resolve to the lowest feature index, then the lowest bin.
    """
    best = None
    for f, nb in enumerate(n_bins_per_feature):
        if nb < 2:
            continue
        gl = np.cumsum(hist_g[f, : nb - 1])
        hl = np.cumsum(hist_h[f, : nb - 1])
        g_tot = gl[-1] + hist_g[f, nb - 1]
        h_tot = hl[-1] + hist_h[f, nb - 1]
        gr = g_tot - gl
        hr = h_tot - hl
        ok = (hl >= min_child_weight) & (hr >= min_child_weight)
        if not ok.any():
            continue
        gain = 0.5 * (
            gl**2 / (hl + lam) + gr**2 / (hr + lam) - g_tot**2 / (h_tot + lam)
        )
        gain[~ok] = -np.inf
        b = int(np.argmax(gain))
        if gain[b] > 0 and (best is None or gain[b] > best[0]):
            best = (float(gain[b]), f, b)
    return best


class _NodeState:
    __slots__ = ("node", "idx", "hist_g", "hist_h", "depth")

    def __init__(self, node, idx, hist_g, hist_h, depth):
        self.node = node
        self.idx = idx
        self.hist_g = hist_g
        self.hist_h = hist_h
        self.depth = depth


def _split_node(state, best, binned, builder, g, h, edges):
    gain, f, b = best
    node = state.node
    node.feature = f
    node.threshold = float(edges[f][b])
    go_left = binned[state.idx, f] <= b
    left_idx, right_idx = state.idx[go_left], state.idx[~go_left]
    node.left = TreeNode()
    node.right = TreeNode()
    # Build the smaller child's histogram; derive the sibling by subtraction.
    if left_idx.size <= right_idx.size:
        lg, lh = builder.build(left_idx, g, h)
        rg, rh = state.hist_g - lg, state.hist_h - lh
    else:
        rg, rh = builder.build(right_idx, g, h)
        lg, lh = state.hist_g - rg, state.hist_h - rh
    return (
        _NodeState(node.left, left_idx, lg, lh, state.depth + 1),
        _NodeState(node.right, right_idx, rg, rh, state.depth + 1),
    )


def _finalize_leaf(state, g, h, lam):
    gs = float(g[state.idx].sum())
    hs = float(h[state.idx].sum())
    state.node.value = -gs / (hs + lam)


def _grow_round(binned, builder, g, h, edges, nb_per_feature, params: GbdtParams):
    lam = params.l2_lambda
    root = TreeNode()
    root_state = _NodeState(root, np.arange(binned.shape[0]), *builder.build(np.arange(binned.shape[0]), g, h), 0)
    leaves = [root_state]

    if params.growth == "leaf_wise":
        heap = []
        counter = 0
        best = _best_split(root_state.hist_g, root_state.hist_h, nb_per_feature, lam, params.min_child_weight)
        if best is not None:
            heapq.heappush(heap, (-best[0], counter, root_state, best))
            counter += 1
        n_leaves = 1
        while heap and n_leaves < params.max_leaves:
            _, _, state, best = heapq.heappop(heap)
            leaves.remove(state)
            left, right = _split_node(state, best, binned, builder, g, h, edges)
            leaves.extend([left, right])
            n_leaves += 1
            for child in (left, right):
                cand = _best_split(child.hist_g, child.hist_h, nb_per_feature, lam, params.min_child_weight)
                if cand is not None:
                    heapq.heappush(heap, (-cand[0], counter, child, cand))
                    counter += 1
    elif params.growth == "level_wise":
        frontier = [root_state]
        while frontier:
            next_frontier = []
            for state in frontier:
                if state.depth >= params.max_depth:
                    continue
                best = _best_split(state.hist_g, state.hist_h, nb_per_feature, lam, params.min_child_weight)
                if best is None:
                    continue
                leaves.remove(state)
                left, right = _split_node(state, best, binned, builder, g, h, edges)
                leaves.extend([left, right])
                next_frontier.extend([left, right])
            frontier = next_frontier
    else:
        raise ValueError(f"unknown growth policy {params.growth!r}")

    for state in leaves:
        _finalize_leaf(state, g, h, lam)
    return root, leaves


def _log_loss(y: np.ndarray, p: np.ndarray) -> float:
    eps = 1e-15
    p = np.clip(p, eps, 1 - eps)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def gbdt_fit(X: np.ndarray, y: np.ndarray, params: GbdtParams | None = None) -> GbdtModel:
    params = params or GbdtParams()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(np.unique(y)) < 2:
        raise SingleClassError("both classes required to fit")

    edges = quantile_bin_edges(X, params.n_bins)
    binned = bin_matrix(X, edges)
    nb_per_feature = [len(e) + 1 for e in edges]
    builder = _HistBuilder(binned)

    p_bar = float(y.mean())
    base_score = math.log(p_bar / (1.0 - p_bar))
    raw = np.full(len(y), base_score)
    trees = []
    losses = []
    for _ in range(params.n_trees):
        p = 1.0 / (1.0 + np.exp(-raw))
        g = p - y
        h = p * (1.0 - p)
        root, leaves = _grow_round(binned, builder, g, h, edges, nb_per_feature, params)
        trees.append(root)
        for state in leaves:
            raw[state.idx] += params.learning_rate * state.node.value
        losses.append(_log_loss(y, 1.0 / (1.0 + np.exp(-raw))))

    return GbdtModel(
        base_score=base_score,
        learning_rate=params.learning_rate,
        trees=trees,
        params=params,
        bin_edges=edges,
        n_features=X.shape[1],
        train_loss=losses,
    )

"""Versioned JSON persistence for every model kind.

JSON floats round-trip exactly (shortest-repr encoding), so a loaded model
reproduces the original's predictions bitwise.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import FormatError
from .gbdt import GbdtModel, GbdtParams
from .linear import LinearModel, Standardizer
from .trees import ForestModel, TreeNode
from .voting import VotingModel

ARTIFACT_VERSION = 1


def _tree_to_obj(node: TreeNode):
    if node.is_leaf:
        return {"value": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_obj(node.left),
        "right": _tree_to_obj(node.right),
    }


def _tree_from_obj(obj) -> TreeNode:
    if "value" in obj:
        return TreeNode(value=obj["value"])
    return TreeNode(
        feature=obj["feature"],
        threshold=obj["threshold"],
        left=_tree_from_obj(obj["left"]),
        right=_tree_from_obj(obj["right"]),
    )


def model_to_obj(model) -> dict:
    if isinstance(model, LinearModel):
        return {
            "kind": "linear",
            "weights": model.weights.tolist(),
            "bias": model.bias,
            "mu": model.standardizer.mu.tolist(),
            "sigma": model.standardizer.sigma.tolist(),
        }
    if isinstance(model, ForestModel):
        return {
            "kind": "forest",
            "mode": model.mode,
            "seed": model.seed,
            "n_features": model.n_features,
            "trees": [_tree_to_obj(t) for t in model.trees],
        }
    if isinstance(model, GbdtModel):
        return {
            "kind": "gbdt",
            "base_score": model.base_score,
            "learning_rate": model.learning_rate,
            "n_features": model.n_features,
            "params": vars(model.params),
            "bin_edges": [e.tolist() for e in model.bin_edges],
            "trees": [_tree_to_obj(t) for t in model.trees],
        }
    if isinstance(model, VotingModel):
        return {"kind": "voting", "members": [model_to_obj(m) for m in model.members]}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_obj(obj):
    kind = obj.get("kind")
    if kind == "linear":
        return LinearModel(
            weights=np.asarray(obj["weights"], dtype=np.float64),
            bias=obj["bias"],
            standardizer=Standardizer(
                mu=np.asarray(obj["mu"], dtype=np.float64),
                sigma=np.asarray(obj["sigma"], dtype=np.float64),
            ),
        )
    if kind == "forest":
        return ForestModel(
            trees=[_tree_from_obj(t) for t in obj["trees"]],
            mode=obj["mode"],
            seed=obj["seed"],
            n_features=obj["n_features"],
        )
    if kind == "gbdt":
        return GbdtModel(
            base_score=obj["base_score"],
            learning_rate=obj["learning_rate"],
            trees=[_tree_from_obj(t) for t in obj["trees"]],
            params=GbdtParams(**obj["params"]),
            bin_edges=[np.asarray(e, dtype=np.float64) for e in obj["bin_edges"]],
            n_features=obj["n_features"],
        )
    if kind == "voting":
        return VotingModel(members=[model_from_obj(m) for m in obj["members"]])
    raise FormatError(f"unknown model kind {kind!r}")


def save_model(model, path: str) -> None:
    doc = {"version": ARTIFACT_VERSION, "model": model_to_obj(model)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_model(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != ARTIFACT_VERSION:
        raise FormatError(f"{path}: unsupported artifact version")
    return model_from_obj(doc["model"])

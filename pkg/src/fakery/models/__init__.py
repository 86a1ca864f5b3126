from .linear import LinearModel, Standardizer, fit_standardizer, logreg_fit
from .trees import ForestModel, TreeNode, forest_fit
from .gbdt import GbdtModel, GbdtParams, gbdt_fit
from .voting import VotingModel, rank_to_unit
from .serialize import load_model, save_model

__all__ = [
    "LinearModel",
    "Standardizer",
    "fit_standardizer",
    "logreg_fit",
    "ForestModel",
    "TreeNode",
    "forest_fit",
    "GbdtModel",
    "GbdtParams",
    "gbdt_fit",
    "VotingModel",
    "rank_to_unit",
    "save_model",
    "load_model",
]

"""Run orchestration: extract -> cache -> train -> tune -> evaluate -> report."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field, fields

from . import dataset as ds
from .errors import (
    CacheConflictError,
    MissingArtifactError,
    NoResultsError,
)
from .features import FeatureSpec, extract_matrix
from .metrics import evaluate, tune_threshold
from .models import (
    GbdtParams,
    VotingModel,
    forest_fit,
    gbdt_fit,
    load_model,
    logreg_fit,
    save_model,
)

MODEL_NAMES = (
    "logreg",
    "random_forest",
    "extra_trees",
    "gbdt_leafwise",
    "gbdt_levelwise",
    "voting",
)
METRIC_COLUMNS = ("pr_auc", "roc_auc", "f1", "mcc", "balanced_accuracy", "brier")


@dataclass
class RunConfig:
    data_root: str = ""
    feature_spec: str = "mixed"
    models: list[str] = field(default_factory=lambda: ["gbdt_leafwise"])
    seed: int = 42
    val_fraction: float = 0.10
    train_limit: int | None = None
    test_limit: int | None = None
    out_dir: str = "runs"
    gbdt_rounds: int = 500
    forest_trees: int = 500

    def __post_init__(self):
        for name in self.models:
            if name not in MODEL_NAMES:
                raise ValueError(f"unknown model {name!r}")

    @classmethod
    def load(cls, config_path=None, env=None, overrides=None) -> "RunConfig":
        """Defaults < JSON config < FAKERY_* env vars < explicit overrides."""
        values: dict = {}
        if config_path:
            with open(config_path, "r", encoding="utf-8") as fh:
                values.update(json.load(fh))
        env = os.environ if env is None else env
        for f in fields(cls):
            raw = env.get(f"FAKERY_{f.name.upper()}")
            if raw is not None:
                values[f.name] = _coerce(f.name, raw)
        if overrides:
            values.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce(name: str, raw: str):
    if name in ("seed", "train_limit", "test_limit", "gbdt_rounds", "forest_trees"):
        return int(raw)
    if name == "val_fraction":
        return float(raw)
    if name == "models":
        return [m for m in raw.split(",") if m]
    return raw


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _cache_path(cfg: RunConfig, split: str) -> str:
    return os.path.join(cfg.out_dir, "caches", f"{split}_{cfg.feature_spec}.hffx")


def _manifest_path(cfg: RunConfig) -> str:
    return os.path.join(cfg.out_dir, "manifest.json")


def _load_manifest(cfg: RunConfig) -> dict:
    path = _manifest_path(cfg)
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return {"caches": {}, "config": {}, "timestamps": {}}


def _save_manifest(cfg: RunConfig, manifest: dict) -> None:
    manifest["config"] = cfg.to_dict()
    with open(_manifest_path(cfg), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)


def _limited_pairs(pairs, limit):
    """Cap the pair list while keeping the class balance (limit // 2 each)."""
    if limit is None:
        return pairs
    per_class = max(1, limit // 2)
    real = [p for p in pairs if p[1] == 0][:per_class]
    fake = [p for p in pairs if p[1] == 1][:per_class]
    return real + fake


def cmd_extract(cfg: RunConfig) -> dict[str, str]:
    """Materialize one feature cache per split; returns split -> cache path."""
    spec = FeatureSpec.from_tag(cfg.feature_spec)
    os.makedirs(os.path.join(cfg.out_dir, "caches"), exist_ok=True)
    manifest = _load_manifest(cfg)
    out = {}
    for split, limit in (("train", cfg.train_limit), ("test", cfg.test_limit)):
        path = _cache_path(cfg, split)
        key = os.path.basename(path)
        if os.path.exists(path):
            if manifest["caches"].get(key) == _sha256(path):
                out[split] = path
                continue
            _, n_cols, _ = _read_header_only(path)
            if n_cols != spec.dim:
                raise CacheConflictError(
                    f"{path}: has {n_cols} columns, spec {spec.tag} implies {spec.dim}"
                )
        pairs = _limited_pairs(ds.scan_dataset(os.path.join(cfg.data_root, split)), limit)
        records = [ds.load_image(p, label) for p, label in pairs]
        matrix = extract_matrix(records, spec)
        ds.write_cache(matrix, [r.label for r in records], spec.tag, path)
        manifest["caches"][key] = _sha256(path)
        manifest["timestamps"][key] = time.strftime("%Y-%m-%dT%H:%M:%S")
        out[split] = path
    _save_manifest(cfg, manifest)
    return out


def _read_header_only(path: str):
    matrix, labels, tag = ds.read_cache(path)
    return matrix.shape[0], matrix.shape[1], tag


def _verified_cache(cfg: RunConfig, split: str):
    path = _cache_path(cfg, split)
    if not os.path.exists(path):
        raise MissingArtifactError(f"no {split} cache for spec {cfg.feature_spec}; run extract")
    manifest = _load_manifest(cfg)
    recorded = manifest["caches"].get(os.path.basename(path))
    if recorded is not None and recorded != _sha256(path):
        raise CacheConflictError(f"{path}: checksum mismatch, cache corrupted")
    return ds.read_cache(path)


def _fit_model(name: str, X, y, cfg: RunConfig):
    if name == "logreg":
        return logreg_fit(X, y, seed=cfg.seed)
    if name == "random_forest":
        return forest_fit(X, y, mode="random_forest", n_trees=cfg.forest_trees, seed=cfg.seed)
    if name == "extra_trees":
        return forest_fit(X, y, mode="extra_trees", n_trees=cfg.forest_trees, seed=cfg.seed)
    if name == "gbdt_leafwise":
        return gbdt_fit(X, y, GbdtParams(n_trees=cfg.gbdt_rounds, growth="leaf_wise"))
    if name == "gbdt_levelwise":
        return gbdt_fit(X, y, GbdtParams(n_trees=cfg.gbdt_rounds, growth="level_wise"))
    if name == "voting":
        members = [
            _fit_model(m, X, y, cfg)
            for m in ("logreg", "random_forest", "extra_trees", "gbdt_leafwise")
        ]
        return VotingModel(members=members)
    raise ValueError(f"unknown model {name!r}")


def _artifact_paths(cfg: RunConfig, model_name: str) -> dict[str, str]:
    stem = f"{model_name}_{cfg.feature_spec}"
    return {
        "model": os.path.join(cfg.out_dir, "models", f"{stem}.json"),
        "threshold": os.path.join(cfg.out_dir, "thresholds", f"{stem}.json"),
        "metrics": os.path.join(cfg.out_dir, "metrics", f"{stem}.json"),
    }


def cmd_train(cfg: RunConfig) -> dict[str, dict[str, str]]:
    """Fit each requested model on the 90% split and tune tau on the 10%."""
    X, y, _tag = _verified_cache(cfg, "train")
    split = ds.stratified_split(y, cfg.val_fraction, cfg.seed)
    X_fit, y_fit = X[split.train_idx], y[split.train_idx]
    X_val, y_val = X[split.val_idx], y[split.val_idx]
    os.makedirs(os.path.join(cfg.out_dir, "models"), exist_ok=True)
    os.makedirs(os.path.join(cfg.out_dir, "thresholds"), exist_ok=True)
    out = {}
    for name in cfg.models:
        model = _fit_model(name, X_fit, y_fit, cfg)
        result = tune_threshold(y_val, model.predict_proba(X_val))
        paths = _artifact_paths(cfg, name)
        save_model(model, paths["model"])
        with open(paths["threshold"], "w", encoding="utf-8") as fh:
            json.dump(vars(result), fh, sort_keys=True)
        out[name] = paths
    return out


def cmd_evaluate(cfg: RunConfig) -> dict[str, dict]:
    """Apply each model's frozen tau to the test cache; write metrics JSON."""
    X_test, y_test, _tag = _verified_cache(cfg, "test")
    os.makedirs(os.path.join(cfg.out_dir, "metrics"), exist_ok=True)
    out = {}
    for name in cfg.models:
        paths = _artifact_paths(cfg, name)
        if not (os.path.exists(paths["model"]) and os.path.exists(paths["threshold"])):
            raise MissingArtifactError(f"{name} was not trained for spec {cfg.feature_spec}")
        model = load_model(paths["model"])
        with open(paths["threshold"], "r", encoding="utf-8") as fh:
            tau = json.load(fh)["tau_star"]
        report = evaluate(y_test, model.predict_proba(X_test), tau)
        doc = report.to_dict()
        with open(paths["metrics"], "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True)
        out[name] = doc
    return out


def _collect_metrics(cfg: RunConfig) -> dict[tuple[str, str], dict]:
    metrics_dir = os.path.join(cfg.out_dir, "metrics")
    found = {}
    if os.path.isdir(metrics_dir):
        for fname in sorted(os.listdir(metrics_dir)):
            if not fname.endswith(".json"):
                continue
            stem = fname[:-5]
            for name in MODEL_NAMES:
                if stem.startswith(name + "_"):
                    spec_tag = stem[len(name) + 1 :]
                    with open(os.path.join(metrics_dir, fname), encoding="utf-8") as fh:
                        found[(name, spec_tag)] = json.load(fh)
                    break
    if not found:
        raise NoResultsError(f"no metrics files under {metrics_dir}")
    return found


def cmd_report(cfg: RunConfig) -> dict[str, str]:
    """Emit per-spec Markdown tables and a long-format CSV of all metrics."""
    found = _collect_metrics(cfg)
    report_dir = os.path.join(cfg.out_dir, "report")
    os.makedirs(report_dir, exist_ok=True)
    specs = sorted({spec for _, spec in found})
    outputs = {}
    for spec_tag in specs:
        rows = [(m, doc) for (m, s), doc in sorted(found.items()) if s == spec_tag]
        best = {}
        for col in METRIC_COLUMNS:
            vals = [doc[col] for _, doc in rows]
            best[col] = min(vals) if col == "brier" else max(vals)
        lines = [
            f"# Results: {spec_tag} features",
            "",
            "| Model | PR-AUC | ROC-AUC | F1 | MCC | BalAcc | Brier |",
            "|---|---|---|---|---|---|---|",
        ]
        for model_name, doc in rows:
            cells = []
            for col in METRIC_COLUMNS:
                text = f"{doc[col]:.4f}"
                if doc[col] == best[col]:
                    text = f"**{text}**"
                cells.append(text)
            lines.append("| " + " | ".join([model_name] + cells) + " |")
        path = os.path.join(report_dir, f"{spec_tag}.md")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        outputs[spec_tag] = path

    csv_path = os.path.join(report_dir, "metrics_long.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "spec", "metric", "value"])
        for (model_name, spec_tag), doc in sorted(found.items()):
            for col in METRIC_COLUMNS:
                writer.writerow([model_name, spec_tag, col, repr(doc[col])])
    outputs["csv"] = csv_path
    return outputs


def cmd_run_all(cfg: RunConfig):
    cmd_extract(cfg)
    cmd_train(cfg)
    results = cmd_evaluate(cfg)
    cmd_report(cfg)
    return results

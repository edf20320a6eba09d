"""Training and evaluation over graph-file datasets.

Trains on split=train, reports accuracy on split=test. The AR protocol
("arbitrary rotation") leaves the training set alone and applies a fresh
uniform random rotation about the origin to each test graph's node
positions: PR rows change with the positions, ADR rows do not.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np
import torch
from torch import nn

from .data import (
    ADR_DIM,
    PR_DIM,
    GraphFileError,
    GraphSample,
    load_split,
    random_rotation,
    rotate_sample,
)
from .model import GraphClassifier, ModelSpec, build_edge_index

FEATURE_DIMS = {"pr": PR_DIM, "adr": ADR_DIM}


@dataclass(frozen=True)
class TrainConfig:
    features: str = "adr"  # "pr" | "adr"
    epochs: int = 50
    lr: float = 1e-3
    batch_size: int = 8
    rotation: str = "none"  # "none" | "ar"
    seed: int = 0
    dropout: float = 0.0

    def __post_init__(self):
        if self.features not in FEATURE_DIMS:
            raise ValueError(f"unknown feature kind: {self.features!r}")
        if self.rotation not in ("none", "ar"):
            raise ValueError(f"unknown rotation protocol: {self.rotation!r}")


def feature_tensor(sample: GraphSample, kind: str) -> torch.Tensor:
    rows = sample.features.get(kind)
    want = FEATURE_DIMS[kind]
    if rows is None or rows.shape != (sample.num_nodes, want):
        have = None if rows is None else rows.shape
        raise GraphFileError(
            f"graph lacks {kind} rows of width {want} (found {have})"
        )
    return torch.from_numpy(np.ascontiguousarray(rows)).float()


def _prepare(samples: list[GraphSample], kind: str, classes: list[str]):
    out = []
    for s in samples:
        x = feature_tensor(s, kind)
        ei = build_edge_index(s.num_nodes, s.edges)
        out.append((x, ei, classes.index(s.label)))
    return out


def evaluate(model: GraphClassifier, prepared) -> tuple[float, dict[int, float]]:
    model.eval()
    hits, totals = {}, {}
    with torch.no_grad():
        for x, ei, y in prepared:
            pred = int(model(x, ei).argmax())
            totals[y] = totals.get(y, 0) + 1
            hits[y] = hits.get(y, 0) + (pred == y)
    per_class = {y: hits[y] / totals[y] for y in totals}
    overall = sum(hits.values()) / sum(totals.values())
    return overall, per_class


def rotated_test_set(samples: list[GraphSample], seed: int) -> list[GraphSample]:
    """One fresh uniform rotation about the origin per test graph."""
    rng = np.random.default_rng(seed)
    return [rotate_sample(s, random_rotation(rng)) for s in samples]


def train(manifest_path, cfg: TrainConfig) -> tuple[GraphClassifier, dict]:
    train_samples = load_split(manifest_path, "train")
    test_samples = load_split(manifest_path, "test")
    classes = sorted({s.label for s in train_samples})
    if len(classes) < 2:
        raise GraphFileError("need at least two classes to train")

    torch.manual_seed(cfg.seed)
    model = GraphClassifier(
        ModelSpec(FEATURE_DIMS[cfg.features], len(classes), dropout=cfg.dropout)
    )
    opt = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    loss_fn = nn.CrossEntropyLoss()

    prepared = _prepare(train_samples, cfg.features, classes)
    shuffler = torch.Generator().manual_seed(cfg.seed)
    for _ in range(cfg.epochs):
        model.train()
        order = torch.randperm(len(prepared), generator=shuffler).tolist()
        for start in range(0, len(order), cfg.batch_size):
            batch = [prepared[i] for i in order[start : start + cfg.batch_size]]
            logits = torch.stack([model(x, ei) for x, ei, _ in batch])
            labels = torch.tensor([y for _, _, y in batch])
            opt.zero_grad()
            loss_fn(logits, labels).backward()
            opt.step()

    if cfg.rotation == "ar":
        test_samples = rotated_test_set(test_samples, cfg.seed)
    accuracy, per_class = evaluate(model, _prepare(test_samples, cfg.features, classes))
    report = {
        "accuracy": accuracy,
        "per_class_accuracy": {classes[y]: acc for y, acc in per_class.items()},
        "classes": classes,
        "config": asdict(cfg),
        "seed": cfg.seed,
    }
    return model, report


def evaluate_ar(model: GraphClassifier, manifest_path, cfg: TrainConfig) -> float:
    """Test accuracy with each test graph freshly rotated about the origin."""
    test_samples = rotated_test_set(load_split(manifest_path, "test"), cfg.seed)
    classes = sorted({s.label for s in load_split(manifest_path, "train")})
    accuracy, _ = evaluate(model, _prepare(test_samples, cfg.features, classes))
    return accuracy


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sngraph-classify",
        description="train the reference graph-attention classifier",
    )
    parser.add_argument("manifest", help="dataset manifest.csv from the extractor")
    parser.add_argument("--features", choices=("pr", "adr"), default="adr")
    parser.add_argument("--epochs", type=int, default=50)
    parser.add_argument("--lr", type=float, default=1e-3)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--rotation", choices=("none", "ar"), default="none",
                        help="test-time rotation protocol")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the metrics report as JSON")
    args = parser.parse_args(argv)

    cfg = TrainConfig(
        features=args.features, epochs=args.epochs, lr=args.lr,
        batch_size=args.batch_size, rotation=args.rotation, seed=args.seed,
    )
    try:
        _, report = train(args.manifest, cfg)
    except (GraphFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Synthetic two-class corpus: straight bars vs. isotropic balls.

Both classes share the same per-node radius and distance-to-origin
distributions and the same chain topology, so only the joint geometry
differs: bar nodes are collinear (axis-aligned before any rotation), ball
nodes sit at the same distances from the origin but in independent random
directions. Graphs are written in the extractor's JSON format with PR and
ADR feature blocks plus a manifest.csv, so they are drop-in training input.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .data import GraphSample, compute_adr

NODES_PER_GRAPH = 12
TRAIN_PER_CLASS = 12
TEST_PER_CLASS = 8


def _norm_ladder(rng: np.random.Generator, m: int) -> np.ndarray:
    """Symmetric signed offsets along a line, jittered; never exactly 0."""
    base = (np.arange(m) - (m - 1) / 2) * 0.07
    jitter = rng.uniform(-0.01, 0.01, size=m)
    s = base + jitter
    s[np.abs(s) < 0.01] += 0.02
    return s


def _make_bar(rng: np.random.Generator) -> GraphSample:
    s = _norm_ladder(rng, NODES_PER_GRAPH)
    centers = np.zeros((NODES_PER_GRAPH, 3))
    centers[:, 2] = s
    radii = rng.uniform(0.02, 0.05, size=NODES_PER_GRAPH)
    edges = [(k, k + 1) for k in range(NODES_PER_GRAPH - 1)]
    return GraphSample(centers, radii, edges)


def _make_ball(rng: np.random.Generator) -> GraphSample:
    s = _norm_ladder(rng, NODES_PER_GRAPH)
    dirs = rng.normal(size=(NODES_PER_GRAPH, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    centers = dirs * np.abs(s)[:, None] * np.sign(s)[:, None]
    radii = rng.uniform(0.02, 0.05, size=NODES_PER_GRAPH)
    edges = [(k, k + 1) for k in range(NODES_PER_GRAPH - 1)]
    return GraphSample(centers, radii, edges)


def _write_graph_json(sample: GraphSample, path: Path) -> None:
    centers = sample.centers.astype(np.float32).astype(np.float64)
    radii = sample.radii.astype(np.float32).astype(np.float64)
    rounded = GraphSample(centers, radii, list(sample.edges))
    pr = np.column_stack([centers, radii])
    adr = compute_adr(rounded)
    doc = {
        "meta": {"sampler": "synthetic", "requested_n": sample.num_nodes,
                 "achieved_n": sample.num_nodes, "resolution": 0, "version": 1},
        "nodes": [{"c": list(c), "r": float(r)} for c, r in zip(centers, radii)],
        "edges": [list(e) for e in sorted(rounded.edges)],
        "rule4_edges": [],
        "features": {"pr": pr.tolist(), "adr": adr.tolist()},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))


def generate_toy_corpus(root, seed: int = 0) -> Path:
    """Write the 40-graph bars/balls tree under `root`; returns manifest path."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    makers = {"bar": _make_bar, "ball": _make_ball}
    rows = []
    for label, make in makers.items():
        for split, count in (("train", TRAIN_PER_CLASS), ("test", TEST_PER_CLASS)):
            for k in range(count):
                rel = f"{label}/{split}/{label}_{k}.sng.json"
                _write_graph_json(make(rng), root / rel)
                rows.append((rel, label, split, NODES_PER_GRAPH, rel))
    manifest = root / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "split", "achieved_n", "output"])
        writer.writerows(rows)
    return manifest

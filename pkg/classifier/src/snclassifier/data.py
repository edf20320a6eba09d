"""Loading sphere-node graph files and dataset manifests.

This package talks to the extractor only through its documented file
formats: JSON / binary graph files plus the dataset `manifest.csv`
(columns path, label, split, achieved_n, output).
"""

from __future__ import annotations

import csv
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PR_DIM = 4
ADR_DIM = 29
_MAX_NEIGHBORS = 6
_COS_PAIRS = [(a, b) for a in range(_MAX_NEIGHBORS) for b in range(a + 1, _MAX_NEIGHBORS)]
# Neighbor distances closer than this count as tied; ties order by index.
_TIE_EPS = 1e-9


class GraphFileError(ValueError):
    """Malformed or unsupported graph file."""


@dataclass
class GraphSample:
    centers: np.ndarray  # (N, 3) float64
    radii: np.ndarray  # (N,) float64
    edges: list[tuple[int, int]]  # undirected, i < j
    features: dict[str, np.ndarray] = field(default_factory=dict)  # "pr"/"adr"
    label: str = ""

    @property
    def num_nodes(self) -> int:
        return len(self.radii)

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out


def read_graph_json(path) -> GraphSample:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        centers = np.array([nd["c"] for nd in doc["nodes"]], dtype=np.float64)
        radii = np.array([nd["r"] for nd in doc["nodes"]], dtype=np.float64)
        edges = [(int(i), int(j)) for i, j in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphFileError(f"{path}: malformed graph JSON ({exc})") from exc
    feats = {
        kind: np.asarray(rows, dtype=np.float64)
        for kind, rows in doc.get("features", {}).items()
    }
    return GraphSample(centers.reshape(-1, 3), radii, edges, feats)


def read_graph_binary(path) -> GraphSample:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"SNG1":
            raise GraphFileError(f"{path}: bad magic {magic!r}")
        n, e, r4, flags = struct.unpack("<IIIB", fh.read(13))
        nodes = np.frombuffer(fh.read(16 * n), dtype="<f4").reshape(n, 4)
        pairs = np.frombuffer(fh.read(8 * e), dtype="<u4").reshape(e, 2)
        fh.read(8 * r4)  # rule-4 markers are irrelevant for classification
        feats = {}
        if flags & 1:
            feats["pr"] = (
                np.frombuffer(fh.read(4 * n * PR_DIM), dtype="<f4")
                .reshape(n, PR_DIM)
                .astype(np.float64)
            )
        if flags & 2:
            feats["adr"] = (
                np.frombuffer(fh.read(4 * n * ADR_DIM), dtype="<f4")
                .reshape(n, ADR_DIM)
                .astype(np.float64)
            )
    centers = nodes[:, :3].astype(np.float64)
    radii = nodes[:, 3].astype(np.float64)
    edges = [(int(i), int(j)) for i, j in pairs]
    return GraphSample(centers, radii, edges, feats)


def read_graph(path) -> GraphSample:
    path = Path(path)
    if path.suffix == ".json" or path.name.endswith(".sng.json"):
        return read_graph_json(path)
    return read_graph_binary(path)


@dataclass
class ManifestEntry:
    label: str
    split: str
    graph_path: Path


def read_manifest(manifest_path) -> list[ManifestEntry]:
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    entries = []
    with open(manifest_path, newline="") as fh:
        for row in csv.DictReader(fh):
            entries.append(
                ManifestEntry(row["label"], row["split"], root / row["output"])
            )
    if not entries:
        raise GraphFileError(f"{manifest_path}: empty manifest")
    return entries


def load_split(manifest_path, split: str) -> list[GraphSample]:
    samples = []
    for entry in read_manifest(manifest_path):
        if entry.split != split:
            continue
        sample = read_graph(entry.graph_path)
        sample.label = entry.label
        samples.append(sample)
    if not samples:
        raise GraphFileError(f"{manifest_path}: no graphs with split={split!r}")
    return samples


def _neighbor_order(sample: GraphSample, i: int) -> list[int]:
    """Neighbors sorted by distance ascending; near-ties order by index."""
    ci = sample.centers[i]
    by_dist = sorted(
        sample.neighbors(i), key=lambda j: math.dist(ci, sample.centers[j])
    )
    out: list[int] = []
    group: list[int] = []
    group_d = None
    for j in by_dist:
        d = math.dist(ci, sample.centers[j])
        if group and d - group_d > _TIE_EPS:
            out.extend(sorted(group))
            group = []
        group.append(j)
        group_d = d
    out.extend(sorted(group))
    return out


def compute_adr(sample: GraphSample) -> np.ndarray:
    """Recompute the 29-column rotation-invariant rows from the geometry.

    Column layout matches the extractor's documentation: 15 angle cosines
    between neighbor pairs in lexicographic slot order, distance to the
    origin plus distances to neighbors 1..6, then the node's radius plus
    neighbor radii. Missing slots are zero; values are rounded to
    float32-representable numbers like the stored rows.
    """
    n = sample.num_nodes
    rows = np.zeros((n, ADR_DIM), dtype=np.float64)
    for i in range(n):
        nbrs = _neighbor_order(sample, i)[:_MAX_NEIGHBORS]
        ci = sample.centers[i]
        vecs, dists = [], []
        for j in nbrs:
            v = sample.centers[j] - ci
            d = float(np.linalg.norm(v))
            dists.append(d)
            vecs.append(v / d if d > 0.0 else None)
        for slot, (a, b) in enumerate(_COS_PAIRS):
            if b < len(nbrs) and vecs[a] is not None and vecs[b] is not None:
                rows[i, slot] = float(np.clip(vecs[a] @ vecs[b], -1.0, 1.0))
        rows[i, 15] = float(np.linalg.norm(ci))
        rows[i, 16 : 16 + len(dists)] = dists
        rows[i, 22] = sample.radii[i]
        for k, j in enumerate(nbrs):
            rows[i, 23 + k] = sample.radii[j]
    return rows.astype(np.float32).astype(np.float64)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform rotation matrix, via a uniform unit quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def rotate_sample(sample: GraphSample, rotation: np.ndarray) -> GraphSample:
    """Rotate node positions about the origin; topology and radii unchanged.

    Stored ADR rows carry over untouched — they depend only on quantities a
    rotation about the origin preserves. PR rows are rebuilt from the
    rotated positions.
    """
    centers = sample.centers @ rotation.T
    feats = dict(sample.features)
    if "pr" in feats:
        feats["pr"] = np.column_stack([centers, sample.radii])
    return GraphSample(centers, sample.radii.copy(), list(sample.edges), feats,
                       sample.label)

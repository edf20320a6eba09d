"""Per-node feature rows for SN-Graphs.

Two kinds:

* PR: (x, y, z, radius) per node, copied verbatim from the graph.
* ADR: a 29-dimensional rotation-invariant row per node, built from the
  node's up-to-6 nearest graph neighbors (distance-ascending order, ties
  toward the smaller node index):

    slots  0-14  cosines of the angles at the node between neighbor pairs,
                 pairs (a, b) with a < b enumerated lexicographically over
                 the 6 neighbor slots; pairs touching a missing slot are 0
    slots 15-21  distance to the coordinate origin, then to neighbors 1..6
    slots 22-28  the node's radius, then the radii of neighbors 1..6

ADR values are rounded to float32-representable numbers so the JSON and
binary encodings agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grapher import SnGraph

ADR_DIM = 29
_MAX_NEIGHBORS = 6
_COS_PAIRS = [(a, b) for a in range(_MAX_NEIGHBORS) for b in range(a + 1, _MAX_NEIGHBORS)]


@dataclass
class FeatureMatrix:
    kind: str  # "pr" | "adr"
    rows: np.ndarray  # (N, 4) or (N, 29) float64
    neighbor_order: list[list[int]] | None = None  # ADR only
    warnings: list[str] = field(default_factory=list)


# Distances closer than this are treated as tied (index order decides).
# Exact lattice ties perturbed by rotation round-off stay ties, keeping the
# ADR slot assignment rotation-stable; distinct voxel-lattice distances are
# separated by far more than this.
_TIE_EPS = 1e-9


def neighbor_order(g: SnGraph, i: int) -> list[int]:
    """Neighbors of node i sorted by distance ascending, index tie-break.

    Neighbors whose distances agree within a small tolerance form a tie
    group ordered by node index, so the order is stable under rotations of
    the node positions.
    """
    ci = g.nodes[i].center
    nbrs = g.neighbors(i)
    by_dist = sorted(nbrs, key=lambda j: math.dist(ci, g.nodes[j].center))
    out: list[int] = []
    group: list[int] = []
    group_d = None
    for j in by_dist:
        d = math.dist(ci, g.nodes[j].center)
        if group and d - group_d > _TIE_EPS:
            out.extend(sorted(group))
            group = []
        group.append(j)
        group_d = d
    out.extend(sorted(group))
    return out


def extract_pr(g: SnGraph) -> FeatureMatrix:
    rows = np.empty((len(g.nodes), 4), dtype=np.float64)
    for i, node in enumerate(g.nodes):
        rows[i, :3] = node.center
        rows[i, 3] = node.radius
    return FeatureMatrix("pr", rows)


def extract_adr(g: SnGraph) -> FeatureMatrix:
    n = len(g.nodes)
    rows = np.zeros((n, ADR_DIM), dtype=np.float64)
    orders: list[list[int]] = []
    warnings: list[str] = []
    for i, node in enumerate(g.nodes):
        nbrs = neighbor_order(g, i)[:_MAX_NEIGHBORS]
        orders.append(nbrs)
        ci = node.center
        vecs = []
        dists = []
        for j in nbrs:
            v = g.nodes[j].center - ci
            d = float(np.linalg.norm(v))
            dists.append(d)
            if d == 0.0:
                warnings.append(f"node {i}: zero-length edge to node {j}")
                vecs.append(None)
            else:
                vecs.append(v / d)
        for slot, (a, b) in enumerate(_COS_PAIRS):
            if a < len(nbrs) and b < len(nbrs):
                va, vb = vecs[a], vecs[b]
                if va is not None and vb is not None:
                    rows[i, slot] = float(np.clip(va @ vb, -1.0, 1.0))
        rows[i, 15] = float(np.linalg.norm(ci))
        for k, d in enumerate(dists):
            rows[i, 16 + k] = d
        rows[i, 22] = node.radius
        for k, j in enumerate(nbrs):
            rows[i, 23 + k] = g.nodes[j].radius
    rows = rows.astype(np.float32).astype(np.float64)
    return FeatureMatrix("adr", rows, neighbor_order=orders, warnings=warnings)

"""Sphere-node graph construction.

Edges are accepted in four stages:

1. interior test: p midpoint-offset samples on the segment must not be
   mostly outside the object (SDF < t_d at a fraction >= t_p rejects);
2. clearance test: the segment must stay strictly outside every other
   selected sphere;
3. degree cap: surviving candidates sorted by length are accepted greedily
   while both endpoints have degree < q;
4. rescue: every still-isolated node gets one edge to its Euclidean-nearest
   node. Rescue edges bypass stages 1-3 and are flagged in `rule4_edges`.

Node coordinates and radii are rounded to float32-representable values at
graph build time so that the JSON and binary file encodings decode to the
same numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sampler import Selection, SphereNode
from .sdf import SdfGrid


@dataclass(frozen=True)
class GraphParams:
    p: int = 10  # samples per candidate edge
    t_d: float = 0.05  # outside threshold on SDF, normalized units
    t_p: float = 0.7  # rejecting outside-sample fraction
    q: int = 6  # max degree (rules 1-3 edges only)

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if not (0.0 < self.t_p <= 1.0):
            raise ValueError(f"t_p must be in (0, 1], got {self.t_p}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")


@dataclass
class SnGraph:
    nodes: list[SphereNode]
    edges: set[tuple[int, int]]  # unordered pairs stored as (i, j), i < j
    rule4_edges: set[tuple[int, int]]
    params: GraphParams
    meta: dict = field(default_factory=dict)

    def centers(self) -> np.ndarray:
        return np.array([n.center for n in self.nodes], dtype=np.float64).reshape(
            -1, 3
        )

    def radii(self) -> np.ndarray:
        return np.array([n.radius for n in self.nodes], dtype=np.float64)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self, include_rule4: bool = True) -> np.ndarray:
        deg = np.zeros(len(self.nodes), dtype=np.int64)
        for i, j in self.edges:
            if not include_rule4 and (i, j) in self.rule4_edges:
                continue
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out


def _sdf_at_points(s: SdfGrid, points: np.ndarray) -> np.ndarray:
    """Nearest-voxel SDF lookup; points outside the grid read as -inf."""
    res = s.resolution
    idx = np.floor((points + 0.5) * res).astype(np.int64)
    inside = np.all((idx >= 0) & (idx < res), axis=-1)
    idx_c = np.clip(idx, 0, res - 1)
    vals = s.values[idx_c[..., 0], idx_c[..., 1], idx_c[..., 2]]
    return np.where(inside, vals, -np.inf)


def edge_interior_test(a: SphereNode, b: SphereNode, s: SdfGrid, params: GraphParams) -> bool:
    """Rule 1: the segment between two nodes stays close enough to the object."""
    p = params.p
    t = (np.arange(p, dtype=np.float64) + 0.5) / p
    pts = a.center + t[:, None] * (b.center - a.center)
    outside = _sdf_at_points(s, pts) < params.t_d
    return outside.sum() / p < params.t_p


def _segment_point_dist(a: np.ndarray, b: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance from each point in `pts` to segment [a, b]."""
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        delta = pts - a
        return np.sqrt(np.einsum("ij,ij->i", delta, delta))
    t = np.clip((pts - a) @ ab / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    delta = pts - proj
    return np.sqrt(np.einsum("ij,ij->i", delta, delta))


def edge_sphere_clearance(a_idx: int, b_idx: int, nodes: list[SphereNode]) -> bool:
    """Rule 2: the segment must not enter any other selected sphere.

    Blocks only on strict penetration (distance < radius); a segment exactly
    tangent to a sphere passes.
    """
    a = nodes[a_idx].center
    b = nodes[b_idx].center
    others = [k for k in range(len(nodes)) if k not in (a_idx, b_idx)]
    if not others:
        return True
    pts = np.array([nodes[k].center for k in others], dtype=np.float64)
    radii = np.array([nodes[k].radius for k in others], dtype=np.float64)
    return bool(np.all(_segment_point_dist(a, b, pts) >= radii))


def _f32_round(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=np.float64).astype(np.float32).astype(np.float64)


def build_graph(sel: Selection, s: SdfGrid, params: GraphParams | None = None,
                meta: dict | None = None) -> SnGraph:
    if params is None:
        params = GraphParams()
    if not sel.nodes:
        raise ValueError("selection is empty")
    nodes = [
        SphereNode(
            center=_f32_round(n.center),
            radius=float(_f32_round(np.float64(n.radius))),
            voxel_index=n.voxel_index,
        )
        for n in sel.nodes
    ]
    n = len(nodes)
    meta = dict(meta or {})
    meta.setdefault("sampler", sel.method)
    meta.setdefault("requested_n", sel.requested_n)
    meta.setdefault("achieved_n", sel.achieved_n)
    meta.setdefault("resolution", s.resolution)
    graph = SnGraph(nodes, set(), set(), params, meta)
    if n == 1:
        return graph

    centers = graph.centers()
    candidates = []
    for i in range(n):
        for j in range(i + 1, n):
            if not edge_interior_test(nodes[i], nodes[j], s, params):
                continue
            if not edge_sphere_clearance(i, j, nodes):
                continue
            candidates.append((math.dist(centers[i], centers[j]), i, j))
    candidates.sort()

    deg = np.zeros(n, dtype=np.int64)
    for _, i, j in candidates:
        if deg[i] < params.q and deg[j] < params.q:
            graph.edges.add((i, j))
            deg[i] += 1
            deg[j] += 1

    # Rule 4: rescue nodes the greedy pass left isolated.
    isolated = [i for i in range(n) if deg[i] == 0]
    for i in isolated:
        delta = centers - centers[i]
        d = np.einsum("ij,ij->i", delta, delta)
        d[i] = np.inf
        j = int(np.argmin(d))
        edge = (i, j) if i < j else (j, i)
        if edge not in graph.edges:
            graph.edges.add(edge)
            graph.rule4_edges.add(edge)
    return graph

"""Sphere-node selection from an SDF grid.

Every interior voxel is a candidate sphere (center = voxel center, radius =
its SDF value). Nodes are picked by an iterative max-min rule over the
composite distance

    D(v_i, v_j) = (E(v_i, v_j) - radius_i) + 2 * radius_j

where v_i is already selected and v_j is the candidate; candidates whose
center lies inside or on any selected sphere (E - radius_i <= 0) are dropped.
The FSS baseline replaces D with the plain Euclidean distance and drops the
admissibility constraint.

All argmax/argmin ties break toward the smallest x-fastest linear voxel
index, which makes the node sequence bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sdf import SdfGrid


@dataclass(frozen=True)
class SphereNode:
    center: np.ndarray  # (3,) float64, normalized units
    radius: float  # SDF at the voxel, normalized units
    voxel_index: tuple[int, int, int]


@dataclass
class Selection:
    nodes: list[SphereNode]
    method: str  # "nodesphere" | "fss"
    requested_n: int
    achieved_n: int = field(init=False)

    def __post_init__(self):
        self.achieved_n = len(self.nodes)


def node_distance(a: SphereNode, b: SphereNode) -> float:
    """Composite selection distance; `a` is the selected node, `b` the candidate."""
    e = math.dist(a.center, b.center)
    return (e - a.radius) + 2.0 * b.radius


def _interior_candidates(s: SdfGrid):
    """Interior voxel coords, centers and SDF values in x-fastest linear order."""
    res = s.resolution
    flat = s.values.ravel(order="F")
    lin = np.flatnonzero(flat > 0)
    if lin.size == 0:
        raise ValueError("SDF grid has no interior voxels")
    ijk = np.empty((lin.size, 3), dtype=np.int64)
    ijk[:, 0] = lin % res
    ijk[:, 1] = (lin // res) % res
    ijk[:, 2] = lin // (res * res)
    centers = s.voxel_centers(ijk)
    return ijk, centers, flat[lin]


def _first_index(ijk: np.ndarray, radii: np.ndarray) -> int:
    """Largest SDF; ties go to the voxel nearest the interior centroid.

    The centroid comparison is done in exact integer arithmetic (scaled by
    the voxel count) so that tie resolution is free of float rounding.
    """
    maxv = radii.max()
    cand = np.flatnonzero(radii == maxv)
    if cand.size == 1:
        return int(cand[0])
    m = ijk.shape[0]
    total = ijk.sum(axis=0)  # centroid * m, exact
    scaled = m * ijk[cand] - total
    d2 = np.einsum("ij,ij->i", scaled, scaled)
    return int(cand[np.argmin(d2)])


def _make_node(ijk, centers, radii, pos) -> SphereNode:
    return SphereNode(
        center=centers[pos].copy(),
        radius=float(radii[pos]),
        voxel_index=tuple(int(x) for x in ijk[pos]),
    )


def select_first(s: SdfGrid) -> SphereNode:
    ijk, centers, radii = _interior_candidates(s)
    return _make_node(ijk, centers, radii, _first_index(ijk, radii))


def _select(s: SdfGrid, n: int, use_radii: bool) -> Selection:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ijk, centers, radii = _interior_candidates(s)
    m = centers.shape[0]
    res = s.resolution
    picked = [_first_index(ijk, radii)]
    selectable = np.ones(m, dtype=np.bool_)
    selectable[picked[0]] = False

    def dist_from(pos):
        # Squared distances on the integer lattice are exact; the sqrt and
        # the division by R round identically everywhere, so argmax ties
        # between symmetric candidates are genuine value ties.
        delta = ijk - ijk[pos]
        e = np.sqrt(np.einsum("ij,ij->i", delta, delta).astype(np.float64)) / res
        if use_radii:
            return (e - radii[pos]) + 2.0 * radii, e
        return e, e

    mind, e = dist_from(picked[0])
    if use_radii:
        # Admissibility is symmetric: neither sphere of the pair may reach
        # the other's center, so center-in-sphere never holds in either
        # direction over the final selection.
        selectable &= (e - radii[picked[0]] > 0.0) & (e - radii > 0.0)
    while len(picked) < n:
        masked = np.where(selectable, mind, -np.inf)
        j = int(np.argmax(masked))
        if not selectable[j]:
            break  # no admissible candidate left
        picked.append(j)
        selectable[j] = False
        d, e = dist_from(j)
        np.minimum(mind, d, out=mind)
        if use_radii:
            selectable &= (e - radii[j] > 0.0) & (e - radii > 0.0)
    nodes = [_make_node(ijk, centers, radii, p) for p in picked]
    return Selection(nodes, "nodesphere" if use_radii else "fss", n)


def select_spheres(s: SdfGrid, n: int) -> Selection:
    """Max-min selection under the composite distance (NodeSphere)."""
    return _select(s, n, use_radii=True)


def select_fss(s: SdfGrid, n: int) -> Selection:
    """Farthest sphere sampling: plain Euclidean max-min over interior voxels."""
    return _select(s, n, use_radii=False)

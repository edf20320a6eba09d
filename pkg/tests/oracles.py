"""Independent reference implementations used only to check the real code.

Everything here deliberately recomputes from first principles (brute-force
scans, quadratic root solving, polygon clipping) instead of reusing the
package's algorithms.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def brute_force_signed_sq(occ):
    """O(N^2): squared distance to the nearest opposite-occupancy voxel.

    Positive-signed entries belong to occupied voxels. Returns int64 squared
    voxel distances (unsigned); pair with `occ` for the sign.
    """
    nx, ny, nz = occ.shape
    out = np.empty((nx, ny, nz), dtype=np.int64)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                target = not occ[i, j, k]
                best = np.int64(1 << 60)
                for a in range(nx):
                    for b in range(ny):
                        for c in range(nz):
                            if occ[a, b, c] == target:
                                d = (
                                    (i - a) * (i - a)
                                    + (j - b) * (j - b)
                                    + (k - c) * (k - c)
                                )
                                if d < best:
                                    best = d
                out[i, j, k] = best
    return out


def interior_voxels_xfastest(sdf):
    """(coords, centers, values) of interior voxels in x-fastest order."""
    res = sdf.resolution
    flat = sdf.values.ravel(order="F")
    lin = np.flatnonzero(flat > 0)
    ijk = np.stack([lin % res, (lin // res) % res, lin // (res * res)], axis=1)
    return ijk, sdf.voxel_centers(ijk), flat[lin]


def first_node_oracle(sdf):
    """Brute-force scan for the first-node rule; returns candidate position.

    The centroid tie-break compares |m * v - sum(v)|^2 in exact integers,
    the scale-invariant form of distance-to-centroid.
    """
    ijk, _, vals = interior_voxels_xfastest(sdf)
    maxv = vals.max()
    m = len(vals)
    total = ijk.sum(axis=0)
    best = None
    best_key = None
    for pos in range(m):
        if vals[pos] != maxv:
            continue
        d2 = sum(int(m * ijk[pos, ax] - total[ax]) ** 2 for ax in range(3))
        if best is None or d2 < best_key:
            best, best_key = pos, d2
    return best


def selection_oracle(sdf, n, use_radii=True):
    """Exhaustive max-min recomputation of the selection sequence.

    Recomputes min-over-selected from scratch every iteration; admissibility
    (E - radius_i > 0 against every selected node) enforced when use_radii.
    Returns list of positions into the x-fastest interior voxel list.
    """
    ijk, _, vals = interior_voxels_xfastest(sdf)
    m = len(vals)
    res = sdf.resolution

    def euclid(u, w):
        # Exact integer squared lattice distance, then one sqrt and one
        # division: rounds identically to the implementation, so geometric
        # ties stay genuine value ties.
        d2 = int(u[0] - w[0]) ** 2 + int(u[1] - w[1]) ** 2 + int(u[2] - w[2]) ** 2
        return math.sqrt(d2) / res

    picked = [first_node_oracle(sdf)]
    while len(picked) < n:
        best, best_key = None, None
        for j in range(m):
            if j in picked:
                continue
            mind = math.inf
            ok = True
            for i in picked:
                e = euclid(ijk[i], ijk[j])
                if use_radii:
                    # Symmetric admissibility: neither sphere may reach the
                    # other's center.
                    if e - vals[i] <= 0.0 or e - vals[j] <= 0.0:
                        ok = False
                        break
                    d = (e - vals[i]) + 2.0 * vals[j]
                else:
                    d = e
                mind = min(mind, d)
            if not ok:
                continue
            if best is None or mind > best_key:
                best, best_key = j, mind
        if best is None:
            break
        picked.append(best)
    return picked


def _clip_polygon_halfspace(poly, axis, sign, bound):
    """Sutherland-Hodgman clip of a 3D polygon against sign*x[axis] <= bound."""
    out = []
    k = len(poly)
    for idx in range(k):
        cur = poly[idx]
        nxt = poly[(idx + 1) % k]
        c_in = sign * cur[axis] <= bound
        n_in = sign * nxt[axis] <= bound
        if c_in:
            out.append(cur)
        if c_in != n_in:
            t = (bound - sign * cur[axis]) / (sign * (nxt[axis] - cur[axis]))
            out.append(cur + t * (nxt - cur))
    return out


def triangle_box_overlap_oracle(tri, lo, hi):
    """Clip the triangle against the box; nonempty result means overlap."""
    poly = [np.asarray(v, dtype=np.float64) for v in tri]
    for axis in range(3):
        poly = _clip_polygon_halfspace(poly, axis, 1.0, hi[axis])
        if not poly:
            return False
        poly = _clip_polygon_halfspace(poly, axis, -1.0, -lo[axis])
        if not poly:
            return False
    return True


def segment_sphere_intersects(a, b, center, radius):
    """Quadratic-root test: does segment [a, b] touch the open ball?"""
    d = np.asarray(b, dtype=np.float64) - a
    f = np.asarray(a, dtype=np.float64) - center
    qa = float(d @ d)
    qb = 2.0 * float(f @ d)
    qc = float(f @ f) - radius * radius
    if qa == 0.0:
        return qc < 0.0
    disc = qb * qb - 4.0 * qa * qc
    if disc <= 0.0:
        return False  # tangent or miss: open ball not entered
    sq = math.sqrt(disc)
    t0 = (-qb - sq) / (2.0 * qa)
    t1 = (-qb + sq) / (2.0 * qa)
    return t0 < 1.0 and t1 > 0.0


def greedy_graph_oracle(centers, candidate_pairs, q):
    """Naive rule-3 pass: sort candidates by (length, i, j), cap degrees."""
    items = sorted(
        (math.dist(centers[i], centers[j]), i, j) for i, j in candidate_pairs
    )
    deg = {}
    accepted = set()
    for _, i, j in items:
        if deg.get(i, 0) < q and deg.get(j, 0) < q:
            accepted.add((i, j))
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
    return accepted

"""Exact signed Euclidean distance per voxel, in normalized units.

Distances are measured voxel-center to voxel-center. Interior voxels carry
+distance to the nearest unoccupied voxel, exterior voxels -distance to the
nearest occupied voxel, both divided by the grid resolution so values are
fractions of the unit bounding-box side.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from numba import njit

from .voxel import VoxelGrid

_INF = np.float64(1e30)


@njit(cache=True)
def _dt1d(f, n, d, v, z):
    """Felzenszwalb-Huttenlocher 1D squared-distance lower envelope."""
    k = 0
    v[0] = 0
    z[0] = -_INF
    z[1] = _INF
    for q in range(1, n):
        s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k])
        while s <= z[k]:
            k -= 1
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k])
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = _INF
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d[q] = (q - v[k]) * (q - v[k]) + f[v[k]]


@njit(cache=True)
def _edt_sq_kernel(feature, out):
    """3D squared EDT to the nearest feature voxel, via per-axis passes."""
    nx, ny, nz = feature.shape
    nmax = max(nx, max(ny, nz))
    f = np.empty(nmax, dtype=np.float64)
    d = np.empty(nmax, dtype=np.float64)
    v = np.empty(nmax, dtype=np.int64)
    z = np.empty(nmax + 1, dtype=np.float64)

    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                out[i, j, k] = 0.0 if feature[i, j, k] else _INF
    # x pass
    for j in range(ny):
        for k in range(nz):
            for i in range(nx):
                f[i] = out[i, j, k]
            _dt1d(f, nx, d, v, z)
            for i in range(nx):
                out[i, j, k] = d[i]
    # y pass
    for i in range(nx):
        for k in range(nz):
            for j in range(ny):
                f[j] = out[i, j, k]
            _dt1d(f, ny, d, v, z)
            for j in range(ny):
                out[i, j, k] = d[j]
    # z pass
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                f[k] = out[i, j, k]
            _dt1d(f, nz, d, v, z)
            for k in range(nz):
                out[i, j, k] = d[k]


def squared_distance_transform(feature: np.ndarray) -> np.ndarray:
    """Integer squared voxel distances to the nearest True cell of `feature`.

    Cells are considered at their centers; a feature cell maps to 0. Returns
    int64; if `feature` is empty everywhere, every entry is -1.
    """
    feature = np.ascontiguousarray(feature, dtype=np.bool_)
    if not feature.any():
        return np.full(feature.shape, -1, dtype=np.int64)
    out = np.empty(feature.shape, dtype=np.float64)
    _edt_sq_kernel(feature, out)
    return np.rint(out).astype(np.int64)


@dataclass(frozen=True)
class SdfGrid:
    resolution: int
    values: np.ndarray  # (R, R, R) float64, > 0 strictly inside

    @property
    def voxel_size(self) -> float:
        return 1.0 / self.resolution

    @property
    def origin(self) -> float:
        return -0.5 + 0.5 / self.resolution

    @property
    def is_empty(self) -> bool:
        return not bool((self.values > 0).any())

    def interior_mask(self) -> np.ndarray:
        return self.values > 0

    def voxel_centers(self, ijk: np.ndarray) -> np.ndarray:
        return self.origin + np.asarray(ijk, dtype=np.float64) * self.voxel_size


def compute_sdf(g: VoxelGrid) -> SdfGrid:
    """Signed distance of every voxel of a solid grid, in normalized units.

    An all-empty grid yields the constant -1.0 sentinel (check
    SdfGrid.is_empty). An all-occupied grid (a mesh filling the whole unit
    cube) measures interior distances to the empty space just outside the
    grid instead.
    """
    occ = g.occupancy
    res = g.resolution
    if not occ.any():
        return SdfGrid(res, np.full(occ.shape, -1.0, dtype=np.float64))
    if occ.all():
        idx = np.arange(res, dtype=np.float64)
        to_edge = np.minimum(idx + 1.0, res - idx)
        values = np.minimum.reduce(
            np.meshgrid(to_edge, to_edge, to_edge, indexing="ij")
        )
        return SdfGrid(res, values / res)
    sq_to_free = squared_distance_transform(~occ)
    sq_to_occ = squared_distance_transform(occ)
    values = np.where(
        occ,
        np.sqrt(sq_to_free.astype(np.float64)),
        -np.sqrt(sq_to_occ.astype(np.float64)),
    ) / res
    return SdfGrid(res, values)


def write_sdf_dump(s: SdfGrid, path) -> None:
    """Debug dump: "SNF1", u32 resolution, R^3 float32 values (x-fastest)."""
    with open(path, "wb") as fh:
        fh.write(b"SNF1")
        fh.write(struct.pack("<I", s.resolution))
        fh.write(s.values.ravel(order="F").astype("<f4").tobytes())


def read_sdf_dump(path) -> SdfGrid:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"SNF1":
            raise ValueError(f"bad SDF dump magic: {magic!r}")
        (res,) = struct.unpack("<I", fh.read(4))
        flat = np.frombuffer(fh.read(res**3 * 4), dtype="<f4")
    values = flat.astype(np.float64).reshape((res, res, res), order="F")
    return SdfGrid(res, values)

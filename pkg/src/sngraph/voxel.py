"""Surface voxelization and solid fill on a cubic lattice over [-0.5, 0.5]^3.

Voxel (i, j, k) has its center at origin + (i, j, k) * voxel_size with
origin = -0.5 + 1/(2R). Linear voxel indices are x-fastest:
lin = i + R*j + R^2*k.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import ndimage


@dataclass(frozen=True)
class VoxelGrid:
    resolution: int
    occupancy: np.ndarray  # (R, R, R) bool, indexed [ix, iy, iz]

    @property
    def voxel_size(self) -> float:
        return 1.0 / self.resolution

    @property
    def origin(self) -> float:
        return -0.5 + 0.5 / self.resolution

    def voxel_centers(self, ijk: np.ndarray) -> np.ndarray:
        return self.origin + np.asarray(ijk, dtype=np.float64) * self.voxel_size

    def flat(self) -> np.ndarray:
        """Occupancy in x-fastest linear order."""
        return self.occupancy.ravel(order="F")


@njit(cache=True)
def _axis_test(a0, a1, a2, v0, v1, v2, h0, h1, h2):
    # Project the triangle and the box onto one axis; True means separated.
    p0 = a0 * v0[0] + a1 * v0[1] + a2 * v0[2]
    p1 = a0 * v1[0] + a1 * v1[1] + a2 * v1[2]
    p2 = a0 * v2[0] + a1 * v2[1] + a2 * v2[2]
    lo = min(p0, min(p1, p2))
    hi = max(p0, max(p1, p2))
    r = h0 * abs(a0) + h1 * abs(a1) + h2 * abs(a2)
    return lo > r or hi < -r


@njit(cache=True)
def _tri_box_overlap(cx, cy, cz, h, t0, t1, t2):
    """Akenine-Moller separating-axis triangle/AABB test (touching counts)."""
    v0 = np.empty(3)
    v1 = np.empty(3)
    v2 = np.empty(3)
    v0[0] = t0[0] - cx
    v0[1] = t0[1] - cy
    v0[2] = t0[2] - cz
    v1[0] = t1[0] - cx
    v1[1] = t1[1] - cy
    v1[2] = t1[2] - cz
    v2[0] = t2[0] - cx
    v2[1] = t2[1] - cy
    v2[2] = t2[2] - cz

    # Box face normals.
    for ax in range(3):
        lo = min(v0[ax], min(v1[ax], v2[ax]))
        hi = max(v0[ax], max(v1[ax], v2[ax]))
        if lo > h or hi < -h:
            return False

    e0 = v1 - v0
    e1 = v2 - v1
    e2 = v0 - v2

    # Triangle normal.
    nx = e0[1] * e1[2] - e0[2] * e1[1]
    ny = e0[2] * e1[0] - e0[0] * e1[2]
    nz = e0[0] * e1[1] - e0[1] * e1[0]
    if _axis_test(nx, ny, nz, v0, v1, v2, h, h, h):
        return False

    # 9 edge cross products.
    for e in (e0, e1, e2):
        if _axis_test(0.0, -e[2], e[1], v0, v1, v2, h, h, h):
            return False
        if _axis_test(e[2], 0.0, -e[0], v0, v1, v2, h, h, h):
            return False
        if _axis_test(-e[1], e[0], 0.0, v0, v1, v2, h, h, h):
            return False
    return True


@njit(cache=True)
def _voxelize_kernel(verts, tris, occ, res):
    inv = float(res)  # cells per unit; box spans [-0.5, 0.5]
    half = 0.5 / res
    for t in range(tris.shape[0]):
        t0 = verts[tris[t, 0]]
        t1 = verts[tris[t, 1]]
        t2 = verts[tris[t, 2]]
        lo0 = min(t0[0], min(t1[0], t2[0]))
        hi0 = max(t0[0], max(t1[0], t2[0]))
        lo1 = min(t0[1], min(t1[1], t2[1]))
        hi1 = max(t0[1], max(t1[1], t2[1]))
        lo2 = min(t0[2], min(t1[2], t2[2]))
        hi2 = max(t0[2], max(t1[2], t2[2]))
        # Candidate index ranges, widened by one cell so triangles lying
        # exactly on a cell boundary also reach the touching layer, and
        # clamped to the grid (meshes with longest side exactly 1 put faces
        # on the boundary planes). The SAT test decides the exact set.
        i0 = max(0, min(res - 1, int(np.floor((lo0 + 0.5) * inv)) - 1))
        i1 = max(0, min(res - 1, int(np.floor((hi0 + 0.5) * inv)) + 1))
        j0 = max(0, min(res - 1, int(np.floor((lo1 + 0.5) * inv)) - 1))
        j1 = max(0, min(res - 1, int(np.floor((hi1 + 0.5) * inv)) + 1))
        k0 = max(0, min(res - 1, int(np.floor((lo2 + 0.5) * inv)) - 1))
        k1 = max(0, min(res - 1, int(np.floor((hi2 + 0.5) * inv)) + 1))
        for i in range(i0, i1 + 1):
            cx = -0.5 + (i + 0.5) / res
            for j in range(j0, j1 + 1):
                cy = -0.5 + (j + 0.5) / res
                for k in range(k0, k1 + 1):
                    if occ[i, j, k]:
                        continue
                    cz = -0.5 + (k + 0.5) / res
                    if _tri_box_overlap(cx, cy, cz, half, t0, t1, t2):
                        occ[i, j, k] = True


def voxelize_surface(m, resolution: int = 128) -> VoxelGrid:
    """Mark every cubic cell whose closed volume intersects a triangle."""
    if resolution < 4:
        raise ValueError(f"resolution must be >= 4, got {resolution}")
    lo, hi = m.bounds()
    if lo.min() < -0.5 - 1e-6 or hi.max() > 0.5 + 1e-6:
        raise ValueError(
            "mesh extends outside [-0.5, 0.5]^3; normalize it first"
        )
    occ = np.zeros((resolution, resolution, resolution), dtype=np.bool_)
    verts = np.ascontiguousarray(m.vertices, dtype=np.float64)
    tris = np.ascontiguousarray(m.triangles, dtype=np.int64)
    _voxelize_kernel(verts, tris, occ, resolution)
    return VoxelGrid(resolution, occ)


_SIX_CONN = ndimage.generate_binary_structure(3, 1)


def solidify(g: VoxelGrid) -> VoxelGrid:
    """Fill everything not 6-connected to the grid boundary through free space."""
    occ = g.occupancy
    free = ~occ
    seed = np.zeros_like(free)
    seed[0, :, :] = free[0, :, :]
    seed[-1, :, :] = free[-1, :, :]
    seed[:, 0, :] = free[:, 0, :]
    seed[:, -1, :] = free[:, -1, :]
    seed[:, :, 0] = free[:, :, 0]
    seed[:, :, -1] = free[:, :, -1]
    exterior = ndimage.binary_propagation(seed, structure=_SIX_CONN, mask=free)
    return VoxelGrid(g.resolution, ~exterior)


def write_voxel_dump(g: VoxelGrid, path) -> None:
    """Debug dump: "SNV1", u32 resolution, bit-packed occupancy (x-fastest)."""
    bits = np.packbits(g.flat().astype(np.uint8), bitorder="little")
    with open(path, "wb") as fh:
        fh.write(b"SNV1")
        fh.write(struct.pack("<I", g.resolution))
        fh.write(bits.tobytes())


def read_voxel_dump(path) -> VoxelGrid:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"SNV1":
            raise ValueError(f"bad voxel dump magic: {magic!r}")
        (res,) = struct.unpack("<I", fh.read(4))
        n = res**3
        raw = np.frombuffer(fh.read((n + 7) // 8), dtype=np.uint8)
    flat = np.unpackbits(raw, bitorder="little")[:n].astype(np.bool_)
    return VoxelGrid(res, flat.reshape((res, res, res), order="F"))

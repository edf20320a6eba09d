"""Triangle mesh loading and canonical normalization.

The canonical frame puts the axis-aligned bounding-box center at the origin
and scales uniformly so the longest bounding-box side is 1.0, i.e. all
vertices end up inside [-0.5, 0.5]^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class MeshError(ValueError):
    """Raised for unreadable, malformed, or degenerate mesh input."""


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float64
    triangles: np.ndarray  # (T, 3) int64 vertex indices

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        t = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        if t.shape[0] == 0:
            raise MeshError("mesh has no triangles")
        if t.min() < 0 or t.max() >= v.shape[0]:
            raise MeshError(
                f"triangle index out of range (vertex count {v.shape[0]})"
            )

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _iter_content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _parse_off(text: str) -> TriangleMesh:
    lines = _iter_content_lines(text)
    try:
        first = next(lines)
    except StopIteration:
        raise MeshError("empty OFF file") from None
    if not first.upper().startswith("OFF"):
        raise MeshError("missing OFF header")
    # Some ModelNet files glue the counts onto the header line ("OFF123 75 0").
    rest = first[3:].strip()
    counts_line = rest if rest else next(lines, None)
    if counts_line is None:
        raise MeshError("truncated OFF file: missing counts line")
    parts = counts_line.split()
    if len(parts) < 2:
        raise MeshError(f"malformed OFF counts line: {counts_line!r}")
    try:
        n_verts, n_faces = int(parts[0]), int(parts[1])
    except ValueError:
        raise MeshError(f"malformed OFF counts line: {counts_line!r}") from None

    verts = np.empty((n_verts, 3), dtype=np.float64)
    for i in range(n_verts):
        line = next(lines, None)
        if line is None:
            raise MeshError("truncated OFF file: missing vertices")
        fields = line.split()
        if len(fields) < 3:
            raise MeshError(f"malformed OFF vertex line: {line!r}")
        verts[i] = [float(fields[0]), float(fields[1]), float(fields[2])]

    tris = []
    for _ in range(n_faces):
        line = next(lines, None)
        if line is None:
            raise MeshError("truncated OFF file: missing faces")
        fields = line.split()
        n = int(fields[0])
        if n < 3 or len(fields) < 1 + n:
            raise MeshError(f"malformed OFF face line: {line!r}")
        idx = [int(f) for f in fields[1 : 1 + n]]
        # Fan-triangulate polygons from the first vertex.
        for a, b in zip(idx[1:-1], idx[2:]):
            tris.append((idx[0], a, b))
    return TriangleMesh(verts, np.array(tris, dtype=np.int64))


def _parse_obj(text: str) -> TriangleMesh:
    verts = []
    tris = []
    for line in _iter_content_lines(text):
        fields = line.split()
        if fields[0] == "v":
            if len(fields) < 4:
                raise MeshError(f"malformed OBJ vertex line: {line!r}")
            verts.append((float(fields[1]), float(fields[2]), float(fields[3])))
        elif fields[0] == "f":
            # "f v", "f v/vt", "f v/vt/vn", "f v//vn" all reduce to the
            # leading vertex index; OBJ indices are 1-based.
            idx = [int(f.split("/")[0]) - 1 for f in fields[1:]]
            if len(idx) < 3:
                raise MeshError(f"malformed OBJ face line: {line!r}")
            for a, b in zip(idx[1:-1], idx[2:]):
                tris.append((idx[0], a, b))
    if not verts:
        raise MeshError("OBJ file has no vertices")
    return TriangleMesh(
        np.array(verts, dtype=np.float64), np.array(tris, dtype=np.int64)
    )


def load_mesh(path) -> TriangleMesh:
    """Load an OFF or OBJ mesh file. Polygonal faces are fan-triangulated."""
    path = Path(path)
    if not path.is_file():
        raise MeshError(f"mesh file not found: {path}")
    suffix = path.suffix.lower()
    text = path.read_text()
    if suffix == ".off":
        return _parse_off(text)
    if suffix == ".obj":
        return _parse_obj(text)
    raise MeshError(f"unsupported mesh format: {suffix!r} (expected .off or .obj)")


# Meshes already canonical within this tolerance are returned unchanged so
# that normalization is bitwise idempotent.
_ALREADY_NORMALIZED_EPS = 1e-12


def normalize_mesh(m: TriangleMesh) -> TriangleMesh:
    """Center the bounding box at the origin and scale the longest side to 1."""
    lo, hi = m.bounds()
    extent = hi - lo
    longest = extent.max()
    if longest <= 0.0:
        raise MeshError("degenerate mesh: zero bounding-box extent on all axes")
    center = (lo + hi) / 2.0
    if (
        np.abs(center).max() < _ALREADY_NORMALIZED_EPS
        and abs(longest - 1.0) < _ALREADY_NORMALIZED_EPS
    ):
        return m
    return TriangleMesh((m.vertices - center) / longest, m.triangles)

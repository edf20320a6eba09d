"""Graph file formats: JSON (schema version 1), binary "SNG1", ASCII PLY.

The JSON encoding keeps full double precision (Python's repr round-trips).
The binary encoding stores float32; the pipeline rounds all node and feature
values through float32 at graph build time, so for pipeline outputs the two
encodings decode to identical numbers. The binary format carries no meta
block or graph parameters.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .features import ADR_DIM, FeatureMatrix
from .grapher import GraphParams, SnGraph
from .sampler import SphereNode

JSON_VERSION = 1

_FLAG_PR = 1
_FLAG_ADR = 2


class GraphFormatError(ValueError):
    """Raised on malformed or unsupported graph files."""


def _feature_dict(feats):
    out = {}
    for f in feats or []:
        out[f.kind] = [[float(x) for x in row] for row in f.rows]
    return out


def write_graph_json(g: SnGraph, feats: list[FeatureMatrix] | None, path) -> None:
    doc = {
        "meta": {
            **g.meta,
            "params": {
                "p": g.params.p,
                "t_d": g.params.t_d,
                "t_p": g.params.t_p,
                "q": g.params.q,
            },
            "version": JSON_VERSION,
        },
        "nodes": [
            {"c": [float(x) for x in n.center], "r": float(n.radius)}
            for n in g.nodes
        ],
        "edges": [list(e) for e in g.sorted_edges()],
        "rule4_edges": [list(e) for e in sorted(g.rule4_edges)],
        "features": _feature_dict(feats),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def read_graph_json(path) -> tuple[SnGraph, list[FeatureMatrix]]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise GraphFormatError(f"invalid JSON graph file: {err}") from None
    try:
        meta = dict(doc["meta"])
        version = meta.pop("version")
        if version != JSON_VERSION:
            raise GraphFormatError(f"unsupported graph file version: {version}")
        pdict = meta.pop("params")
        params = GraphParams(
            p=pdict["p"], t_d=pdict["t_d"], t_p=pdict["t_p"], q=pdict["q"]
        )
        nodes = [
            SphereNode(
                center=np.array(n["c"], dtype=np.float64),
                radius=float(n["r"]),
                voxel_index=(-1, -1, -1),
            )
            for n in doc["nodes"]
        ]
        edges = {tuple(e) for e in doc["edges"]}
        rule4 = {tuple(e) for e in doc["rule4_edges"]}
        feats = []
        for kind, rows in doc["features"].items():
            width = 4 if kind == "pr" else ADR_DIM
            feats.append(
                FeatureMatrix(
                    kind, np.array(rows, dtype=np.float64).reshape(-1, width)
                )
            )
    except (KeyError, TypeError) as err:
        raise GraphFormatError(f"malformed graph file schema: {err!r}") from None
    return SnGraph(nodes, edges, rule4, params, meta), feats


def write_graph_binary(g: SnGraph, feats: list[FeatureMatrix] | None, path) -> None:
    feats = feats or []
    by_kind = {f.kind: f for f in feats}
    flags = (_FLAG_PR if "pr" in by_kind else 0) | (_FLAG_ADR if "adr" in by_kind else 0)
    edges = g.sorted_edges()
    rule4 = sorted(g.rule4_edges)
    with open(path, "wb") as fh:
        fh.write(b"SNG1")
        fh.write(struct.pack("<IIIB", len(g.nodes), len(edges), len(rule4), flags))
        node_arr = np.empty((len(g.nodes), 4), dtype="<f4")
        for i, n in enumerate(g.nodes):
            node_arr[i, :3] = n.center
            node_arr[i, 3] = n.radius
        fh.write(node_arr.tobytes())
        fh.write(np.array(edges, dtype="<u4").reshape(-1, 2).tobytes())
        fh.write(np.array(rule4, dtype="<u4").reshape(-1, 2).tobytes())
        if "pr" in by_kind:
            fh.write(by_kind["pr"].rows.astype("<f4").tobytes())
        if "adr" in by_kind:
            fh.write(by_kind["adr"].rows.astype("<f4").tobytes())


def _read_exact(fh, count, what):
    buf = fh.read(count)
    if len(buf) != count:
        raise GraphFormatError(f"truncated graph file while reading {what}")
    return buf


def read_graph_binary(path) -> tuple[SnGraph, list[FeatureMatrix]]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"SNG1":
            raise GraphFormatError(f"bad graph file magic: {magic!r}")
        n, e, r4, flags = struct.unpack("<IIIB", _read_exact(fh, 13, "header"))
        node_arr = np.frombuffer(
            _read_exact(fh, n * 16, "nodes"), dtype="<f4"
        ).reshape(n, 4)
        edge_arr = np.frombuffer(
            _read_exact(fh, e * 8, "edges"), dtype="<u4"
        ).reshape(e, 2)
        rule4_arr = np.frombuffer(
            _read_exact(fh, r4 * 8, "rule4 edges"), dtype="<u4"
        ).reshape(r4, 2)
        feats = []
        if flags & _FLAG_PR:
            rows = np.frombuffer(_read_exact(fh, n * 16, "PR rows"), dtype="<f4")
            feats.append(FeatureMatrix("pr", rows.astype(np.float64).reshape(n, 4)))
        if flags & _FLAG_ADR:
            rows = np.frombuffer(
                _read_exact(fh, n * ADR_DIM * 4, "ADR rows"), dtype="<f4"
            )
            feats.append(
                FeatureMatrix("adr", rows.astype(np.float64).reshape(n, ADR_DIM))
            )
    nodes = [
        SphereNode(
            center=node_arr[i, :3].astype(np.float64),
            radius=float(node_arr[i, 3]),
            voxel_index=(-1, -1, -1),
        )
        for i in range(n)
    ]
    edges = {(int(i), int(j)) for i, j in edge_arr}
    rule4 = {(int(i), int(j)) for i, j in rule4_arr}
    return SnGraph(nodes, edges, rule4, GraphParams(), {}), feats


def export_ply(g: SnGraph, path) -> None:
    """ASCII PLY with node centers (plus radius) as vertices and graph edges."""
    edges = g.sorted_edges()
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(g.nodes)}",
        "property float x",
        "property float y",
        "property float z",
        "property float radius",
        f"element edge {len(edges)}",
        "property int vertex1",
        "property int vertex2",
        "end_header",
    ]
    for n in g.nodes:
        lines.append(
            f"{n.center[0]:.9g} {n.center[1]:.9g} {n.center[2]:.9g} {n.radius:.9g}"
        )
    for i, j in edges:
        lines.append(f"{i} {j}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

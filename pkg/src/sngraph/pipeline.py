"""End-to-end conversion: mesh file -> SN-Graph (+ features) -> graph file.

Dataset mode walks a <class>/<split>/<file> tree, mirrors it under the
output root, and writes a manifest CSV. Per-model failures are logged and
skipped; every file's output depends only on its own input, so results are
identical regardless of worker count.
"""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import features as feat
from .grapher import GraphParams, SnGraph, build_graph
from .graphio import export_ply, write_graph_binary, write_graph_json
from .mesh import load_mesh, normalize_mesh
from .sampler import select_fss, select_spheres
from .sdf import compute_sdf
from .voxel import solidify, voxelize_surface

log = logging.getLogger("sngraph")

MESH_SUFFIXES = (".off", ".obj")


class EmptyObjectError(ValueError):
    """The voxelized model has no interior voxels."""


@dataclass(frozen=True)
class PipelineConfig:
    resolution: int = 128
    n: int = 32
    params: GraphParams = field(default_factory=GraphParams)
    sampler: str = "nodesphere"  # "nodesphere" | "fss"
    features: str = "both"  # "none" | "pr" | "adr" | "both"
    format: str = "json"  # "json" | "binary" | "ply"
    threshold_units: str = "normalized"  # "normalized" | "voxel"
    jobs: int = 0  # 0 = auto
    skip_existing: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.resolution < 4:
            raise ValueError(f"resolution must be >= 4, got {self.resolution}")
        if self.sampler not in ("nodesphere", "fss"):
            raise ValueError(f"unknown sampler: {self.sampler!r}")
        if self.features not in ("none", "pr", "adr", "both"):
            raise ValueError(f"unknown feature kind: {self.features!r}")
        if self.format not in ("json", "binary", "ply"):
            raise ValueError(f"unknown output format: {self.format!r}")
        if self.threshold_units not in ("normalized", "voxel"):
            raise ValueError(f"unknown threshold units: {self.threshold_units!r}")

    def effective_params(self) -> GraphParams:
        # t_d may be given in voxel units for sensitivity checks; the
        # interior test always works in normalized units.
        if self.threshold_units == "voxel":
            return replace(self.params, t_d=self.params.t_d / self.resolution)
        return self.params


def run_pipeline(mesh_path, cfg: PipelineConfig) -> tuple[SnGraph, list]:
    """Convert one mesh file into a graph plus the configured feature matrices."""
    mesh = normalize_mesh(load_mesh(mesh_path))
    grid = solidify(voxelize_surface(mesh, cfg.resolution))
    sdf = compute_sdf(grid)
    if sdf.is_empty:
        raise EmptyObjectError(f"no interior voxels at R={cfg.resolution}: {mesh_path}")
    select = select_spheres if cfg.sampler == "nodesphere" else select_fss
    sel = select(sdf, cfg.n)
    graph = build_graph(
        sel, sdf, cfg.effective_params(), meta={"source": Path(mesh_path).name}
    )
    feats = []
    if cfg.features in ("pr", "both"):
        feats.append(feat.extract_pr(graph))
    if cfg.features in ("adr", "both"):
        feats.append(feat.extract_adr(graph))
    return graph, feats


OUTPUT_SUFFIX = {"json": ".sng.json", "binary": ".sng", "ply": ".ply"}


def write_output(graph: SnGraph, feats, path, fmt: str) -> None:
    if fmt == "json":
        write_graph_json(graph, feats, path)
    elif fmt == "binary":
        write_graph_binary(graph, feats, path)
    else:
        export_ply(graph, path)


def convert_file(mesh_path, out_path, cfg: PipelineConfig) -> int:
    """Run the pipeline and write one output file; returns achieved node count."""
    graph, feats = run_pipeline(mesh_path, cfg)
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    write_output(graph, feats, out_path, cfg.format)
    return len(graph.nodes)


@dataclass
class ManifestRow:
    path: str  # mesh path relative to the dataset root
    label: str
    split: str
    achieved_n: int
    output: str  # graph path relative to the output root


@dataclass
class DatasetResult:
    rows: list[ManifestRow]
    failures: list[tuple[str, str]]  # (relative path, error message)


def _worker_count(cfg: PipelineConfig) -> int:
    jobs = cfg.jobs or os.cpu_count() or 1
    cap = os.environ.get("SNGRAPH_THREADS")
    if cap:
        jobs = min(jobs, max(1, int(cap)))
    return max(1, jobs)


def _existing_node_count(out_path, fmt: str) -> int:
    if fmt == "json":
        from .graphio import read_graph_json

        return len(read_graph_json(out_path)[0].nodes)
    if fmt == "binary":
        from .graphio import read_graph_binary

        return len(read_graph_binary(out_path)[0].nodes)
    with open(out_path) as fh:
        for line in fh:
            if line.startswith("element vertex"):
                return int(line.split()[2])
    raise ValueError(f"no vertex element in {out_path}")


def _convert_one(args):
    rel, label, split, mesh_path, out_path, cfg = args
    try:
        if cfg.skip_existing and Path(out_path).is_file():
            return rel, label, split, _existing_node_count(out_path, cfg.format), None
        achieved = convert_file(mesh_path, out_path, cfg)
        return rel, label, split, achieved, None
    except Exception as err:  # isolate per-model failures in batch mode
        return rel, label, split, 0, f"{type(err).__name__}: {err}"


def discover_dataset(root) -> list[tuple[str, str, str, Path]]:
    """Yield (relative path, class label, split, absolute path) mesh entries."""
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"dataset root not found: {root}")
    entries = []
    for cls_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for split in ("train", "test"):
            split_dir = cls_dir / split
            if not split_dir.is_dir():
                continue
            for f in sorted(split_dir.iterdir()):
                if f.suffix.lower() in MESH_SUFFIXES:
                    entries.append(
                        (str(f.relative_to(root)), cls_dir.name, split, f)
                    )
    return entries


def process_dataset(root, out_root, cfg: PipelineConfig) -> DatasetResult:
    root = Path(root)
    out_root = Path(out_root)
    entries = discover_dataset(root)
    suffix = OUTPUT_SUFFIX[cfg.format]
    tasks = []
    for rel, label, split, path in entries:
        out_path = out_root / Path(rel).with_suffix(suffix)
        tasks.append((rel, label, split, str(path), str(out_path), cfg))

    jobs = _worker_count(cfg)
    if jobs == 1 or len(tasks) <= 1:
        results = [_convert_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_convert_one, tasks))

    rows, failures = [], []
    for rel, label, split, achieved, err in results:
        out_rel = str(Path(rel).with_suffix(suffix))
        if err is not None:
            log.warning("skipping %s: %s", rel, err)
            failures.append((rel, err))
        else:
            rows.append(ManifestRow(rel, label, split, achieved, out_rel))

    out_root.mkdir(parents=True, exist_ok=True)
    manifest_path = out_root / "manifest.csv"
    with open(manifest_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "split", "achieved_n", "output"])
        for row in rows:
            writer.writerow(
                [row.path, row.label, row.split, row.achieved_n, row.output]
            )
    return DatasetResult(rows, failures)

"""Command-line interface.

Subcommands:
    convert     one mesh file -> one graph file
    dataset     <class>/<split>/<file> tree -> mirrored graph tree + manifest
    inspect     print node/edge statistics of a graph file
    export-ply  re-export a stored graph as ASCII PLY

Exit codes: 0 on success, 1 on hard failure, 2 on partial batch failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .grapher import GraphParams
from .graphio import GraphFormatError, export_ply, read_graph_binary, read_graph_json
from .pipeline import (
    OUTPUT_SUFFIX,
    PipelineConfig,
    convert_file,
    process_dataset,
)


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--resolution", type=int, default=128, help="voxels per axis")
    p.add_argument("--nodes", type=int, default=32, help="sphere nodes to select")
    p.add_argument("--sampler", choices=["nodesphere", "fss"], default="nodesphere")
    p.add_argument(
        "--features", choices=["none", "pr", "adr", "both"], default="both"
    )
    p.add_argument("--format", choices=["json", "binary", "ply"], default="json")
    p.add_argument("--p", type=int, default=10, help="samples per candidate edge")
    p.add_argument("--t-d", type=float, default=0.05, help="outside SDF threshold")
    p.add_argument("--t-p", type=float, default=0.7, help="outside fraction threshold")
    p.add_argument("--q", type=int, default=6, help="max node degree")
    p.add_argument(
        "--threshold-units",
        choices=["normalized", "voxel"],
        default="normalized",
        help="units in which --t-d is given",
    )
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0 = auto)")


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        resolution=args.resolution,
        n=args.nodes,
        params=GraphParams(p=args.p, t_d=args.t_d, t_p=args.t_p, q=args.q),
        sampler=args.sampler,
        features=args.features,
        format=args.format,
        threshold_units=args.threshold_units,
        jobs=args.jobs,
        skip_existing=getattr(args, "skip_existing", False),
    )


def _read_graph(path):
    path = Path(path)
    if path.suffix == ".json" or path.suffixes[-2:] == [".sng", ".json"]:
        return read_graph_json(path)
    return read_graph_binary(path)


def _cmd_convert(args) -> int:
    out = args.output
    if out is None:
        out = str(Path(args.mesh).with_suffix(OUTPUT_SUFFIX[args.format]))
    achieved = convert_file(args.mesh, out, _config(args))
    print(f"{args.mesh} -> {out} ({achieved} nodes)")
    return 0


def _cmd_dataset(args) -> int:
    result = process_dataset(args.root, args.output, _config(args))
    print(
        f"converted {len(result.rows)} models, "
        f"{len(result.failures)} failures -> {args.output}/manifest.csv"
    )
    for rel, err in result.failures:
        print(f"  failed: {rel}: {err}", file=sys.stderr)
    return 2 if result.failures else 0


def _cmd_inspect(args) -> int:
    graph, feats = _read_graph(args.graph)
    deg = graph.degrees()
    print(f"nodes:       {len(graph.nodes)}")
    print(f"edges:       {len(graph.edges)} ({len(graph.rule4_edges)} rule-4)")
    if len(graph.nodes):
        radii = graph.radii()
        print(f"degree:      min {deg.min()} / mean {deg.mean():.2f} / max {deg.max()}")
        print(f"radius:      min {radii.min():.5f} / max {radii.max():.5f}")
    for f in feats:
        print(f"features:    {f.kind} {f.rows.shape[0]}x{f.rows.shape[1]}")
    for key, value in graph.meta.items():
        print(f"meta.{key}: {value}")
    return 0


def _cmd_export_ply(args) -> int:
    graph, _ = _read_graph(args.graph)
    out = args.output or str(Path(args.graph).with_suffix(".ply"))
    export_ply(graph, out)
    print(f"{args.graph} -> {out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sngraph", description="Sphere-node graph extraction from meshes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_convert = sub.add_parser("convert", help="convert a single mesh file")
    p_convert.add_argument("mesh")
    p_convert.add_argument("-o", "--output", default=None)
    _add_pipeline_flags(p_convert)
    p_convert.set_defaults(func=_cmd_convert)

    p_dataset = sub.add_parser("dataset", help="convert a dataset tree")
    p_dataset.add_argument("root")
    p_dataset.add_argument("-o", "--output", required=True)
    p_dataset.add_argument(
        "--skip-existing", action="store_true", help="keep already converted outputs"
    )
    _add_pipeline_flags(p_dataset)
    p_dataset.set_defaults(func=_cmd_dataset)

    p_inspect = sub.add_parser("inspect", help="print graph file statistics")
    p_inspect.add_argument("graph")
    p_inspect.set_defaults(func=_cmd_inspect)

    p_ply = sub.add_parser("export-ply", help="re-export a graph file as PLY")
    p_ply.add_argument("graph")
    p_ply.add_argument("-o", "--output", default=None)
    p_ply.set_defaults(func=_cmd_export_ply)

    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, GraphFormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

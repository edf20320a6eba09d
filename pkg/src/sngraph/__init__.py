"""Sphere-node graph extraction from triangle meshes."""

from .features import FeatureMatrix, extract_adr, extract_pr, neighbor_order
from .grapher import (
    GraphParams,
    SnGraph,
    build_graph,
    edge_interior_test,
    edge_sphere_clearance,
)
from .graphio import (
    export_ply,
    read_graph_binary,
    read_graph_json,
    write_graph_binary,
    write_graph_json,
)
from .mesh import MeshError, TriangleMesh, load_mesh, normalize_mesh
from .pipeline import PipelineConfig, process_dataset, run_pipeline
from .sampler import (
    Selection,
    SphereNode,
    node_distance,
    select_first,
    select_fss,
    select_spheres,
)
from .sdf import SdfGrid, compute_sdf, squared_distance_transform
from .voxel import VoxelGrid, solidify, voxelize_surface

__version__ = "0.1.0"

__all__ = [
    "FeatureMatrix",
    "GraphParams",
    "MeshError",
    "PipelineConfig",
    "SdfGrid",
    "Selection",
    "SnGraph",
    "SphereNode",
    "TriangleMesh",
    "VoxelGrid",
    "build_graph",
    "compute_sdf",
    "edge_interior_test",
    "edge_sphere_clearance",
    "export_ply",
    "extract_adr",
    "extract_pr",
    "load_mesh",
    "neighbor_order",
    "node_distance",
    "normalize_mesh",
    "process_dataset",
    "read_graph_binary",
    "read_graph_json",
    "run_pipeline",
    "select_first",
    "select_fss",
    "select_spheres",
    "solidify",
    "squared_distance_transform",
    "voxelize_surface",
    "write_graph_binary",
    "write_graph_json",
]

"""Reference graph-attention classifier for sphere-node graph files."""

from .data import (
    ADR_DIM,
    PR_DIM,
    GraphFileError,
    GraphSample,
    compute_adr,
    load_split,
    random_rotation,
    read_graph,
    read_manifest,
    rotate_sample,
)
from .model import (
    GraphAttentionLayer,
    GraphClassifier,
    ModelSpec,
    build_edge_index,
    readout,
)
from .toydata import generate_toy_corpus
from .train import TrainConfig, evaluate, evaluate_ar, train

__all__ = [
    "ADR_DIM",
    "PR_DIM",
    "GraphFileError",
    "GraphSample",
    "GraphAttentionLayer",
    "GraphClassifier",
    "ModelSpec",
    "TrainConfig",
    "build_edge_index",
    "compute_adr",
    "evaluate",
    "evaluate_ar",
    "generate_toy_corpus",
    "load_split",
    "random_rotation",
    "read_graph",
    "read_manifest",
    "readout",
    "rotate_sample",
    "train",
]

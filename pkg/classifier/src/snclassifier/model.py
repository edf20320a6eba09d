"""Graph-attention classifier over sphere-node graphs.

Architecture: a linear embedding to 64 channels, four graph-attention
layers of width 64, a 512-wide readout (per-layer global max over nodes,
256, concatenated with per-layer global mean, 256), and a 3-layer fully
connected head.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
from torch import nn


@dataclass(frozen=True)
class ModelSpec:
    in_dim: int  # 4 for PR rows, 29 for ADR rows
    num_classes: int
    embed_dim: int = 64
    conv_layers: int = 4
    fc_dims: tuple[int, int] = (256, 64)
    dropout: float = 0.0

    def __post_init__(self):
        if self.in_dim < 1 or self.num_classes < 2:
            raise ValueError("need in_dim >= 1 and num_classes >= 2")
        if self.conv_layers < 1:
            raise ValueError("need at least one attention layer")


def build_edge_index(num_nodes: int, edges, device=None) -> torch.Tensor:
    """Directed (2, E') index: both directions of each edge plus self-loops."""
    if num_nodes < 1:
        raise ValueError("empty graph")
    src = [i for i, _ in edges] + [j for _, j in edges] + list(range(num_nodes))
    dst = [j for _, j in edges] + [i for i, _ in edges] + list(range(num_nodes))
    return torch.tensor([src, dst], dtype=torch.long, device=device)


class GraphAttentionLayer(nn.Module):
    """Single-head attention aggregation over each node's neighborhood.

    Scores are a learned additive function of the transformed endpoint
    features, softmax-normalized over the incoming edges of each node
    (self-loop included), then used to weight-sum the neighbor features.
    """

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin = nn.Linear(in_dim, out_dim, bias=False)
        self.att_src = nn.Parameter(torch.empty(out_dim))
        self.att_dst = nn.Parameter(torch.empty(out_dim))
        self.bias = nn.Parameter(torch.zeros(out_dim))
        nn.init.xavier_uniform_(self.lin.weight)
        bound = 1.0 / out_dim**0.5
        nn.init.uniform_(self.att_src, -bound, bound)
        nn.init.uniform_(self.att_dst, -bound, bound)

    def forward(self, x: torch.Tensor, edge_index: torch.Tensor) -> torch.Tensor:
        if x.shape[0] < 1:
            raise ValueError("empty graph")
        n = x.shape[0]
        h = self.lin(x)
        src, dst = edge_index[0], edge_index[1]
        score = nn.functional.leaky_relu(
            (h[src] * self.att_src).sum(-1) + (h[dst] * self.att_dst).sum(-1),
            negative_slope=0.2,
        )
        # Numerically stable softmax per destination node.
        peak = torch.full((n,), float("-inf"), dtype=score.dtype, device=score.device)
        peak = peak.scatter_reduce(0, dst, score, reduce="amax", include_self=False)
        weight = torch.exp(score - peak[dst])
        denom = torch.zeros(n, dtype=weight.dtype, device=weight.device)
        denom = denom.index_add(0, dst, weight)
        alpha = weight / denom[dst]
        out = torch.zeros_like(h).index_add(0, dst, alpha.unsqueeze(-1) * h[src])
        return nn.functional.elu(out + self.bias)


def readout(layer_outputs: list[torch.Tensor]) -> torch.Tensor:
    """[max over nodes of each layer | mean over nodes of each layer]."""
    if any(h.shape[0] < 1 for h in layer_outputs):
        raise ValueError("empty graph")
    maxes = [h.max(dim=0).values for h in layer_outputs]
    means = [h.mean(dim=0) for h in layer_outputs]
    return torch.cat(maxes + means)


class GraphClassifier(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.spec = spec
        self.embed = nn.Linear(spec.in_dim, spec.embed_dim)
        self.convs = nn.ModuleList(
            GraphAttentionLayer(spec.embed_dim, spec.embed_dim)
            for _ in range(spec.conv_layers)
        )
        pooled = 2 * spec.conv_layers * spec.embed_dim
        f1, f2 = spec.fc_dims
        self.head = nn.Sequential(
            nn.Linear(pooled, f1),
            nn.ReLU(),
            nn.Dropout(spec.dropout),
            nn.Linear(f1, f2),
            nn.ReLU(),
            nn.Linear(f2, spec.num_classes),
        )

    def forward(self, x: torch.Tensor, edge_index: torch.Tensor) -> torch.Tensor:
        """Logits for one graph: x is (N, in_dim), edge_index directed (2, E')."""
        h = torch.relu(self.embed(x))
        outputs = []
        for conv in self.convs:
            h = conv(h, edge_index)
            outputs.append(h)
        return self.head(readout(outputs))

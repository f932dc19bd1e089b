"""LINE second-order proximity embeddings over directed edge samples."""

from __future__ import annotations

import numpy as np

from ..errors import NoEdges
from .config import EmbeddingConfig
from .skipgram import Embedding, sgns_train


def train_line(graph, config: EmbeddingConfig) -> Embedding:
    """Each undirected edge contributes a (u, v) and a (v, u) sample."""
    if graph.edge_count == 0:
        raise NoEdges("cannot train LINE on an empty edge set")
    vocab = graph.handles()
    index = {h: i for i, h in enumerate(vocab)}
    centers = []
    contexts = []
    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        centers.append(index[edge.src])
        contexts.append(index[edge.dst])
        centers.append(index[edge.dst])
        contexts.append(index[edge.src])
    centers = np.asarray(centers, dtype=np.int64)
    contexts = np.asarray(contexts, dtype=np.int64)
    counts = np.bincount(contexts, minlength=len(vocab))
    counts = np.maximum(counts, 1)
    vectors, losses = sgns_train(centers, contexts, len(vocab), counts, config)
    return Embedding(vectors, index, losses)

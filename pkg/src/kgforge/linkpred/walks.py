"""Second-order biased random walks over the undirected skeleton."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import EmbeddingConfig


@dataclass
class WalkCorpus:
    walks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # isolated node handles


def undirected_adjacency(graph) -> dict:
    """handle -> sorted list of distinct neighbor handles."""
    adj = {h: set() for h in graph.handles()}
    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        adj[edge.src].add(edge.dst)
        adj[edge.dst].add(edge.src)
    return {h: sorted(ns) for h, ns in adj.items()}


def generate_walks(graph, config: EmbeddingConfig) -> WalkCorpus:
    """walks_per_node walks of walk_length steps per non-isolated node.

    Transition weights relative to the previous node: 1/p for returning,
    1 for distance-1 neighbors, 1/q for distance-2 hops. p = q = 1 is a
    uniform (DeepWalk) walk.
    """
    adj = undirected_adjacency(graph)
    neighbor_sets = {h: set(ns) for h, ns in adj.items()}
    rng = np.random.default_rng(config.seed)
    uniform = config.p == 1.0 and config.q == 1.0
    corpus = WalkCorpus()

    for start in sorted(adj):
        if not adj[start]:
            corpus.skipped.append(start)
            continue
        for _ in range(config.walks_per_node):
            walk = [start]
            while len(walk) < config.walk_length:
                current = walk[-1]
                neighbors = adj[current]
                if not neighbors:
                    break
                if uniform or len(walk) == 1:
                    walk.append(neighbors[rng.integers(len(neighbors))])
                    continue
                prev = walk[-2]
                prev_neighbors = neighbor_sets[prev]
                weights = np.empty(len(neighbors))
                for i, nbr in enumerate(neighbors):
                    if nbr == prev:
                        weights[i] = 1.0 / config.p
                    elif nbr in prev_neighbors:
                        weights[i] = 1.0
                    else:
                        weights[i] = 1.0 / config.q
                weights /= weights.sum()
                walk.append(neighbors[rng.choice(len(neighbors), p=weights)])
            corpus.walks.append(walk)
    return corpus

"""Holdout generation: Connected Monte Carlo, negative sampling, and
time-stratified splits keyed on supporting-article years."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyTestSet, ExhaustedSpace, GraphTooSmall
from ..graph import Node, PropertyGraph


@dataclass
class Holdout:
    train_graph: PropertyGraph
    test_edges: list                 # (src handle, dst handle, predicate)
    all_train: bool = False          # tree input: nothing left for test


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def graph_from_edges(graph: PropertyGraph, edge_ids) -> PropertyGraph:
    """Same node set, only the given edges; handles are preserved."""
    sub = graph.copy()
    for eid in graph.edge_ids():
        if eid not in edge_ids:
            sub._remove_edge(eid)
    return sub.freeze()


def split_connected_monte_carlo(graph: PropertyGraph, spec, seed=42) -> list:
    """Per holdout, retain a spanning structure in train and shuffle the
    remaining edges into train/test at train_size."""
    edge_ids = graph.edge_ids()
    if len(edge_ids) < 3:
        raise GraphTooSmall(f"{len(edge_ids)} edges")
    holdouts = []
    for h in range(spec.number_of_holdouts):
        rng = np.random.default_rng((seed, h))
        order = [edge_ids[i] for i in rng.permutation(len(edge_ids))]
        uf = _UnionFind(graph.handles())
        forced = set()
        free = []
        for eid in order:
            edge = graph.edge(eid)
            if uf.union(edge.src, edge.dst):
                forced.add(eid)
            else:
                free.append(eid)
        want_train = max(len(forced), int(np.ceil(spec.train_size * len(edge_ids))))
        train = set(forced)
        for eid in free:
            if len(train) < want_train:
                train.add(eid)
        test = [eid for eid in order if eid not in train]
        test_edges = [
            (graph.edge(eid).src, graph.edge(eid).dst, graph.edge(eid).predicate)
            for eid in sorted(test)
        ]
        holdouts.append(Holdout(graph_from_edges(graph, train), test_edges, not test))
    return holdouts


def _undirected_pairs(graph):
    pairs = set()
    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        pairs.add((min(edge.src, edge.dst), max(edge.src, edge.dst)))
    return pairs


def sample_negatives(graph: PropertyGraph, count: int, scale_free=True, seed=42,
                     source_pool=None, target_pool=None) -> list:
    """Distinct unordered non-edge pairs; endpoints degree-weighted when
    scale_free. Pools restrict endpoints (used for per-category tasks)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    handles = graph.handles()
    existing = _undirected_pairs(graph)
    sources = sorted(source_pool) if source_pool is not None else handles
    targets = sorted(target_pool) if target_pool is not None else handles

    def weights(pool):
        if not scale_free:
            return None
        w = np.array([len(graph.neighbors(h)) + 1.0 for h in pool])
        return w / w.sum()

    w_src = weights(sources)
    w_dst = weights(targets)
    chosen = set()
    out = []
    attempts = 0
    limit = max(100_000, 200 * count)
    while len(out) < count:
        attempts += 1
        if attempts > limit:
            raise ExhaustedSpace(f"could not find {count} negatives")
        u = sources[rng.choice(len(sources), p=w_src)]
        v = targets[rng.choice(len(targets), p=w_dst)]
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in existing or key in chosen:
            continue
        chosen.add(key)
        out.append((u, v))
    return out


@dataclass
class TimeSplit:
    cutoff: int
    train_edges: list = field(default_factory=list)   # edge ids
    test_edges: list = field(default_factory=list)
    excluded: list = field(default_factory=list)      # no mappable year
    edge_years: dict = field(default_factory=dict)    # edge id -> min year


def edge_year(graph, eid, years):
    """Minimum mapped publication year over the edge's PubMedID list."""
    mapped = [years[p] for p in graph.edge(eid).properties.get("PubMedID", [])
              if p in years]
    return min(mapped) if mapped else None


def time_stratified_split(graph: PropertyGraph, years: dict, cutoff: int) -> TimeSplit:
    """train = edges first supported before cutoff; test = the rest.

    Edges with no mappable year are excluded from both sides and reported.
    """
    split = TimeSplit(cutoff)
    for eid in graph.edge_ids():
        year = edge_year(graph, eid, years)
        if year is None:
            split.excluded.append(eid)
            continue
        split.edge_years[eid] = year
        if year < cutoff:
            split.train_edges.append(eid)
        else:
            split.test_edges.append(eid)
    if not split.test_edges:
        raise EmptyTestSet(f"no edges at or after {cutoff}")
    return split

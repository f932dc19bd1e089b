"""In-memory property graph with list-valued string properties.

Nodes and edges carry `name -> list of strings` property maps. Parallel
edges sharing (src, dst, predicate) are merged by unioning their property
lists, so one logical edge exists per triple. A freeze step separates the
build phase from the query phase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateCurie,
    FrozenGraph,
    InvalidCoordinate,
    InvalidLabelSet,
    InvalidNode,
    InvalidSequence,
    RepresentativeInAbsorbedSet,
    SelfLoop,
    UnknownEndpoint,
    UnknownHandle,
)

SEQUENCE_ALPHABET = set("ACGUN")
COORDINATE_RE = re.compile(r"^[A-Za-z0-9_.]+:[0-9]+-[0-9]+[+-]$")


def union_lists(base, extra):
    """Set-semantics union of two string lists, insertion order preserved."""
    seen = set(base)
    out = list(base)
    for value in extra:
        if value not in seen:
            seen.add(value)
            out.append(value)
    return out


@dataclass
class Node:
    curie: str
    uri: str = ""
    labels: set = field(default_factory=set)
    properties: dict = field(default_factory=dict)

    def validate(self):
        if not self.curie or ":" not in self.curie:
            raise InvalidNode(f"curie must be scheme:local, got {self.curie!r}")
        if not self.labels:
            raise InvalidLabelSet(f"node {self.curie} has no labels")
        for name, values in self.properties.items():
            if not values:
                raise InvalidNode(f"{self.curie}: empty property list for {name}")
            if name == "Sequence":
                for seq in values:
                    if not set(seq) <= SEQUENCE_ALPHABET:
                        raise InvalidSequence(f"{self.curie}: bad sequence {seq!r}")
            elif name == "Genomic_coordinates":
                for coord in values:
                    if not COORDINATE_RE.match(coord):
                        raise InvalidCoordinate(f"{self.curie}: bad coordinate {coord!r}")


@dataclass
class Edge:
    id: int
    src: int
    dst: int
    predicate: str
    properties: dict = field(default_factory=dict)


class PropertyGraph:
    def __init__(self):
        self._nodes = {}           # handle -> Node
        self._edges = {}           # edge id -> Edge
        self._curie_index = {}     # curie -> handle
        self._out = {}             # handle -> list of edge ids
        self._in = {}              # handle -> list of edge ids
        self._triple_index = {}    # (src, dst, predicate) -> edge id
        self._label_index = {}     # label -> set of handles
        self._pred_index = {}      # predicate -> set of edge ids
        self._next_node = 0
        self._next_edge = 0
        self.frozen = False

    # -- build phase -------------------------------------------------

    def add_node(self, node: Node) -> int:
        if self.frozen:
            raise FrozenGraph("cannot add nodes to a frozen graph")
        node.validate()
        if node.curie in self._curie_index:
            raise DuplicateCurie(node.curie)
        handle = self._next_node
        self._next_node += 1
        self._nodes[handle] = node
        self._curie_index[node.curie] = handle
        self._out[handle] = []
        self._in[handle] = []
        for label in node.labels:
            self._label_index.setdefault(label, set()).add(handle)
        return handle

    def add_edge(self, src: int, dst: int, predicate: str, properties=None) -> int:
        if self.frozen:
            raise FrozenGraph("cannot add edges to a frozen graph")
        if src not in self._nodes or dst not in self._nodes:
            raise UnknownEndpoint(f"({src}, {dst})")
        if src == dst:
            raise SelfLoop(f"self-loop on handle {src}")
        properties = properties or {}
        for name, values in properties.items():
            if not values:
                raise InvalidNode(f"empty property list for {name}")
        key = (src, dst, predicate)
        existing = self._triple_index.get(key)
        if existing is not None:
            edge = self._edges[existing]
            for name, values in properties.items():
                edge.properties[name] = union_lists(edge.properties.get(name, []), values)
            return existing
        edge_id = self._next_edge
        self._next_edge += 1
        props = {name: union_lists([], values) for name, values in properties.items()}
        self._edges[edge_id] = Edge(edge_id, src, dst, predicate, props)
        self._triple_index[key] = edge_id
        self._out[src].append(edge_id)
        self._in[dst].append(edge_id)
        self._pred_index.setdefault(predicate, set()).add(edge_id)
        return edge_id

    def freeze(self):
        self.frozen = True
        return self

    def copy(self) -> "PropertyGraph":
        """Unfrozen deep copy (used by pruning to produce a new snapshot)."""
        clone = PropertyGraph()
        clone._nodes = {
            h: Node(n.curie, n.uri, set(n.labels), {k: list(v) for k, v in n.properties.items()})
            for h, n in self._nodes.items()
        }
        clone._edges = {
            i: Edge(e.id, e.src, e.dst, e.predicate, {k: list(v) for k, v in e.properties.items()})
            for i, e in self._edges.items()
        }
        clone._curie_index = dict(self._curie_index)
        clone._out = {h: list(v) for h, v in self._out.items()}
        clone._in = {h: list(v) for h, v in self._in.items()}
        clone._triple_index = dict(self._triple_index)
        clone._label_index = {k: set(v) for k, v in self._label_index.items()}
        clone._pred_index = {k: set(v) for k, v in self._pred_index.items()}
        clone._next_node = self._next_node
        clone._next_edge = self._next_edge
        return clone

    # -- lookup ------------------------------------------------------

    def node(self, handle: int) -> Node:
        try:
            return self._nodes[handle]
        except KeyError:
            raise UnknownHandle(str(handle)) from None

    def edge(self, edge_id: int) -> Edge:
        return self._edges[edge_id]

    def handle_of(self, curie: str):
        return self._curie_index.get(curie)

    def handles(self):
        return sorted(self._nodes)

    def edge_ids(self):
        return sorted(self._edges)

    def nodes_with_label(self, label):
        return set(self._label_index.get(label, set()))

    def edges_with_predicate(self, predicate):
        return set(self._pred_index.get(predicate, set()))

    @property
    def node_count(self):
        return len(self._nodes)

    @property
    def edge_count(self):
        return len(self._edges)

    def labels(self):
        return sorted(l for l, hs in self._label_index.items() if hs)

    def predicates(self):
        return sorted(p for p, es in self._pred_index.items() if es)

    def neighbors(self, handle: int, direction="both", predicate_filter=None):
        """Adjacency entries as (edge id, neighbor handle), ascending edge id."""
        if handle not in self._nodes:
            raise UnknownHandle(str(handle))
        pairs = []
        if direction in ("out", "both"):
            for eid in self._out[handle]:
                edge = self._edges[eid]
                if predicate_filter is None or edge.predicate in predicate_filter:
                    pairs.append((eid, edge.dst))
        if direction in ("in", "both"):
            for eid in self._in[handle]:
                edge = self._edges[eid]
                if predicate_filter is None or edge.predicate in predicate_filter:
                    pairs.append((eid, edge.src))
        pairs.sort()
        return pairs

    # -- merge -------------------------------------------------------

    def merge_nodes(self, representative: int, absorbed) -> dict:
        if self.frozen:
            raise FrozenGraph("cannot merge nodes in a frozen graph")
        absorbed = set(absorbed)
        if representative in absorbed:
            raise RepresentativeInAbsorbedSet(str(representative))
        if representative not in self._nodes:
            raise UnknownHandle(str(representative))
        for h in absorbed:
            if h not in self._nodes:
                raise UnknownHandle(str(h))

        edges_before = len(self._edges)
        rep_node = self._nodes[representative]
        group = absorbed | {representative}
        properties_unioned = 0

        for h in absorbed:
            node = self._nodes[h]
            for name, values in node.properties.items():
                rep_node.properties[name] = union_lists(rep_node.properties.get(name, []), values)
                properties_unioned += 1
            rep_node.labels |= node.labels
            for label in node.labels:
                self._label_index.setdefault(label, set()).add(representative)

        # collect every edge incident to an absorbed node, then rewire
        incident = set()
        for h in absorbed:
            incident.update(self._out[h])
            incident.update(self._in[h])
        for eid in sorted(incident):
            edge = self._edges[eid]
            new_src = representative if edge.src in absorbed else edge.src
            new_dst = representative if edge.dst in absorbed else edge.dst
            self._remove_edge(eid)
            if new_src == new_dst:
                continue  # intra-group edge would self-loop
            key = (new_src, new_dst, edge.predicate)
            existing = self._triple_index.get(key)
            if existing is not None:
                target = self._edges[existing]
                for name, values in edge.properties.items():
                    target.properties[name] = union_lists(target.properties.get(name, []), values)
            else:
                self._edges[eid] = Edge(eid, new_src, new_dst, edge.predicate, edge.properties)
                self._triple_index[key] = eid
                self._out[new_src].append(eid)
                self._in[new_dst].append(eid)
                self._pred_index.setdefault(edge.predicate, set()).add(eid)

        for h in absorbed:
            node = self._nodes.pop(h)
            del self._curie_index[node.curie]
            del self._out[h]
            del self._in[h]
            for label in node.labels:
                self._label_index[label].discard(h)

        return {
            "edges_before": edges_before,
            "edges_after": len(self._edges),
            "properties_unioned": properties_unioned,
        }

    def _remove_edge(self, eid):
        edge = self._edges.pop(eid)
        self._triple_index.pop((edge.src, edge.dst, edge.predicate), None)
        self._out[edge.src].remove(eid)
        self._in[edge.dst].remove(eid)
        self._pred_index[edge.predicate].discard(eid)

    # -- reporting ---------------------------------------------------

    def stats(self) -> dict:
        label_counts = {l: len(hs) for l, hs in self._label_index.items() if hs}
        pred_counts = {p: len(es) for p, es in self._pred_index.items() if es}
        degree_hist = {}
        for h in self._nodes:
            d = len(self._out[h]) + len(self._in[h])
            degree_hist[d] = degree_hist.get(d, 0) + 1
        return {
            "node_count": len(self._nodes),
            "edge_count": len(self._edges),
            "labels": dict(sorted(label_counts.items())),
            "predicates": dict(sorted(pred_counts.items())),
            "degree_histogram": dict(sorted(degree_hist.items())),
        }

    def check_invariants(self):
        """Rebuild the secondary indexes from scratch and compare."""
        label_index = {}
        for h, node in self._nodes.items():
            for label in node.labels:
                label_index.setdefault(label, set()).add(h)
        assert label_index == {l: hs for l, hs in self._label_index.items() if hs}
        pred_index = {}
        for eid, edge in self._edges.items():
            pred_index.setdefault(edge.predicate, set()).add(eid)
        assert pred_index == {p: es for p, es in self._pred_index.items() if es}
        assert sum(len(v) for v in self._out.values()) == len(self._edges)
        assert sum(len(v) for v in self._in.values()) == len(self._edges)
        for key, eid in self._triple_index.items():
            edge = self._edges[eid]
            assert (edge.src, edge.dst, edge.predicate) == key
        for edge in self._edges.values():
            for values in edge.properties.values():
                assert len(values) == len(set(values))
        for node in self._nodes.values():
            for values in node.properties.values():
                assert len(values) == len(set(values))

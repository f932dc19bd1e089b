"""Declarative subgraph extraction (views) and CSV export.

A view selects nodes by label and edges by predicate, optionally filtered
by a property expression over variables s (source node), r (edge), and
t (target node). Empty label set means "all labels" provided predicates
are selected, and vice versa; selecting neither is an error.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ..errors import EmptySelection
from ..graph import Node, PropertyGraph
from .evaluate import _eval_expr
from .parser import parse_filter


@dataclass
class ViewSpec:
    labels: set = field(default_factory=set)
    predicates: set = field(default_factory=set)
    property_filter: str | None = None
    include_properties: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "ViewSpec":
        return cls(
            labels=set(data.get("labels", [])),
            predicates=set(data.get("predicates", [])),
            property_filter=data.get("property_filter") or None,
            include_properties=bool(data.get("include_properties", True)),
        )


def extract_view(graph: PropertyGraph, spec: ViewSpec) -> PropertyGraph:
    if not spec.labels and not spec.predicates:
        raise EmptySelection("a view needs at least one label or predicate")
    expr = parse_filter(spec.property_filter) if spec.property_filter else None

    if spec.labels:
        selected = set()
        for label in spec.labels:
            selected |= graph.nodes_with_label(label)
    else:
        selected = set(graph.handles())

    view = PropertyGraph()
    mapping = {}
    for handle in sorted(selected):
        node = graph.node(handle)
        props = {k: list(v) for k, v in node.properties.items()} if spec.include_properties else {}
        mapping[handle] = view.add_node(Node(node.curie, node.uri, set(node.labels), props))

    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        if spec.predicates and edge.predicate not in spec.predicates:
            continue
        if edge.src not in mapping or edge.dst not in mapping:
            continue
        if expr is not None:
            binding = {"s": ("node", edge.src), "r": ("edge", eid), "t": ("node", edge.dst)}
            if not _eval_expr(graph, binding, expr):
                continue
        props = {k: list(v) for k, v in edge.properties.items()} if spec.include_properties else {}
        view.add_edge(mapping[edge.src], mapping[edge.dst], edge.predicate, props)
    return view.freeze()


def view_stats(view: PropertyGraph) -> dict:
    stats = view.stats()
    triple_counts = {}
    for eid in view.edge_ids():
        edge = view.edge(eid)
        for src_label in sorted(view.node(edge.src).labels):
            for dst_label in sorted(view.node(edge.dst).labels):
                key = (src_label, dst_label, edge.predicate)
                triple_counts[key] = triple_counts.get(key, 0) + 1
    return {
        "labels": stats["labels"],
        "edge_types": dict(sorted(triple_counts.items())),
        "degree_histogram": stats["degree_histogram"],
    }


def _write_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def export_nodes_csv(view: PropertyGraph) -> str:
    prop_names = sorted({p for h in view.handles() for p in view.node(h).properties})
    rows = []
    for h in view.handles():
        node = view.node(h)
        row = [node.curie, node.uri, "|".join(sorted(node.labels))]
        row += ["|".join(node.properties.get(name, [])) for name in prop_names]
        rows.append(row)
    return _write_csv(["id", "uri", "category"] + prop_names, rows)


def export_edges_csv(view: PropertyGraph) -> str:
    prop_names = sorted({p for eid in view.edge_ids() for p in view.edge(eid).properties})
    rows = []
    for eid in view.edge_ids():
        edge = view.edge(eid)
        row = [view.node(edge.src).curie, edge.predicate, view.node(edge.dst).curie]
        row += ["|".join(edge.properties.get(name, [])) for name in prop_names]
        rows.append(row)
    return _write_csv(["subject", "predicate", "object"] + prop_names, rows)

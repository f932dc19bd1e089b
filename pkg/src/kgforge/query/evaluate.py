"""Pattern-query evaluation over a frozen property graph.

Bindings are enumerated deterministically: the first pattern node ascends
by node handle, each hop by edge id. Absent properties evaluate to empty
lists (membership false, empty projection cell), never an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptySequence
from .parser import And, FuncCmp, Membership, Projection, QuerySpec, SizeCmp


@dataclass
class ResultTable:
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def to_dicts(self):
        return [dict(zip(self.columns, row)) for row in self.rows]


def u_fraction(sequence: str) -> float:
    if not sequence:
        raise EmptySequence("u_fraction of empty sequence")
    return sequence.count("U") / len(sequence)


def symbol_fraction(sequence: str, symbol: str) -> float:
    if not sequence:
        raise EmptySequence("symbol_fraction of empty sequence")
    return sequence.count(symbol) / len(sequence)


def _prop_list(graph, binding, var, prop):
    kind, ref = binding[var]
    if kind == "node":
        node = graph.node(ref)
        if prop == "URI":
            return [node.uri]
        return list(node.properties.get(prop, []))
    edge = graph.edge(ref)
    return list(edge.properties.get(prop, []))


_CMP = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
    "<>": lambda a, b: a != b,
}


def _eval_expr(graph, binding, expr) -> bool:
    if expr is None:
        return True
    if isinstance(expr, And):
        return all(_eval_expr(graph, binding, t) for t in expr.terms)
    if isinstance(expr, Membership):
        return expr.value in _prop_list(graph, binding, expr.var, expr.prop)
    if isinstance(expr, FuncCmp):
        values = _prop_list(graph, binding, expr.var, expr.prop)
        if not values or not values[0]:
            return False
        if expr.func == "u_fraction":
            result = u_fraction(values[0])
        else:
            result = symbol_fraction(values[0], expr.symbol)
        return _CMP[expr.op](result, expr.number)
    if isinstance(expr, SizeCmp):
        left = _prop_list(graph, binding, *expr.left)
        right = set(_prop_list(graph, binding, *expr.right))
        size = len([v for v in left if v in right])
        return _CMP[expr.op](size, expr.number)
    raise TypeError(f"unknown expression node {expr!r}")


def _project(graph, binding, proj: Projection):
    if proj.kind == "type":
        kind, ref = binding[proj.var]
        return graph.edge(ref).predicate
    if proj.kind == "labels":
        kind, ref = binding[proj.var]
        return sorted(graph.node(ref).labels)
    values = _prop_list(graph, binding, proj.var, proj.prop)
    if proj.prop == "URI":
        return values[0] if values else ""
    return values


def _enumerate_bindings(graph, spec: QuerySpec):
    first = spec.nodes[0]
    if first.label is not None:
        starts = sorted(graph.nodes_with_label(first.label))
    else:
        starts = graph.handles()

    def extend(binding, depth):
        if depth == len(spec.edges):
            yield dict(binding)
            return
        edge_step = spec.edges[depth]
        node_step = spec.nodes[depth + 1]
        _, current = binding[spec.nodes[depth].var]
        pred_filter = {edge_step.predicate} if edge_step.predicate else None
        for eid, nbr in graph.neighbors(current, "out", pred_filter):
            if node_step.label is not None and node_step.label not in graph.node(nbr).labels:
                continue
            if edge_step.var:
                binding[edge_step.var] = ("edge", eid)
            binding[node_step.var] = ("node", nbr)
            yield from extend(binding, depth + 1)
            binding.pop(node_step.var, None)
            if edge_step.var:
                binding.pop(edge_step.var, None)

    for handle in starts:
        yield from extend({first.var: ("node", handle)}, 0)


def _sort_key(cell):
    if isinstance(cell, list):
        return "|".join(str(v) for v in cell)
    return str(cell)


def run_pattern_query(graph, spec: QuerySpec) -> ResultTable:
    columns = [proj.alias for proj in spec.projections]
    rows = []
    for binding in _enumerate_bindings(graph, spec):
        if not _eval_expr(graph, binding, spec.where):
            continue
        rows.append([_project(graph, binding, proj) for proj in spec.projections])
    if spec.order_by is not None:
        try:
            col = columns.index(spec.order_by)
        except ValueError:
            col = None
        if col is not None:
            rows.sort(key=lambda r: _sort_key(r[col]))
    if spec.limit is not None:
        rows = rows[: spec.limit]
    return ResultTable(columns, rows)


def shared_citation_triples(graph, labels) -> ResultTable:
    """2-hop bindings A->B->C whose edges share at least one PubMedID.

    The intersection keeps the first edge's PubMedID order.
    """
    label_a, label_b, label_c = labels
    columns = [label_a, label_b, label_c, "common_pmids"]
    rows = []
    for a in sorted(graph.nodes_with_label(label_a)):
        for e1, b in graph.neighbors(a, "out"):
            if label_b not in graph.node(b).labels:
                continue
            pmids1 = graph.edge(e1).properties.get("PubMedID", [])
            if not pmids1:
                continue
            for e2, c in graph.neighbors(b, "out"):
                if label_c not in graph.node(c).labels:
                    continue
                pmids2 = set(graph.edge(e2).properties.get("PubMedID", []))
                common = [p for p in pmids1 if p in pmids2]
                if common:
                    rows.append(
                        [graph.node(a).uri, graph.node(b).uri, graph.node(c).uri, common]
                    )
    return ResultTable(columns, rows)

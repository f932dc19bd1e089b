from .evaluate import (
    ResultTable,
    run_pattern_query,
    shared_citation_triples,
    symbol_fraction,
    u_fraction,
)
from .parser import QuerySpec, parse_filter, parse_query
from .views import ViewSpec, export_edges_csv, export_nodes_csv, extract_view, view_stats

__all__ = [
    "QuerySpec",
    "ResultTable",
    "ViewSpec",
    "export_edges_csv",
    "export_nodes_csv",
    "extract_view",
    "parse_filter",
    "parse_query",
    "run_pattern_query",
    "shared_citation_triples",
    "symbol_fraction",
    "u_fraction",
    "view_stats",
]

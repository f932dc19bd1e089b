"""Knowledge-graph engineering toolkit: list-valued property graph,
TSV ingestion, pattern queries and views, content-aware pruning,
link-prediction harness, HTTP API, and CLI."""

from .graph import Edge, Node, PropertyGraph

__version__ = "0.1.0"

__all__ = ["Edge", "Node", "PropertyGraph", "__version__"]

"""Configuration records for the representation-learning harness."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class EmbeddingConfig:
    method: str = "node2vec"       # node2vec | line | transe
    dimensions: int = 64
    epochs: int = 5
    learning_rate: float = 0.025
    walks_per_node: int = 10
    walk_length: int = 30
    window: int = 5
    negatives: int = 5
    p: float = 1.0                 # node2vec return parameter
    q: float = 1.0                 # node2vec in-out parameter
    order: int = 2                 # LINE proximity order
    margin: float = 1.0            # TransE ranking margin
    norm: str = "L2"               # TransE dissimilarity: L1 | L2
    seed: int = 42

    def __post_init__(self):
        if self.dimensions < 2:
            raise ValueError("dimensions must be >= 2")
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        if self.norm not in ("L1", "L2"):
            raise ValueError("norm must be L1 or L2")


@dataclass
class SplitSpec:
    train_size: float = 0.7
    number_of_holdouts: int = 5
    unbalance_rate: float = 1.0
    scale_free: bool = True

    def __post_init__(self):
        if not 0 < self.train_size < 1:
            raise ValueError("train_size must be in (0, 1)")
        if self.number_of_holdouts < 1:
            raise ValueError("need at least one holdout")


@dataclass
class ForestConfig:
    n_estimators: int = 100
    max_depth: int = 100
    bootstrap: bool = True
    seed: int = 42

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError("need at least one tree")


@dataclass
class TaskSpec:
    task: str                      # Hom | Het | MHom | MHet
    source_label: str
    target_label: str
    predicate: str | None = None
    node_features: object = None   # callable(graph, handle) -> vector, for M* tasks

    def __post_init__(self):
        if self.task not in ("Hom", "Het", "MHom", "MHet"):
            raise ValueError(f"unknown task {self.task!r}")
        if self.task in ("Het", "MHet") and not self.predicate:
            raise ValueError("Het/MHet tasks require a predicate")
        if self.task in ("MHom", "MHet") and self.node_features is None:
            raise ValueError("multimodal tasks require a node feature extractor")

"""Link-prediction evaluation: embeddings + random forest over holdouts.

Edge feature vectors concatenate the two endpoint embeddings; multimodal
tasks append per-node feature vectors. Balanced accuracy is scored on
held-out positives against an equal count of sampled negatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.ensemble import RandomForestClassifier

from ..errors import CategoryNotFound
from .config import EmbeddingConfig, ForestConfig, SplitSpec, TaskSpec
from .line import train_line
from .skipgram import Embedding, train_skipgram
from .splits import (
    graph_from_edges,
    sample_negatives,
    split_connected_monte_carlo,
    time_stratified_split,
)
from .transe import train_transe
from .walks import generate_walks


def balanced_accuracy(tp, fn, tn, fp) -> float:
    return 0.5 * (tp / (tp + fn) + tn / (tn + fp))


def embed_graph(graph, config: EmbeddingConfig) -> Embedding:
    if config.method == "node2vec":
        return train_skipgram(generate_walks(graph, config), config)
    if config.method == "line":
        return train_line(graph, config)
    if config.method == "transe":
        triples = []
        for eid in graph.edge_ids():
            edge = graph.edge(eid)
            triples.append((edge.src, edge.predicate, edge.dst))
        model = train_transe(triples, config)
        return Embedding(model.entity_vectors, model.entity_index, model.epoch_losses)
    raise ValueError(f"unknown embedding method {config.method!r}")


def _pair_matrix(graph, embedding, task: TaskSpec, pairs):
    dim = embedding.vectors.shape[1]
    rows = []
    for u, v in pairs:
        eu = embedding.vector(u) if u in embedding.index else np.zeros(dim)
        ev = embedding.vector(v) if v in embedding.index else np.zeros(dim)
        parts = [eu, ev]
        if task.node_features is not None:
            parts.append(np.asarray(task.node_features(graph, u), dtype=float))
            parts.append(np.asarray(task.node_features(graph, v), dtype=float))
        rows.append(np.concatenate(parts))
    return np.vstack(rows) if rows else np.zeros((0, 2 * dim))


def make_forest(config: ForestConfig) -> RandomForestClassifier:
    return RandomForestClassifier(
        n_estimators=config.n_estimators,
        max_depth=config.max_depth,
        bootstrap=config.bootstrap,
        criterion="gini",
        random_state=config.seed,
        n_jobs=1,
    )


def _category_edges(graph, edge_iter, task: TaskSpec):
    """Split category edges into task positives and other-predicate pairs."""
    positives = []
    other_pred = []
    for src, dst, predicate in edge_iter:
        if task.source_label not in graph.node(src).labels:
            continue
        if task.target_label not in graph.node(dst).labels:
            continue
        if task.task in ("Het", "MHet") and predicate != task.predicate:
            other_pred.append((src, dst))
        else:
            positives.append((src, dst))
    return positives, other_pred


def _edge_tuples(graph):
    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        yield edge.src, edge.dst, edge.predicate


def _negatives_for(graph, task, count, split_spec, seed, exclude=()):
    src_pool = graph.nodes_with_label(task.source_label)
    dst_pool = graph.nodes_with_label(task.target_label)
    raw = sample_negatives(
        graph, count + len(exclude), scale_free=split_spec.scale_free, seed=seed,
        source_pool=src_pool, target_pool=dst_pool,
    )
    banned = {frozenset(p) for p in exclude}
    out = [p for p in raw if frozenset(p) not in banned]
    return out[:count]


@dataclass
class EvalReport:
    model: str
    task: str
    source_label: str
    target_label: str
    predicate: str | None
    holdout_scores: list = field(default_factory=list)

    @property
    def mean(self):
        return float(np.mean(self.holdout_scores))

    @property
    def std(self):
        return float(np.std(self.holdout_scores))


def evaluate(graph, task: TaskSpec, emb_config: EmbeddingConfig,
             forest_config: ForestConfig, split_spec: SplitSpec,
             seed=42, shuffle_labels=False) -> EvalReport:
    """Balanced accuracy over Connected Monte Carlo holdouts.

    shuffle_labels permutes the training labels (null-model control)."""
    all_pos, _ = _category_edges(graph, _edge_tuples(graph), task)
    if not all_pos:
        raise CategoryNotFound(
            f"no {task.source_label}->{task.target_label} edges"
            + (f" with predicate {task.predicate}" if task.predicate else "")
        )
    report = EvalReport(emb_config.method, task.task, task.source_label,
                        task.target_label, task.predicate)
    holdouts = split_connected_monte_carlo(graph, split_spec, seed)
    for i, holdout in enumerate(holdouts):
        train = holdout.train_graph
        embedding = embed_graph(train, EmbeddingConfig(**{
            **emb_config.__dict__, "seed": emb_config.seed + i}))
        train_pos, train_other = _category_edges(graph, _edge_tuples(train), task)
        test_pos, test_other = _category_edges(graph, holdout.test_edges, task)
        if not train_pos or not test_pos:
            continue

        def negatives(count, other_pairs, ns_seed):
            neg = list(other_pairs[:count // 2]) if task.task in ("Het", "MHet") else []
            if len(neg) < count:
                neg += _negatives_for(graph, task, count - len(neg), split_spec,
                                      ns_seed, exclude=neg)
            return neg

        train_neg = negatives(len(train_pos), train_other, (seed, i, 0))
        test_neg = negatives(len(test_pos), test_other, (seed, i, 1))

        x_train = _pair_matrix(graph, embedding, task, train_pos + train_neg)
        y_train = np.array([1] * len(train_pos) + [0] * len(train_neg))
        if shuffle_labels:
            rng = np.random.default_rng((seed, i, 2))
            y_train = rng.permutation(y_train)
        forest = make_forest(ForestConfig(**{
            **forest_config.__dict__, "seed": forest_config.seed + i}))
        forest.fit(x_train, y_train)

        x_test = _pair_matrix(graph, embedding, task, test_pos + test_neg)
        y_test = np.array([1] * len(test_pos) + [0] * len(test_neg))
        pred = forest.predict(x_test)
        tp = int(((pred == 1) & (y_test == 1)).sum())
        fn = int(((pred == 0) & (y_test == 1)).sum())
        tn = int(((pred == 0) & (y_test == 0)).sum())
        fp = int(((pred == 1) & (y_test == 0)).sum())
        report.holdout_scores.append(balanced_accuracy(tp, fn, tn, fp))
    return report


def report_table(reports) -> str:
    """Table-shaped TSV: Model, Edge, Hom, MHom, Het, MHet."""
    cells = {}
    for r in reports:
        edge = f"{r.source_label}-{r.target_label}"
        cells.setdefault((r.model, edge), {})[r.task] = r
    lines = ["Model\tEdge\tHom\tMHom\tHet\tMHet"]
    for (model, edge), by_task in sorted(cells.items()):
        row = [model, edge]
        for t in ("Hom", "MHom", "Het", "MHet"):
            r = by_task.get(t)
            row.append(f"{100 * r.mean:.2f}%" if r else "-")
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


@dataclass
class TrainedLinkModel:
    graph: object
    embedding: Embedding
    forest: RandomForestClassifier
    task: TaskSpec

    def predict_proba(self, pairs):
        x = _pair_matrix(self.graph, self.embedding, self.task, pairs)
        return self.forest.predict_proba(x)[:, 1]


def train_time_model(graph, split, task: TaskSpec, emb_config: EmbeddingConfig,
                     forest_config: ForestConfig, split_spec: SplitSpec,
                     seed=42) -> TrainedLinkModel:
    """Fit embeddings + forest on the pre-cutoff slice of a TimeSplit."""
    train_graph = graph_from_edges(graph, set(split.train_edges))
    embedding = embed_graph(train_graph, emb_config)
    train_pos, _ = _category_edges(graph, _edge_tuples(train_graph), task)
    if not train_pos:
        raise CategoryNotFound("no pre-cutoff edges for the task category")
    train_neg = _negatives_for(graph, task, len(train_pos), split_spec,
                               (seed, 0xA11CE))
    x = _pair_matrix(graph, embedding, task, train_pos + train_neg)
    y = np.array([1] * len(train_pos) + [0] * len(train_neg))
    forest = make_forest(forest_config)
    forest.fit(x, y)
    return TrainedLinkModel(graph, embedding, forest, task)


def score_distribution_by_year(model: TrainedLinkModel, graph, test_edge_ids,
                               edge_years: dict) -> dict:
    """Per-year {median, quartiles, fraction > 0.5} of forest scores."""
    by_year = {}
    for eid in test_edge_ids:
        year = edge_years.get(eid)
        if year is None:
            continue
        edge = graph.edge(eid)
        by_year.setdefault(year, []).append((edge.src, edge.dst))
    out = {}
    for year in sorted(by_year):
        scores = model.predict_proba(by_year[year])
        out[year] = {
            "count": len(scores),
            "median": float(np.median(scores)),
            "q1": float(np.percentile(scores, 25)),
            "q3": float(np.percentile(scores, 75)),
            "fraction_above_half": float((scores > 0.5).mean()),
        }
    return out

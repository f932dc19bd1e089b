from .config import EmbeddingConfig, ForestConfig, SplitSpec, TaskSpec
from .evaluate import (
    EvalReport,
    TrainedLinkModel,
    balanced_accuracy,
    embed_graph,
    evaluate,
    make_forest,
    report_table,
    score_distribution_by_year,
    train_time_model,
)
from .features import kmer_features, text_hash_features
from .line import train_line
from .skipgram import Embedding, skipgram_pair_loss, train_skipgram
from .splits import (
    Holdout,
    TimeSplit,
    graph_from_edges,
    sample_negatives,
    split_connected_monte_carlo,
    time_stratified_split,
)
from .transe import TranseModel, train_transe, transe_triple_loss
from .walks import WalkCorpus, generate_walks

__all__ = [
    "EmbeddingConfig", "ForestConfig", "SplitSpec", "TaskSpec",
    "EvalReport", "TrainedLinkModel", "balanced_accuracy", "embed_graph",
    "evaluate", "make_forest", "report_table", "score_distribution_by_year",
    "train_time_model", "kmer_features", "text_hash_features", "train_line",
    "Embedding", "skipgram_pair_loss", "train_skipgram", "Holdout",
    "TimeSplit", "graph_from_edges", "sample_negatives",
    "split_connected_monte_carlo", "time_stratified_split", "TranseModel",
    "train_transe", "transe_triple_loss", "WalkCorpus", "generate_walks",
]

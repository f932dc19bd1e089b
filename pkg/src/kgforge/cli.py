"""kgforge command line: build, stats, query, view, prune, embed,
linkpred, timesplit, serve.

Exit codes: 0 ok, 1 internal error, 2 input error, 3 domain error.
A config file holds flat `key = value` lines (# comments); flags override.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click
import numpy as np

from . import errors as err
from .api import create_app
from .graph import PropertyGraph
from .ingest import (
    build_graph,
    link_entities,
    load_lookup_tables,
    load_pmid_years,
    load_snapshot,
    map_identifier,
    parse_edges_file,
    parse_nodes_file,
    save_snapshot,
)
from .linkpred import (
    EmbeddingConfig,
    ForestConfig,
    SplitSpec,
    TaskSpec,
    embed_graph,
    evaluate,
    kmer_features,
    report_table,
    score_distribution_by_year,
    text_hash_features,
    time_stratified_split,
    train_time_model,
)
from .pruning import collapse_groups, find_isomorphic_groups
from .query import (
    export_edges_csv,
    export_nodes_csv,
    extract_view,
    parse_query,
    run_pattern_query,
)
from .query.views import ViewSpec

INPUT_ERRORS = (OSError, err.MalformedRow, err.InvalidNode, err.QuerySyntaxError,
                err.UnboundVariable, err.ConflictingYear, err.UnmappedIdentifier)
DOMAIN_ERRORS = (err.CategoryNotFound, err.EmptySelection, err.EmptyTestSet,
                 err.GraphTooSmall, err.ExhaustedSpace, err.MissingClassNode,
                 err.NoEdges, err.KgForgeError)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except INPUT_ERRORS as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(2)
        except DOMAIN_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
    return wrapper


def load_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            values[key.strip().replace("_", "-")] = value.strip()
    return values


@click.group()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="Flat key=value config file; flags override its values.")
@click.pass_context
def main(ctx, config):
    """Knowledge-graph engineering toolkit."""
    if config:
        values = load_config_file(config)
        ctx.default_map = {cmd: values for cmd in main.commands}


@main.command()
@click.option("--nodes", "nodes_path", required=True, type=click.Path(), help="nodes.tsv input.")
@click.option("--edges", "edges_path", default=None, type=click.Path(), help="edges.tsv input.")
@click.option("--lookup", "lookup_path", default=None, type=click.Path(),
              help="lookup.tsv for identifier mapping of edge endpoints.")
@click.option("--lookup-source", default="default", help="Source name for lookup-table rows.")
@click.option("--class-map", "class_map_path", default=None, type=click.Path(),
              help="TSV curie->ontology curie for subClassOf entity linking.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Snapshot directory.")
@handle_errors
def build(nodes_path, edges_path, lookup_path, lookup_source, class_map_path, out_dir):
    """Parse TSV inputs into a frozen snapshot plus an ingest report."""
    for path in (nodes_path, edges_path, lookup_path, class_map_path):
        if path and not os.path.exists(path):
            raise FileNotFoundError(path)
    nodes = parse_nodes_file(nodes_path)
    raw_edges = parse_edges_file(edges_path) if edges_path else []
    tables = load_lookup_tables(lookup_path) if lookup_path else {}
    curies = {n.curie for n in nodes}
    edges = []
    rejects = []
    for subject, predicate, obj, props in raw_edges:
        try:
            s = subject if subject in curies else map_identifier(subject, lookup_source, tables)
            o = obj if obj in curies else map_identifier(obj, lookup_source, tables)
        except err.UnmappedIdentifier as exc:
            rejects.append(str(exc))
            continue
        if s not in curies or o not in curies:
            rejects.append(f"endpoint not in node set: {subject} -> {obj}")
            continue
        edges.append((s, predicate, o, props))
    graph = build_graph(nodes, edges)
    if class_map_path:
        class_map = {}
        with open(class_map_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    curie, class_curie = line.rstrip("\n").split("\t")
                    class_map[curie] = class_curie
        link_entities(graph, class_map)
    graph.freeze()
    manifest = save_snapshot(graph, out_dir)
    report = {"manifest": manifest, "rejected_edges": rejects}
    click.echo(json.dumps(report, indent=2))


@main.command()
@click.option("--snapshot", required=True, type=click.Path(), help="Snapshot directory.")
@handle_errors
def stats(snapshot):
    """Print node/edge/label/predicate counts and the degree histogram."""
    graph = load_snapshot(snapshot)
    click.echo(json.dumps(graph.stats(), indent=2))


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--query", "query_text", required=True, help="Pattern query text.")
@handle_errors
def query(snapshot, query_text):
    """Run a pattern query and print rows as JSON."""
    graph = load_snapshot(snapshot)
    table = run_pattern_query(graph, parse_query(query_text))
    click.echo(json.dumps({"columns": table.columns, "rows": table.rows}, indent=2))


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--labels", default="", help="Comma-separated node labels (empty = all).")
@click.option("--predicates", default="", help="Comma-separated edge predicates (empty = all).")
@click.option("--filter", "property_filter", default=None,
              help="Property filter over s (source), r (edge), t (target).")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Directory receiving nodes.csv and edges.csv.")
@handle_errors
def view(snapshot, labels, predicates, property_filter, out_dir):
    """Extract a view and export it as CSV."""
    graph = load_snapshot(snapshot)
    spec = ViewSpec(
        labels={l for l in labels.split(",") if l},
        predicates={p for p in predicates.split(",") if p},
        property_filter=property_filter,
    )
    result = extract_view(graph, spec)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "nodes.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(export_nodes_csv(result))
    with open(os.path.join(out_dir, "edges.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(export_edges_csv(result))
    click.echo(json.dumps(result.stats(), indent=2))


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--policy", type=click.Choice(["all", "above_median", "above_threshold"]),
              default="all", show_default=True)
@click.option("--threshold", type=float, default=None,
              help="Percent-identity threshold for above_threshold.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Directory for the pruned snapshot.")
@click.option("--report", "report_path", default=None, type=click.Path(),
              help="Write the prune report JSON here.")
@handle_errors
def prune(snapshot, policy, threshold, out_dir, report_path):
    """Collapse isomorphic node groups under the chosen policy."""
    if policy == "above_threshold" and threshold is None:
        raise click.UsageError("--threshold is required with --policy above_threshold")
    graph = load_snapshot(snapshot)
    groups = find_isomorphic_groups(graph)
    pruned, report = collapse_groups(graph, groups, policy, threshold)
    save_snapshot(pruned, out_dir)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    click.echo(report.to_table())
    click.echo(report.to_json())


def _emb_options(fn):
    options = [
        click.option("--method", type=click.Choice(["node2vec", "line", "transe"]),
                     default="node2vec", show_default=True),
        click.option("--dimensions", type=int, default=64, show_default=True),
        click.option("--epochs", type=int, default=5, show_default=True),
        click.option("--walks-per-node", type=int, default=10, show_default=True),
        click.option("--walk-length", type=int, default=30, show_default=True),
        click.option("--window", type=int, default=5, show_default=True),
        click.option("--negatives", type=int, default=5, show_default=True),
        click.option("--p", type=float, default=1.0, show_default=True),
        click.option("--q", type=float, default=1.0, show_default=True),
        click.option("--margin", type=float, default=1.0, show_default=True),
        click.option("--norm", type=click.Choice(["L1", "L2"]), default="L2", show_default=True),
        click.option("--learning-rate", type=float, default=0.025, show_default=True),
        click.option("--seed", type=int, default=42, show_default=True),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _make_emb_config(kwargs):
    keys = ("method", "dimensions", "epochs", "walks_per_node", "walk_length", "window",
            "negatives", "p", "q", "margin", "norm", "learning_rate", "seed")
    return EmbeddingConfig(**{k: kwargs.pop(k) for k in keys})


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Embeddings TSV: curie followed by vector components.")
@_emb_options
@handle_errors
def embed(snapshot, out_path, **kwargs):
    """Train node embeddings and export them as TSV."""
    graph = load_snapshot(snapshot)
    config = _make_emb_config(kwargs)
    embedding = embed_graph(graph, config)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(embedding.export_tsv(graph))
    click.echo(f"wrote {len(embedding.index)} vectors to {out_path}")


def default_node_features(graph, handle):
    """kmer (Sequence) + hashed text (Description) multimodal features."""
    node = graph.node(handle)
    seqs = node.properties.get("Sequence", [])
    try:
        seq_vec = kmer_features(seqs[0], 2) if seqs else np.zeros(16)
    except err.SequenceTooShort:
        seq_vec = np.zeros(16)
    text = " ".join(node.properties.get("Description", []))
    return np.concatenate([seq_vec, text_hash_features(text, 32)])


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--task", type=click.Choice(["Hom", "MHom", "Het", "MHet"]), default="Hom",
              show_default=True)
@click.option("--source-label", required=True)
@click.option("--target-label", required=True)
@click.option("--predicate", default=None, help="Edge type (Het/MHet).")
@click.option("--train-size", type=float, default=0.7, show_default=True)
@click.option("--holdouts", type=int, default=5, show_default=True)
@click.option("--scale-free/--no-scale-free", default=True, show_default=True)
@click.option("--trees", type=int, default=100, show_default=True)
@click.option("--max-depth", type=int, default=100, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Report TSV path.")
@_emb_options
@handle_errors
def linkpred(snapshot, task, source_label, target_label, predicate, train_size,
             holdouts, scale_free, trees, max_depth, out_path, **kwargs):
    """Evaluate link prediction for one edge category."""
    graph = load_snapshot(snapshot)
    emb_config = _make_emb_config(kwargs)
    features = default_node_features if task in ("MHom", "MHet") else None
    spec = TaskSpec(task, source_label, target_label, predicate, features)
    split = SplitSpec(train_size=train_size, number_of_holdouts=holdouts, scale_free=scale_free)
    forest = ForestConfig(n_estimators=trees, max_depth=max_depth, seed=emb_config.seed)
    report = evaluate(graph, spec, emb_config, forest, split, seed=emb_config.seed)
    table = report_table([report])
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(table)
    click.echo(table)
    click.echo(f"mean balanced accuracy: {report.mean:.4f} +/- {report.std:.4f}")


@main.command()
@click.option("--snapshot", required=True, type=click.Path())
@click.option("--pmid-years", "pmid_years_path", required=True, type=click.Path(),
              help="pmid_years.tsv mapping PubMed ids to years.")
@click.option("--cutoff", type=int, required=True, help="Test = edges with year >= cutoff.")
@click.option("--source-label", required=True)
@click.option("--target-label", required=True)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Report JSON path.")
@_emb_options
@handle_errors
def timesplit(snapshot, pmid_years_path, cutoff, source_label, target_label, out_path, **kwargs):
    """Time-stratified link prediction report with per-year score stats."""
    graph = load_snapshot(snapshot)
    years = load_pmid_years(pmid_years_path)
    emb_config = _make_emb_config(kwargs)
    split = time_stratified_split(graph, years, cutoff)
    task = TaskSpec("Hom", source_label, target_label)
    model = train_time_model(graph, split, task, emb_config, ForestConfig(seed=emb_config.seed),
                             SplitSpec(), seed=emb_config.seed)
    stats_by_year = score_distribution_by_year(model, graph, split.test_edges, split.edge_years)
    report = {
        "cutoff": cutoff,
        "train_edges": len(split.train_edges),
        "test_edges": len(split.test_edges),
        "excluded_edges": len(split.excluded),
        "per_year": {str(y): s for y, s in stats_by_year.items()},
    }
    text = json.dumps(report, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text)


@main.command()
@click.option("--snapshot", envvar="KGFORGE_SNAPSHOT", show_envvar=True,
              required=True, type=click.Path())
@click.option("--addr", envvar="KGFORGE_ADDR", show_envvar=True,
              default="127.0.0.1:8000", show_default=True,
              help="host:port to listen on.")
@click.option("--static", "static_dir", default=None, type=click.Path(),
              help="Static bundle served under /app.")
@handle_errors
def serve(snapshot, addr, static_dir):
    """Serve the HTTP API over a snapshot."""
    import uvicorn

    graph = load_snapshot(snapshot)
    app = create_app(graph, static_dir=static_dir)
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


if __name__ == "__main__":
    main()

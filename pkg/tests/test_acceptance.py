"""Acceptance gate: one test per release criterion.

Each test prints a single CRITERION line naming the check and its result,
so `pytest -v -s tests/test_acceptance.py` reads as a checklist.
"""

import io
import random
import time
import zipfile

import numpy as np
import pytest
from fastapi.testclient import TestClient

from kgforge.api import create_app
from kgforge.graph import Node, PropertyGraph
from kgforge.ingest import (
    build_graph,
    content_hash,
    parse_edges_file,
    parse_nodes_file,
    serialize_edges,
    serialize_nodes,
)
from kgforge.linkpred import (
    EmbeddingConfig,
    ForestConfig,
    SplitSpec,
    TaskSpec,
    balanced_accuracy,
    evaluate,
    skipgram_pair_loss,
    time_stratified_split,
    train_time_model,
    transe_triple_loss,
)
from kgforge.pruning import (
    collapse_groups,
    find_isomorphic_groups,
    needleman_wunsch,
    score_group,
    score_histogram,
)
from kgforge.query import parse_query, run_pattern_query, u_fraction

from conftest import MIRNA_CURIE
from test_linkpred import finite_difference, rel_err
from test_pruning import exhaustive_alignment_score, pairwise_groups, random_graph
from test_query import brute_force, random_query, random_query_graph

BASES = "ACGU"


def report(name, passed):
    print(f"CRITERION {name}: {'PASS' if passed else 'FAIL'}")
    assert passed


class TestAcceptance:
    def test_01_alignment_oracle(self):
        rng = random.Random(101)
        start = time.monotonic()
        ok = True
        for _ in range(10_000):
            a = "".join(rng.choice(BASES) for _ in range(rng.randint(0, 6)))
            b = "".join(rng.choice(BASES) for _ in range(rng.randint(0, 6)))
            if not a and not b:
                continue
            if needleman_wunsch(a, b)["score"] != \
                    exhaustive_alignment_score(a, b):
                ok = False
                break
        elapsed = time.monotonic() - start
        report("alignment-oracle", ok and elapsed < 10)

    def test_02_isomorphic_group_oracle(self):
        rng = random.Random(202)
        start = time.monotonic()
        ok = True
        for _ in range(50):
            g = random_graph(rng, rng.randint(10, 200), rng.randint(5, 400))
            got = sorted(tuple(sorted(grp.members))
                         for grp in find_isomorphic_groups(g))
            if got != sorted(pairwise_groups(g)):
                ok = False
                break
        elapsed = time.monotonic() - start
        report("isomorphic-group-oracle", ok and elapsed < 30)

    def test_03_pruning_arithmetic(self):
        rng = random.Random(303)
        ok = True
        for trial in range(20):
            g = PropertyGraph()
            planted = 0
            for block in range(rng.randint(1, 6)):
                hub = g.add_node(Node(f"Hub:{trial}_{block}", "u",
                                      {f"H{block}"}))
                size = rng.randint(2, 5)
                planted += size - 1
                for i in range(size):
                    seq = "".join(rng.choice(BASES) for _ in range(8))
                    h = g.add_node(Node(f"T:{trial}_{block}_{i}", "u",
                                        {f"T{block}"}, {"Sequence": [seq]}))
                    g.add_edge(h, hub, "p")
            g.freeze()
            groups = find_isomorphic_groups(g)
            scored = [score_group(g, grp) for grp in groups]
            hist = score_histogram(scored)
            if sum(hist["bins"].values()) != hist["scored"]:
                ok = False
                break
            pruned, rep = collapse_groups(g, groups, policy="all")
            if rep.nodes_after != rep.nodes_before - planted:
                ok = False
                break
            if pruned.node_count != rep.nodes_after:
                ok = False
                break
        report("pruning-arithmetic", ok)

    def test_04_query_scan_equivalence(self):
        rng = random.Random(404)
        start = time.monotonic()
        ok = True
        for _ in range(100):
            g = random_query_graph(rng, rng.randint(5, 1000))
            spec = parse_query(random_query(rng))
            got = run_pattern_query(g, spec).rows
            if got != brute_force(g, spec):
                ok = False
                break
        elapsed = time.monotonic() - start
        fraction_ok = u_fraction("CUGCAAUGUAAGCACUUCUUAC") == \
            pytest.approx(7 / 22)
        report("query-scan-equivalence",
               ok and fraction_ok and elapsed < 60)

    def test_05_balanced_accuracy_oracle(self):
        report("balanced-accuracy-oracle",
               balanced_accuracy(tp=8, fn=2, tn=6, fp=4) == 0.7)

    def test_06_gradient_checks(self):
        rng = np.random.default_rng(606)
        ok = True
        for _ in range(50):
            d = int(rng.integers(2, 10))
            center = rng.normal(size=d) * 0.5
            context = rng.normal(size=d) * 0.5
            negatives = rng.normal(size=(int(rng.integers(1, 6)), d)) * 0.5

            def f_sg():
                return skipgram_pair_loss(center, context, negatives)[0]

            _, gc, go, gn = skipgram_pair_loss(center, context, negatives)
            if rel_err(gc, finite_difference(f_sg, center)) > 1e-4 or \
                    rel_err(go, finite_difference(f_sg, context)) > 1e-4 or \
                    rel_err(gn, finite_difference(f_sg, negatives)) > 1e-4:
                ok = False
                break
        for i in range(50):
            d = int(rng.integers(2, 10))
            h, r, t, hc, tc = (rng.normal(size=d) for _ in range(5))
            norm = "L1" if i % 2 else "L2"
            margin = float(rng.uniform(0.5, 2.0))

            def f_te():
                return transe_triple_loss(h, r, t, hc, tc, margin, norm)[0]

            loss, *grads = transe_triple_loss(h, r, t, hc, tc, margin, norm)
            if loss == 0.0:
                continue
            for analytic, x in zip(grads, (h, r, t, hc, tc)):
                if rel_err(analytic, finite_difference(f_te, x)) > 1e-4:
                    ok = False
        report("gradient-checks", ok)

    @staticmethod
    def planted_bipartite(n_each=1000, seed=0, band=4, p=0.8,
                          year_of=None):
        """Two-block bipartite graph with a banded pattern inside each
        block, so held-out edges stay predictable from neighborhoods."""
        rng = random.Random(seed)
        g = PropertyGraph()
        mirna = [g.add_node(Node(f"RNAcentral:URS{i:08X}_9606", "u",
                                 {"miRNA"})) for i in range(n_each)]
        genes = [g.add_node(Node(f"Entrez:{i + 1}", "u", {"Gene"}))
                 for i in range(n_each)]
        half = n_each // 2
        years = {}
        pmid = 0
        for i in range(n_each):
            base = 0 if i < half else half
            pos = i - base
            for dj in range(-band, band + 1):
                j = base + (pos + dj) % half
                if rng.random() < p:
                    props = {}
                    if year_of is not None:
                        pmid += 1
                        props = {"PubMedID": [f"p{pmid}"]}
                        years[f"p{pmid}"] = year_of(rng)
                    g.add_edge(mirna[i], genes[j], "regulates_activity_of",
                               props)
        g.freeze()
        return (g, years) if year_of is not None else g

    def test_07_link_prediction_benchmark(self):
        start = time.monotonic()
        g = self.planted_bipartite()
        emb = EmbeddingConfig(dimensions=32, epochs=3, learning_rate=0.1,
                              walks_per_node=5, walk_length=15, window=3,
                              seed=7)
        forest = ForestConfig(n_estimators=50)
        spec = SplitSpec(number_of_holdouts=5)
        task = TaskSpec("Hom", "miRNA", "Gene")
        trained = evaluate(g, task, emb, forest, spec, seed=7)
        control = evaluate(g, task, emb, forest,
                           SplitSpec(number_of_holdouts=2), seed=8,
                           shuffle_labels=True)
        elapsed = time.monotonic() - start
        print(f"  mean balanced accuracy {trained.mean:.3f} over "
              f"{len(trained.holdout_scores)} holdouts; "
              f"shuffled control {control.mean:.3f}; {elapsed:.0f}s")
        report("link-prediction-benchmark",
               trained.mean >= 0.75
               and abs(control.mean - 0.5) <= 0.05
               and len(trained.holdout_scores) == 5
               and elapsed < 300)

    def test_08_time_stratified_protocol(self):
        start = time.monotonic()
        # same banded planted structure, with discovery years spread over
        # time: post-cutoff edges follow the geometry learned pre-cutoff
        g, years = self.planted_bipartite(
            n_each=400, seed=88, band=6,
            year_of=lambda rng: rng.choice(
                [2005, 2008, 2011, 2014, 2017, 2020]))
        split = time_stratified_split(g, years, cutoff=2017)
        disjoint = not set(split.train_edges) & set(split.test_edges)
        years_ok = all(split.edge_years[e] >= 2017 for e in split.test_edges)
        emb = EmbeddingConfig(dimensions=32, epochs=4, learning_rate=0.1,
                              walks_per_node=6, walk_length=15, window=3,
                              seed=8)
        model = train_time_model(g, split, TaskSpec("Hom", "miRNA", "Gene"),
                                 emb, ForestConfig(n_estimators=50),
                                 SplitSpec(), seed=8)
        pairs = [(g.edge(e).src, g.edge(e).dst) for e in split.test_edges]
        scores = model.predict_proba(pairs)
        frac = float(np.mean(np.asarray(scores) > 0.5))
        elapsed = time.monotonic() - start
        print(f"  disjoint={disjoint} years_ok={years_ok} "
              f"fraction>0.5={frac:.2f}; {elapsed:.0f}s")
        report("time-stratified-protocol",
               disjoint and years_ok and frac >= 0.70 and elapsed < 120)

    def test_09_api_schema_conformance(self, fixture_graph):
        client = TestClient(create_app(fixture_graph))
        scheme, local = MIRNA_CURIE.split(":", 1)
        ok = True

        node = client.get("/api/v1/node/id",
                          params={"node_id": local,
                                  "node_id_scheme": scheme}).json()
        ok &= set(node) == {"node_uri", "node_id", "node_labels",
                            "node_properties"}
        ok &= isinstance(node["node_uri"], str)
        ok &= isinstance(node["node_labels"], list)
        ok &= isinstance(node["node_properties"], dict)

        rels = client.get("/api/v1/relationships/id",
                          params={"node_id": local,
                                  "node_id_scheme": scheme}).json()
        for entry in rels["relationships"]:
            ok &= set(entry) == {"relationship_type",
                                 "relationship_properties", "node_uri",
                                 "node_id", "node_labels", "node_properties"}
            ok &= isinstance(entry["relationship_type"], str)
            ok &= all(isinstance(v, list)
                      for v in entry["relationship_properties"].values())

        meta = client.get("/api/v1/rel_metadata",
                          params={"rel_type": "regulates_activity_of"}).json()
        ok &= set(meta) == {"relationship_type", "properties", "total_count"}
        ok &= isinstance(meta["total_count"], int)

        q = client.post("/api/v1/query", json={
            "query": 'MATCH (n:miRNA)-[r:regulates_activity_of]->(m:Gene) '
                     'WHERE "western blotting" IN r.Method '
                     'RETURN n.URI, m.URI'})
        ok &= q.status_code == 200 and len(q.json()["results"]) == 1

        # round-trip byte stability of a downloaded view
        body = {"labels": [], "predicates": ["regulates_activity_of"]}
        first = client.post("/api/v1/views", json=body).content
        second = client.post("/api/v1/views", json=body).content
        archive_a = zipfile.ZipFile(io.BytesIO(first))
        archive_b = zipfile.ZipFile(io.BytesIO(second))
        for name in ("nodes.csv", "edges.csv"):
            ok &= archive_a.read(name) == archive_b.read(name)
        report("api-schema-conformance", bool(ok))

    def test_10_ingest_round_trip(self, tmp_path):
        rng = random.Random(1010)
        g = PropertyGraph()
        handles = []
        for i in range(10_000):
            label = rng.choice(["miRNA", "Gene", "Disease", "Phenotype"])
            props = {"Label": [f"entity {i}"]}
            if label == "miRNA":
                props["Sequence"] = ["".join(rng.choice(BASES)
                                             for _ in range(12))]
            handles.append(g.add_node(Node(f"Entrez:{i + 1}", f"http://x/{i}",
                                           {label}, props)))
        for _ in range(30_000):
            a, b = rng.sample(handles, 2)
            g.add_edge(a, b, rng.choice(["p", "q"]),
                       {"PubMedID": [str(rng.randint(1, 99))]})
        g.freeze()

        nodes_tsv = serialize_nodes(g)
        edges_tsv = serialize_edges(g)
        (tmp_path / "nodes.tsv").write_text(nodes_tsv)
        (tmp_path / "edges.tsv").write_text(edges_tsv)
        rebuilt = build_graph(
            parse_nodes_file(str(tmp_path / "nodes.tsv")),
            parse_edges_file(str(tmp_path / "edges.tsv")))
        rebuilt.freeze()
        same_stats = rebuilt.stats() == g.stats()
        same_hash = content_hash(rebuilt) == content_hash(g)
        report("ingest-round-trip", same_stats and same_hash)

import json
import os

import pytest
from click.testing import CliRunner

from kgforge.cli import main
from kgforge.ingest import save_snapshot

from conftest import build_fixture_graph

NODES_TSV = """id\turi\tcategory\tLabel\tSequence
RNAcentral:URS00005F5B9E_9606\thttps://rnacentral.org/rna/URS00005F5B9E_9606\tRNA|miRNA\thsa-miR-106a-3p\tCUGCAAUGUAAGCACUUCUUAC
Entrez:1954\thttps://www.ncbi.nlm.nih.gov/gene/1954\tGene\tMAPK8IP3\t
MONDO:0020683\thttp://purl.obolibrary.org/obo/MONDO_0020683\tDisease\tacute disease\t
"""

EDGES_TSV = """subject\tpredicate\tobject\tMethod\tPubMedID
RNAcentral:URS00005F5B9E_9606\tregulates_activity_of\tEntrez:1954\twestern blotting\t25531890
Entrez:1954\tcauses_or_contributes_to_condition\tMONDO:0020683\t\t25531890
"""


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def inputs(tmp_path):
    nodes = tmp_path / "nodes.tsv"
    edges = tmp_path / "edges.tsv"
    nodes.write_text(NODES_TSV)
    edges.write_text(EDGES_TSV)
    return str(nodes), str(edges), str(tmp_path / "snap")


@pytest.fixture()
def snapshot_dir(tmp_path):
    graph = build_fixture_graph()
    out = tmp_path / "snapshot"
    save_snapshot(graph, str(out))
    return str(out)


class TestBuild:
    def test_build_round_trip(self, runner, inputs):
        nodes, edges, out = inputs
        result = runner.invoke(main, ["build", "--nodes", nodes,
                                      "--edges", edges, "--out", out])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["manifest"]["node_count"] == 3
        assert report["manifest"]["edge_count"] == 2
        assert report["rejected_edges"] == []
        assert os.path.exists(os.path.join(out, "manifest.json"))

        stats = runner.invoke(main, ["stats", "--snapshot", out])
        assert stats.exit_code == 0
        body = json.loads(stats.output)
        assert body["node_count"] == 3
        assert body["labels"]["miRNA"] == 1

    def test_unmapped_edges_rejected_not_fatal(self, runner, inputs,
                                               tmp_path):
        nodes, _, out = inputs
        bad_edges = tmp_path / "bad_edges.tsv"
        bad_edges.write_text(
            "subject\tpredicate\tobject\n"
            "not_an_id\tregulates_activity_of\tEntrez:1954\n")
        result = runner.invoke(main, ["build", "--nodes", nodes,
                                      "--edges", str(bad_edges),
                                      "--out", out])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["manifest"]["edge_count"] == 0
        assert len(report["rejected_edges"]) == 1

    def test_missing_input_exit_2(self, runner, tmp_path):
        result = runner.invoke(main, ["build", "--nodes",
                                      str(tmp_path / "absent.tsv"),
                                      "--out", str(tmp_path / "snap")])
        assert result.exit_code == 2

    def test_malformed_input_exit_2(self, runner, tmp_path):
        nodes = tmp_path / "nodes.tsv"
        nodes.write_text("id\turi\tcategory\nonly\ttwo\n")
        result = runner.invoke(main, ["build", "--nodes", str(nodes),
                                      "--out", str(tmp_path / "snap")])
        assert result.exit_code == 2


class TestQuery:
    def test_query_rows(self, runner, snapshot_dir):
        result = runner.invoke(main, [
            "query", "--snapshot", snapshot_dir, "--query",
            'MATCH (n:miRNA)-[r:regulates_activity_of]->(m:Gene) '
            'WHERE "western blotting" IN r.Method RETURN n.URI, m.URI'])
        assert result.exit_code == 0, result.output
        body = json.loads(result.output)
        assert body["columns"] == ["n.URI", "m.URI"]
        assert len(body["rows"]) == 1

    def test_syntax_error_exit_2(self, runner, snapshot_dir):
        result = runner.invoke(main, ["query", "--snapshot", snapshot_dir,
                                      "--query", "MATCH (n:miRNA"])
        assert result.exit_code == 2


class TestView:
    def test_view_export(self, runner, snapshot_dir, tmp_path):
        out = tmp_path / "view"
        result = runner.invoke(main, ["view", "--snapshot", snapshot_dir,
                                      "--labels", "miRNA,Gene",
                                      "--predicates",
                                      "regulates_activity_of",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        nodes_csv = (out / "nodes.csv").read_text()
        edges_csv = (out / "edges.csv").read_text()
        assert nodes_csv.startswith("id,uri,category")
        assert edges_csv.startswith("subject,predicate,object")

    def test_empty_selection_exit_3(self, runner, snapshot_dir, tmp_path):
        result = runner.invoke(main, ["view", "--snapshot", snapshot_dir,
                                      "--out", str(tmp_path / "v")])
        assert result.exit_code == 3


class TestPrune:
    def test_prune_writes_snapshot_and_report(self, runner, snapshot_dir,
                                              tmp_path):
        out = tmp_path / "pruned"
        report_path = tmp_path / "report.json"
        result = runner.invoke(main, ["prune", "--snapshot", snapshot_dir,
                                      "--policy", "all", "--out", str(out),
                                      "--report", str(report_path)])
        assert result.exit_code == 0, result.output
        assert "Alignment score (%)" in result.output
        report = json.loads(report_path.read_text())
        assert report["nodes_before"] - report["nodes_after"] == sum(
            0 for _ in ())  # fixture has no isomorphic twins
        assert os.path.exists(os.path.join(out, "manifest.json"))

    def test_threshold_requires_value(self, runner, snapshot_dir, tmp_path):
        result = runner.invoke(main, ["prune", "--snapshot", snapshot_dir,
                                      "--policy", "above_threshold",
                                      "--out", str(tmp_path / "p")])
        assert result.exit_code == 2


class TestEmbed:
    def test_embed_writes_tsv(self, runner, snapshot_dir, tmp_path):
        out = tmp_path / "vectors.tsv"
        result = runner.invoke(main, ["embed", "--snapshot", snapshot_dir,
                                      "--out", str(out),
                                      "--dimensions", "8", "--epochs", "1",
                                      "--walks-per-node", "2",
                                      "--walk-length", "5"])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert len(lines) == 6
        assert len(lines[0].split("\t")) == 9


class TestConfigFile:
    def test_defaults_from_config(self, runner, snapshot_dir, tmp_path):
        cfg = tmp_path / "kgforge.conf"
        cfg.write_text("# defaults\nsnapshot = {}\n".format(snapshot_dir))
        result = runner.invoke(main, ["--config", str(cfg), "stats"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["node_count"] == 6

    def test_cli_overrides_config(self, runner, snapshot_dir, tmp_path):
        cfg = tmp_path / "kgforge.conf"
        cfg.write_text("snapshot = /nowhere\n")
        result = runner.invoke(main, ["--config", str(cfg), "stats",
                                      "--snapshot", snapshot_dir])
        assert result.exit_code == 0, result.output


class TestHelp:
    def test_commands_listed(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for cmd in ["build", "stats", "query", "view", "prune", "embed",
                    "linkpred", "timesplit", "serve"]:
            assert cmd in result.output

    def test_serve_documents_env_fallbacks(self, runner):
        result = runner.invoke(main, ["serve", "--help"])
        assert "KGFORGE_SNAPSHOT" in result.output
        assert "KGFORGE_ADDR" in result.output

import io
import zipfile

import pytest
from fastapi.testclient import TestClient

from kgforge.api import create_app
from kgforge.query import export_edges_csv, export_nodes_csv, extract_view
from kgforge.query.views import ViewSpec

from conftest import MIRNA_CURIE, MIRNA_SEQUENCE, build_fixture_graph


@pytest.fixture()
def client(fixture_graph):
    return TestClient(create_app(fixture_graph))


NODE_RESPONSE_FIELDS = {"node_uri", "node_id", "node_labels",
                        "node_properties"}


class TestNodeEndpoint:
    def test_reference_node_shape(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        r = client.get("/api/v1/node/id",
                       params={"node_id": local, "node_id_scheme": scheme})
        assert r.status_code == 200
        body = r.json()
        assert set(body) == NODE_RESPONSE_FIELDS
        assert body["node_id"] == MIRNA_CURIE
        assert "miRNA" in body["node_labels"]
        assert body["node_labels"] == sorted(body["node_labels"])
        props = body["node_properties"]
        # single-valued scalar-typed properties render as strings
        assert props["Label"] == "hsa-miR-106a-3p"
        assert props["Sequence"] == MIRNA_SEQUENCE
        assert isinstance(props["Species"], str)
        # everything else stays an array
        assert isinstance(props["Synonym"], list)

    def test_missing_params(self, client):
        assert client.get("/api/v1/node/id").status_code == 400

    def test_unknown_scheme(self, client):
        r = client.get("/api/v1/node/id",
                       params={"node_id": "1", "node_id_scheme": "NotAScheme"})
        assert r.status_code == 400

    def test_unknown_node(self, client):
        r = client.get("/api/v1/node/id",
                       params={"node_id": "999999999",
                               "node_id_scheme": "Entrez"})
        assert r.status_code == 404


class TestRelationshipsEndpoint:
    def test_shape_and_direction(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        r = client.get("/api/v1/relationships/id",
                       params={"node_id": local, "node_id_scheme": scheme,
                               "direction": "out"})
        assert r.status_code == 200
        rels = r.json()["relationships"]
        assert len(rels) == 1
        entry = rels[0]
        assert set(entry) == NODE_RESPONSE_FIELDS | {
            "relationship_type", "relationship_properties"}
        assert entry["relationship_type"] == "regulates_activity_of"
        # relationship properties are always arrays
        assert entry["relationship_properties"]["Method"] == \
            ["western blotting"]

    def test_incoming_context_properties(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        r = client.get("/api/v1/relationships/id",
                       params={"node_id": local, "node_id_scheme": scheme,
                               "direction": "in"})
        rels = r.json()["relationships"]
        assert any(e["relationship_properties"].get("Context") ==
                   ["hela cell"] for e in rels)

    def test_both_is_union(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        base = {"node_id": local, "node_id_scheme": scheme}
        n_in = len(client.get("/api/v1/relationships/id",
                              params={**base, "direction": "in"})
                   .json()["relationships"])
        n_out = len(client.get("/api/v1/relationships/id",
                               params={**base, "direction": "out"})
                    .json()["relationships"])
        n_both = len(client.get("/api/v1/relationships/id",
                                params=base).json()["relationships"])
        assert n_both == n_in + n_out

    def test_bad_direction(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        r = client.get("/api/v1/relationships/id",
                       params={"node_id": local, "node_id_scheme": scheme,
                               "direction": "sideways"})
        assert r.status_code == 400

    def test_pagination(self, client):
        scheme, local = MIRNA_CURIE.split(":", 1)
        base = {"node_id": local, "node_id_scheme": scheme}
        page = client.get("/api/v1/relationships/id",
                          params={**base, "limit": 1, "offset": 1}).json()
        assert len(page["relationships"]) == 1


class TestRelMetadataEndpoint:
    def test_shape(self, client):
        r = client.get("/api/v1/rel_metadata",
                       params={"rel_type": "regulates_activity_of"})
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"relationship_type", "properties", "total_count"}
        assert body["total_count"] == 2
        assert "Method" in body["properties"]

    def test_unknown_type(self, client):
        r = client.get("/api/v1/rel_metadata", params={"rel_type": "nope"})
        assert r.status_code == 404


class TestQueryEndpoint:
    def test_query_rows(self, client):
        q = ('MATCH (n:miRNA)-[r:regulates_activity_of]->(m:Gene) '
             'WHERE "western blotting" IN r.Method '
             'RETURN n.URI, m.URI')
        r = client.post("/api/v1/query", json={"query": q})
        assert r.status_code == 200
        rows = r.json()["results"]
        assert len(rows) == 1
        assert set(rows[0]) == {"n.URI", "m.URI"}

    def test_syntax_error_carries_position(self, client):
        r = client.post("/api/v1/query", json={"query": "MATCH (n:miRNA"})
        assert r.status_code == 400
        assert "position" in r.json()

    def test_missing_body(self, client):
        assert client.post("/api/v1/query", json={}).status_code == 400

    def test_row_cap(self, fixture_graph):
        capped = TestClient(create_app(fixture_graph, row_cap=0))
        r = capped.post("/api/v1/query",
                        json={"query": "MATCH (n:miRNA) RETURN n.URI"})
        assert r.status_code == 413


class TestSchemaAndSearch:
    def test_schema(self, client, fixture_graph):
        body = client.get("/api/v1/schema").json()
        assert body["node_count"] == fixture_graph.node_count
        assert body["edge_count"] == fixture_graph.edge_count
        assert "miRNA" in body["labels"]
        assert "regulates_activity_of" in body["predicates"]

    def test_search_by_label(self, client):
        body = client.get("/api/v1/search",
                          params={"q": "hsa-mir-106a"}).json()
        assert body["total"] == 1
        assert body["results"][0]["node_id"] == MIRNA_CURIE

    def test_search_by_curie_fragment(self, client):
        body = client.get("/api/v1/search", params={"q": "entrez"}).json()
        assert body["total"] == 2


class TestViewsEndpoint:
    def test_zip_matches_direct_export(self, client, fixture_graph):
        body = {"labels": ["miRNA", "Gene"],
                "predicates": ["regulates_activity_of"]}
        r = client.post("/api/v1/views", json=body)
        assert r.status_code == 200
        assert r.headers["content-type"] == "application/zip"
        assert "view.zip" in r.headers["content-disposition"]
        archive = zipfile.ZipFile(io.BytesIO(r.content))
        assert sorted(archive.namelist()) == ["edges.csv", "nodes.csv"]
        view = extract_view(fixture_graph,
                            ViewSpec(labels={"miRNA", "Gene"},
                                     predicates={"regulates_activity_of"}))
        assert archive.read("nodes.csv").decode() == export_nodes_csv(view)
        assert archive.read("edges.csv").decode() == export_edges_csv(view)

    def test_empty_selection(self, client):
        assert client.post("/api/v1/views", json={}).status_code == 400


class TestSnapshotSwap:
    def test_swap_changes_responses(self, fixture_graph):
        app = create_app(fixture_graph)
        client = TestClient(app)
        before = client.get("/api/v1/schema").json()["node_count"]
        replacement = build_fixture_graph()
        extra = replacement.copy()
        from kgforge.graph import Node
        extra.add_node(Node("Entrez:42", "http://example.org/42", {"Gene"}))
        extra.freeze()
        app.state.swap_snapshot(extra)
        after = client.get("/api/v1/schema").json()["node_count"]
        assert after == before + 1

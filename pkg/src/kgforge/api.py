"""HTTP/JSON service over a frozen graph snapshot.

Single-element lists of scalar-typed properties (Label, Sequence,
Description, Species) render as JSON strings; everything else renders as
arrays, matching the portal's response shapes. All routes live under
/api/v1; an optional static bundle is served under /app.
"""

from __future__ import annotations

import io
import zipfile

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .errors import EmptySelection, KgForgeError, QuerySyntaxError, UnboundVariable
from .graph import PropertyGraph
from .ingest import DEFAULT_REGISTRY
from .query import (
    export_edges_csv,
    export_nodes_csv,
    extract_view,
    parse_query,
    run_pattern_query,
)
from .query.views import ViewSpec

SCALAR_PROPS = {"Label", "Sequence", "Description", "Species"}


def render_properties(properties: dict) -> dict:
    out = {}
    for name in sorted(properties):
        values = properties[name]
        if name in SCALAR_PROPS and len(values) == 1:
            out[name] = values[0]
        else:
            out[name] = list(values)
    return out


def node_response(graph: PropertyGraph, handle: int) -> dict:
    node = graph.node(handle)
    return {
        "node_uri": node.uri,
        "node_id": node.curie,
        "node_labels": sorted(node.labels),
        "node_properties": render_properties(node.properties),
    }


def create_app(graph: PropertyGraph, static_dir=None, row_cap=10_000) -> FastAPI:
    app = FastAPI(title="kgforge API", version="1.0")
    state = {"graph": graph}

    def current() -> PropertyGraph:
        return state["graph"]

    app.state.swap_snapshot = lambda g: state.__setitem__("graph", g)

    @app.exception_handler(KgForgeError)
    async def domain_error(_request: Request, exc: KgForgeError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/api/v1/query")
    async def query(body: dict):
        text = body.get("query")
        if not isinstance(text, str):
            return JSONResponse(status_code=400, content={"error": "body must carry a query string"})
        try:
            spec = parse_query(text)
        except QuerySyntaxError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": str(exc), "position": exc.position},
            )
        except UnboundVariable as exc:
            return JSONResponse(status_code=400, content={"error": f"unbound variable: {exc}"})
        table = run_pattern_query(current(), spec)
        if len(table.rows) > row_cap:
            return JSONResponse(
                status_code=413,
                content={"error": f"result exceeds the {row_cap}-row cap"},
            )
        return {"results": table.to_dicts()}

    def resolve(node_id: str, node_id_scheme: str):
        if node_id is None or node_id_scheme is None:
            return None, JSONResponse(
                status_code=400,
                content={"error": "node_id and node_id_scheme are required"},
            )
        if node_id_scheme not in {s.prefix for s in DEFAULT_REGISTRY.schemes}:
            return None, JSONResponse(
                status_code=400, content={"error": f"unknown scheme {node_id_scheme!r}"}
            )
        handle = current().handle_of(f"{node_id_scheme}:{node_id}")
        if handle is None:
            return None, JSONResponse(
                status_code=404,
                content={"error": f"unknown node {node_id_scheme}:{node_id}"},
            )
        return handle, None

    @app.get("/api/v1/node/id")
    async def node_by_id(node_id: str = Query(None), node_id_scheme: str = Query(None)):
        handle, error = resolve(node_id, node_id_scheme)
        if error:
            return error
        return node_response(current(), handle)

    @app.get("/api/v1/relationships/id")
    async def relationships(
        node_id: str = Query(None),
        node_id_scheme: str = Query(None),
        direction: str = Query("both"),
        limit: int = Query(100),
        offset: int = Query(0),
    ):
        handle, error = resolve(node_id, node_id_scheme)
        if error:
            return error
        if direction not in ("in", "out", "both"):
            return JSONResponse(status_code=400, content={"error": "direction must be in, out, or both"})
        graph = current()
        entries = []
        for eid, neighbor in graph.neighbors(handle, direction):
            edge = graph.edge(eid)
            entry = {
                "relationship_type": edge.predicate,
                "relationship_properties": {
                    name: list(values) for name, values in sorted(edge.properties.items())
                },
            }
            entry.update(node_response(graph, neighbor))
            entries.append(entry)
        return {"relationships": entries[offset:offset + limit]}

    @app.get("/api/v1/rel_metadata")
    async def rel_metadata(rel_type: str = Query(...)):
        graph = current()
        edge_ids = graph.edges_with_predicate(rel_type)
        if not edge_ids:
            return JSONResponse(
                status_code=404, content={"error": f"unknown relationship type {rel_type!r}"}
            )
        names = set()
        for eid in edge_ids:
            names.update(graph.edge(eid).properties)
        return {
            "relationship_type": rel_type,
            "properties": sorted(names),
            "total_count": len(edge_ids),
        }

    @app.get("/api/v1/schema")
    async def schema():
        stats = current().stats()
        return {
            "node_count": stats["node_count"],
            "edge_count": stats["edge_count"],
            "labels": stats["labels"],
            "predicates": stats["predicates"],
        }

    @app.get("/api/v1/search")
    async def search(q: str = Query(...), limit: int = Query(100), offset: int = Query(0)):
        graph = current()
        needle = q.lower()
        hits = []
        for handle in graph.handles():
            node = graph.node(handle)
            label = node.properties.get("Label", [""])[0]
            if needle in node.curie.lower() or needle in label.lower():
                hits.append(node_response(graph, handle))
        return {"results": hits[offset:offset + limit], "total": len(hits)}

    @app.post("/api/v1/views")
    async def views(body: dict):
        spec = ViewSpec.from_dict(body)
        try:
            view = extract_view(current(), spec)
        except EmptySelection as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as archive:
            archive.writestr("nodes.csv", export_nodes_csv(view))
            archive.writestr("edges.csv", export_edges_csv(view))
        return Response(
            content=buf.getvalue(),
            media_type="application/zip",
            headers={"Content-Disposition": 'attachment; filename="view.zip"'},
        )

    if static_dir:
        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    return app

"""TSV ingestion, identifier mapping, entity linking, and snapshots.

File formats:
  nodes.tsv   header `id<TAB>uri<TAB>category<TAB>...property columns`,
              list values `|`-separated, empty cell = property absent
  edges.tsv   header `subject<TAB>predicate<TAB>object<TAB>...property columns`
  lookup.tsv  `source<TAB>raw_id<TAB>curie`
  pmid_years.tsv  `pmid<TAB>year`

A snapshot is a directory holding nodes.tsv, edges.tsv, and manifest.json
(counts plus a content hash); save/load round-trips exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field

from .errors import (
    ConflictingYear,
    InvalidCoordinate,
    MalformedRow,
    MissingClassNode,
    UnmappedIdentifier,
)
from .graph import Node, PropertyGraph, union_lists

COORD_RE = re.compile(r"^([A-Za-z0-9_.]+):([0-9]+)-([0-9]+)([+-])$")


@dataclass(frozen=True)
class Scheme:
    entity_kind: str
    name: str
    prefix: str
    local_re: str
    example: str


# Identification schemes for the main bio-entity kinds.
SCHEMES = [
    Scheme("Variant", "dbSNP", "dbSNP", r"rs[0-9]+", "rs766102409"),
    Scheme("Variant", "COSMIC", "COSMIC", r"COSV[0-9]+", "COSV60127483"),
    Scheme("ncRNA", "RNAcentral", "RNAcentral", r"URS[0-9A-F]+_[0-9]+", "URS00000478B7_9606"),
    Scheme("mRNA", "Ensembl", "Ensembl", r"ENST[0-9]+", "ENST00000713680"),
    Scheme("circRNA", "circBase", "circBase", r"hsa_circ_[0-9]+", "hsa_circ_0018046"),
    Scheme("Chemical", "ChEBI", "CHEBI", r"[0-9]+", "CHEBI:4021"),
    Scheme("Protein", "PRO", "PR", r"[A-Z][A-Z0-9]*(-[0-9]+)?", "PR:Q8WXF3"),
    Scheme("Gene", "Entrez", "Entrez", r"[0-9]+", "Entrez:1954"),
    Scheme("Cell", "CLO", "CLO", r"[0-9]{7}", "CLO:0003725"),
    Scheme("GO term", "GO", "GO", r"[0-9]{7}", "GO:0140657"),
    Scheme("Disease", "Mondo", "MONDO", r"[0-9]{7}", "MONDO:0020683"),
    Scheme("Phenotype", "HPO", "HP", r"[0-9]{7}", "HP:0040064"),
    Scheme("Anatomy", "Uberon", "UBERON", r"[0-9]+", "UBERON:0002169"),
    Scheme("Vaccine", "VO", "VO", r"[0-9]{7}", "VO:0010137"),
    Scheme("Pathway", "PW", "PW", r"[0-9]{7}", "PW:0000035"),
    Scheme("Pathway", "Reactome", "Reactome", r"R-HSA-[0-9]+", "R-HSA-9837999"),
    Scheme("Pathway", "WikiPathways", "WikiPathways", r"WP[0-9]+", "WP5090"),
]


class SchemeRegistry:
    def __init__(self, schemes=SCHEMES):
        self.schemes = list(schemes)
        self._by_prefix = {}
        for s in self.schemes:
            self._by_prefix.setdefault(s.prefix, []).append(s)

    def is_valid_curie(self, value: str) -> bool:
        if ":" not in value:
            return False
        prefix, local = value.split(":", 1)
        for scheme in self._by_prefix.get(prefix, []):
            if re.fullmatch(scheme.local_re, local):
                return True
        return False

    def scheme_for(self, curie: str):
        prefix, local = curie.split(":", 1)
        for scheme in self._by_prefix.get(prefix, []):
            if re.fullmatch(scheme.local_re, local):
                return scheme
        return None


DEFAULT_REGISTRY = SchemeRegistry()


@dataclass
class LookupTable:
    source: str
    mapping: dict = field(default_factory=dict)  # raw id -> standard curie


@dataclass
class OntologyTermRecord:
    curie: str
    label: str
    description: str = ""
    synonyms: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)


def normalize_coordinates(raw: str):
    """Parse `chromosome:start-end strand` into parts plus a canonical string."""
    m = COORD_RE.match(raw)
    if not m:
        raise InvalidCoordinate(raw)
    chrom, start, end, strand = m.group(1), int(m.group(2)), int(m.group(3)), m.group(4)
    if start > end:
        raise InvalidCoordinate(f"{raw}: start > end")
    return {
        "chromosome": chrom,
        "start": start,
        "end": end,
        "strand": strand,
        "canonical": f"{chrom}:{start}-{end}{strand}",
    }


def _split_list(cell: str):
    values = cell.split("|")
    if any(v == "" for v in values):
        raise ValueError("empty list element")
    return values


def _read_tsv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedRow(path, 0, "missing header")
    header = lines[0].split("\t")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(header):
            raise MalformedRow(path, i, f"expected {len(header)} columns, got {len(cells)}")
        rows.append(cells)
    return header, rows


def parse_nodes_file(path) -> list:
    """One Node per data row; `category` split on `|` into labels."""
    header, rows = _read_tsv(path)
    if header[:3] != ["id", "uri", "category"]:
        raise MalformedRow(path, 1, "nodes header must start with id, uri, category")
    prop_names = header[3:]
    nodes = []
    for i, cells in enumerate(rows, start=2):
        curie, uri, category = cells[0], cells[1], cells[2]
        labels = set(_split_list(category)) if category else set()
        properties = {}
        for name, cell in zip(prop_names, cells[3:]):
            if cell == "":
                continue
            try:
                properties[name] = _split_list(cell)
            except ValueError as exc:
                raise MalformedRow(path, i, f"{name}: {exc}") from None
        if "Genomic_coordinates" in properties:
            for coord in properties["Genomic_coordinates"]:
                normalize_coordinates(coord)  # raises InvalidCoordinate
        node = Node(curie, uri, labels, properties)
        node.validate()
        nodes.append(node)
    return nodes


def parse_edges_file(path) -> list:
    """Rows as (subject, predicate, object, properties) tuples."""
    header, rows = _read_tsv(path)
    if header[:3] != ["subject", "predicate", "object"]:
        raise MalformedRow(path, 1, "edges header must start with subject, predicate, object")
    prop_names = header[3:]
    edges = []
    for i, cells in enumerate(rows, start=2):
        properties = {}
        for name, cell in zip(prop_names, cells[3:]):
            if cell == "":
                continue
            try:
                properties[name] = _split_list(cell)
            except ValueError as exc:
                raise MalformedRow(path, i, f"{name}: {exc}") from None
        edges.append((cells[0], cells[1], cells[2], properties))
    return edges


def load_lookup_tables(path) -> dict:
    """`source<TAB>raw_id<TAB>curie` rows grouped into per-source tables."""
    header, rows = _read_tsv(path)
    if header != ["source", "raw_id", "curie"]:
        raise MalformedRow(path, 1, "lookup header must be source, raw_id, curie")
    tables = {}
    for i, (source, raw_id, curie) in enumerate(rows, start=2):
        table = tables.setdefault(source, LookupTable(source))
        existing = table.mapping.get(raw_id)
        if existing is not None and existing != curie:
            raise MalformedRow(path, i, f"conflicting mapping for {raw_id!r}")
        table.mapping[raw_id] = curie
    return tables


def map_identifier(raw_id: str, source: str, tables, registry=DEFAULT_REGISTRY) -> str:
    """Map a proprietary identifier to a standard curie.

    Inputs already matching a registered scheme pass through unchanged.
    """
    if registry.is_valid_curie(raw_id):
        return raw_id
    table = tables.get(source)
    if table is not None and raw_id in table.mapping:
        return table.mapping[raw_id]
    raise UnmappedIdentifier(f"{raw_id!r} (source {source})")


def link_entities(graph: PropertyGraph, class_map: dict) -> int:
    """Add one subClassOf edge per mapped node; returns new-edge count."""
    for class_curie in set(class_map.values()):
        if graph.handle_of(class_curie) is None:
            raise MissingClassNode(class_curie)
    added = 0
    for curie, class_curie in sorted(class_map.items()):
        src = graph.handle_of(curie)
        if src is None:
            continue
        dst = graph.handle_of(class_curie)
        before = graph.edge_count
        graph.add_edge(src, dst, "subClassOf")
        if graph.edge_count > before:
            added += 1
    return added


def enrich_nodes(graph: PropertyGraph, records) -> dict:
    """Union ontology-term attributes into matching nodes; report misses."""
    enriched = 0
    unmatched = []
    for record in records:
        handle = graph.handle_of(record.curie)
        if handle is None:
            unmatched.append(record.curie)
            continue
        node = graph.node(handle)
        merged = {"Label": [record.label]}
        if record.description:
            merged["Description"] = [record.description]
        if record.synonyms:
            merged["Synonyms"] = list(record.synonyms)
        for name, value in record.extras.items():
            merged[name] = value if isinstance(value, list) else [value]
        for name, values in merged.items():
            node.properties[name] = union_lists(node.properties.get(name, []), values)
        enriched += 1
    return {"enriched": enriched, "unmatched": unmatched}


def load_pmid_years(path) -> dict:
    header, rows = _read_tsv(path)
    if header != ["pmid", "year"]:
        raise MalformedRow(path, 1, "pmid table header must be pmid, year")
    table = {}
    for i, (pmid, year) in enumerate(rows, start=2):
        try:
            y = int(year)
        except ValueError:
            raise MalformedRow(path, i, f"bad year {year!r}") from None
        if not 1900 <= y <= 2100:
            raise MalformedRow(path, i, f"year {y} out of range")
        if pmid in table and table[pmid] != y:
            raise ConflictingYear(f"{pmid}: {table[pmid]} vs {y}")
        table[pmid] = y
    return table


# -- graph serialization ----------------------------------------------


def _check_value(value):
    if "|" in value or "\t" in value or "\n" in value:
        raise ValueError(f"forbidden character in value {value!r}")
    return value


def serialize_nodes(graph: PropertyGraph) -> str:
    prop_names = sorted({p for h in graph.handles() for p in graph.node(h).properties})
    lines = ["\t".join(["id", "uri", "category"] + prop_names)]
    for h in graph.handles():
        node = graph.node(h)
        cells = [node.curie, node.uri, "|".join(sorted(node.labels))]
        for name in prop_names:
            values = node.properties.get(name, [])
            cells.append("|".join(_check_value(v) for v in values))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def serialize_edges(graph: PropertyGraph) -> str:
    prop_names = sorted({p for eid in graph.edge_ids() for p in graph.edge(eid).properties})
    lines = ["\t".join(["subject", "predicate", "object"] + prop_names)]
    for eid in graph.edge_ids():
        edge = graph.edge(eid)
        cells = [graph.node(edge.src).curie, edge.predicate, graph.node(edge.dst).curie]
        for name in prop_names:
            values = edge.properties.get(name, [])
            cells.append("|".join(_check_value(v) for v in values))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def build_graph(nodes, edges) -> PropertyGraph:
    graph = PropertyGraph()
    for node in nodes:
        graph.add_node(node)
    for subject, predicate, obj, properties in edges:
        src = graph.handle_of(subject)
        dst = graph.handle_of(obj)
        if src is None or dst is None:
            missing = subject if src is None else obj
            raise UnmappedIdentifier(f"edge endpoint {missing!r} not in node set")
        graph.add_edge(src, dst, predicate, properties)
    return graph


def content_hash(graph: PropertyGraph) -> str:
    digest = hashlib.sha256()
    digest.update(serialize_nodes(graph).encode("utf-8"))
    digest.update(serialize_edges(graph).encode("utf-8"))
    return digest.hexdigest()


def save_snapshot(graph: PropertyGraph, directory):
    os.makedirs(directory, exist_ok=True)
    nodes_tsv = serialize_nodes(graph)
    edges_tsv = serialize_edges(graph)
    with open(os.path.join(directory, "nodes.tsv"), "w", encoding="utf-8") as fh:
        fh.write(nodes_tsv)
    with open(os.path.join(directory, "edges.tsv"), "w", encoding="utf-8") as fh:
        fh.write(edges_tsv)
    stats = graph.stats()
    manifest = {
        "node_count": stats["node_count"],
        "edge_count": stats["edge_count"],
        "content_hash": content_hash(graph),
    }
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def load_snapshot(directory) -> PropertyGraph:
    nodes = parse_nodes_file(os.path.join(directory, "nodes.tsv"))
    edges = parse_edges_file(os.path.join(directory, "edges.tsv"))
    graph = build_graph(nodes, edges)
    manifest_path = os.path.join(directory, "manifest.json")
    if os.path.exists(manifest_path):
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest.get("content_hash") not in (None, content_hash(graph)):
            raise MalformedRow(manifest_path, 0, "content hash mismatch")
    return graph.freeze()

"""Readers and writers for annotated passages.

Two input formats are supported:

* a JSON document (the package's own round-trip format, see
  ``parse_scene_json`` / ``to_scene_json``);
* the standard XML interchange format used by UCCA tooling
  (``parse_ucca_xml``): two layers, terminals in layer 0, units in
  layer 1, with punctuation wrappers and linkage nodes.

Both parsers promise that malformed input of any shape raises a
``ParseError`` subclass -- nothing else escapes -- and that the returned
passage has already passed ``validate``.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET

from .errors import DanglingRef, InvalidPassage, ParseError, UnknownCategory
from .model import (
    Edge,
    Passage,
    Terminal,
    TerminalEdge,
    Unit,
    category_from_tag,
    validate,
)

# ---------------------------------------------------------------------------
# JSON


def parse_scene_json(data: str | bytes) -> Passage:
    """Parse the JSON passage format.

    Shape::

        {"id": str,
         "tokens": [str, ...],
         "nodes": [{"id": str,
                    "implicit": bool,            # optional, default false
                    "edges": [{"child": str, "category": str,
                               "remote": bool}   # remote optional
                              | {"terminal": int},
                              ...]},
                   ...],
         "roots": [str, ...]}
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    passage_id = doc.get("id")
    if not isinstance(passage_id, str):
        raise ParseError("'id' must be a string")
    tokens_raw = doc.get("tokens")
    if not isinstance(tokens_raw, list) or not all(
            isinstance(t, str) for t in tokens_raw):
        raise ParseError("'tokens' must be a list of strings")
    nodes_raw = doc.get("nodes")
    if not isinstance(nodes_raw, list):
        raise ParseError("'nodes' must be a list")
    roots_raw = doc.get("roots")
    if not isinstance(roots_raw, list) or not all(
            isinstance(r, str) for r in roots_raw):
        raise ParseError("'roots' must be a list of strings")

    node_ids = set()
    for node in nodes_raw:
        if not isinstance(node, dict) or not isinstance(node.get("id"), str):
            raise ParseError("every node needs a string 'id'")
        if node["id"] in node_ids:
            raise ParseError(f"duplicate node id {node['id']!r}")
        node_ids.add(node["id"])

    units: dict[str, Unit] = {}
    for node in nodes_raw:
        implicit = node.get("implicit", False)
        if not isinstance(implicit, bool):
            raise ParseError(f"node {node['id']!r}: 'implicit' must be a bool")
        edges_raw = node.get("edges", [])
        if not isinstance(edges_raw, list):
            raise ParseError(f"node {node['id']!r}: 'edges' must be a list")
        edges: list[Edge | TerminalEdge] = []
        for entry in edges_raw:
            if not isinstance(entry, dict):
                raise ParseError(f"node {node['id']!r}: edge must be an object")
            if "terminal" in entry:
                idx = entry["terminal"]
                if not isinstance(idx, int) or isinstance(idx, bool):
                    raise ParseError(
                        f"node {node['id']!r}: 'terminal' must be an integer")
                edges.append(TerminalEdge(idx))
                continue
            child = entry.get("child")
            tag = entry.get("category")
            if not isinstance(child, str) or not isinstance(tag, str):
                raise ParseError(
                    f"node {node['id']!r}: edge needs 'child' and 'category'")
            if child not in node_ids:
                raise DanglingRef(
                    f"node {node['id']!r} references missing node {child!r}")
            category = category_from_tag(tag)
            if category is None:
                raise UnknownCategory(f"unknown edge category {tag!r}")
            remote = entry.get("remote", False)
            if not isinstance(remote, bool):
                raise ParseError(f"node {node['id']!r}: 'remote' must be a bool")
            edges.append(Edge(child, category, remote))
        units[node["id"]] = Unit(node["id"], tuple(edges), implicit)

    for root in roots_raw:
        if root not in units:
            raise DanglingRef(f"root {root!r} is not a node")

    passage = Passage(
        id=passage_id,
        tokens=tuple(Terminal(i, t) for i, t in enumerate(tokens_raw)),
        units=units,
        roots=tuple(roots_raw),
    )
    issues = validate(passage)
    if issues:
        raise InvalidPassage(issues)
    return passage


def to_scene_json(passage: Passage) -> str:
    """Serialize a passage to the JSON format, deterministically.

    ``parse_scene_json(to_scene_json(p))`` is structurally identical to
    ``p``, and equal passages always serialize to identical bytes.
    """
    nodes = []
    for unit in passage.units.values():
        edges = []
        for edge in unit.edges:
            if isinstance(edge, TerminalEdge):
                edges.append({"terminal": edge.terminal})
            else:
                entry = {"child": edge.child, "category": edge.category.value}
                if edge.remote:
                    entry["remote"] = True
                edges.append(entry)
        node = {"id": unit.id}
        if unit.implicit:
            node["implicit"] = True
        node["edges"] = edges
        nodes.append(node)
    doc = {
        "id": passage.id,
        "tokens": [t.text for t in passage.tokens],
        "nodes": nodes,
        "roots": list(passage.roots),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# standard XML


def parse_ucca_xml(data: str | bytes) -> Passage:
    """Parse a passage in the standard two-layer XML interchange format.

    Layer 0 holds the terminals (``Word``/``Punctuation`` nodes, document
    order gives the token sequence).  Layer 1 holds the units: ``FN``
    nodes become units, ``PNCT`` punctuation wrappers are dissolved into
    direct terminal attachments, and ``LKG`` linkage nodes are dropped.
    Edges to layer 0 become terminal attachments; other edges must carry
    a tag from the closed category set.  ``remote``/``implicit`` flags
    are honoured.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else None
        raise ParseError(f"not well-formed XML: {exc}", line=line) from exc

    if root.tag != "root":
        raise ParseError(f"expected <root> document element, got <{root.tag}>")
    passage_id = root.get("ID", root.get("id", "passage"))

    layers: dict[str, ET.Element] = {}
    for layer in root.findall("layer"):
        lid = layer.get("layerID")
        if lid is None:
            raise ParseError("<layer> without layerID")
        layers[lid] = layer
    if "0" not in layers or "1" not in layers:
        raise ParseError("document must contain layers 0 and 1")

    def attrs(elem: ET.Element) -> dict[str, str]:
        merged = dict(elem.attrib)
        sub = elem.find("attributes")
        if sub is not None:
            merged.update(sub.attrib)
        return merged

    # --- layer 0: terminals, in document order
    terminal_index: dict[str, int] = {}
    tokens: list[Terminal] = []
    for elem in layers["0"].findall("node"):
        node_id = elem.get("ID")
        if node_id is None:
            raise ParseError("layer 0 node without ID")
        if node_id in terminal_index:
            raise ParseError(f"duplicate terminal id {node_id!r}")
        node_type = elem.get("type")
        if node_type not in ("Word", "Punctuation"):
            raise ParseError(
                f"terminal {node_id!r} has unexpected type {node_type!r}")
        text = attrs(elem).get("text")
        if text is None:
            raise ParseError(f"terminal {node_id!r} has no text")
        terminal_index[node_id] = len(tokens)
        tokens.append(Terminal(len(tokens), text))

    # --- layer 1: first pass, classify nodes
    kept: list[tuple[str, ET.Element, bool]] = []      # (id, elem, implicit)
    punct_wrappers: dict[str, ET.Element] = {}
    layer1_ids: set[str] = set()
    for elem in layers["1"].findall("node"):
        node_id = elem.get("ID")
        if node_id is None:
            raise ParseError("layer 1 node without ID")
        if node_id in layer1_ids or node_id in terminal_index:
            raise ParseError(f"duplicate node id {node_id!r}")
        layer1_ids.add(node_id)
        node_type = elem.get("type")
        if node_type == "LKG":
            continue
        if node_type == "PNCT":
            punct_wrappers[node_id] = elem
            continue
        if node_type != "FN":
            raise ParseError(
                f"node {node_id!r} has unexpected type {node_type!r}")
        implicit = attrs(elem).get("implicit") == "True"
        kept.append((node_id, elem, implicit))

    def edge_tag(elem: ET.Element, owner: str) -> str:
        tag = elem.get("type")
        if tag is None:
            cat = elem.find("category")
            if cat is not None:
                tag = cat.get("tag")
        if tag is None:
            raise ParseError(f"edge of unit {owner!r} carries no category tag")
        return tag

    def wrapper_terminals(wrapper_id: str) -> list[int]:
        out = []
        for edge in punct_wrappers[wrapper_id].findall("edge"):
            to_id = edge.get("toID")
            if to_id not in terminal_index:
                raise DanglingRef(
                    f"punctuation wrapper {wrapper_id!r} references "
                    f"{to_id!r}, which is not a terminal")
            out.append(terminal_index[to_id])
        return out

    kept_ids = {node_id for node_id, _, _ in kept}
    units: dict[str, Unit] = {}
    has_primary_parent: set[str] = set()
    for node_id, elem, implicit in kept:
        edges: list[Edge | TerminalEdge] = []
        for edge_elem in elem.findall("edge"):
            to_id = edge_elem.get("toID")
            if to_id is None:
                raise ParseError(f"edge of unit {node_id!r} has no toID")
            if to_id in terminal_index:
                edges.append(TerminalEdge(terminal_index[to_id]))
                continue
            if to_id in punct_wrappers:
                for idx in wrapper_terminals(to_id):
                    edges.append(TerminalEdge(idx))
                continue
            tag = edge_tag(edge_elem, node_id)
            if to_id not in kept_ids:
                raise DanglingRef(
                    f"unit {node_id!r} references missing unit {to_id!r}")
            category = category_from_tag(tag)
            if category is None:
                raise UnknownCategory(f"unknown edge category {tag!r}")
            remote = attrs(edge_elem).get("remote") == "True"
            edges.append(Edge(to_id, category, remote))
            if not remote:
                has_primary_parent.add(to_id)
        units[node_id] = Unit(node_id, tuple(edges), implicit)

    roots = tuple(
        node_id for node_id, _, _ in kept if node_id not in has_primary_parent
    )
    passage = Passage(
        id=passage_id, tokens=tuple(tokens), units=units, roots=roots)
    issues = validate(passage)
    if issues:
        raise InvalidPassage(issues)
    return passage

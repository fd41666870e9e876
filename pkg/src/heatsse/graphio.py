"""Reading graphs from edge-list text or JSON.

Text format::

    # comment
    undirected          (or: directed)
    0 1 2.5             (u v [w]; w defaults to 1.0)

JSON format: ``{"n": 3, "directed": false, "edges": [[0, 1, 2.5], [1, 2]]}``.
"""
import json
from pathlib import Path

from .chain import WeightedGraph
from .errors import GraphFormatError, InputError


def parse_edge_list(text: str) -> WeightedGraph:
    directed = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if directed is None:
            if line.lower() not in ("directed", "undirected"):
                raise GraphFormatError(
                    f"expected header 'directed' or 'undirected', got {line!r}", lineno)
            directed = line.lower() == "directed"
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'u v [w]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"state indices must be integers: {line!r}", lineno) from None
        try:
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"weight is not a number: {parts[2]!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative state index in {line!r}", lineno)
        if not w > 0 or w == float("inf"):
            raise GraphFormatError(f"weight must be positive and finite, got {w}", lineno)
        edges.append((u, v, w))
    if directed is None:
        raise GraphFormatError("missing 'directed'/'undirected' header")
    if not edges:
        raise GraphFormatError("graph has no edges")
    n = 1 + max(max(u, v) for u, v, _ in edges)
    return WeightedGraph(n, edges, directed)


def parse_json(text: str) -> WeightedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "edges" not in doc:
        raise GraphFormatError("JSON graph must be an object with an 'edges' list")
    edges = []
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise GraphFormatError(f"edge #{i} must be [u, v] or [u, v, w]")
        u, v = e[0], e[1]
        w = float(e[2]) if len(e) == 3 else 1.0
        if not (isinstance(u, int) and isinstance(v, int)):
            raise GraphFormatError(f"edge #{i} has non-integer endpoints")
        edges.append((u, v, w))
    n = doc.get("n")
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    try:
        return WeightedGraph(int(n), edges, bool(doc.get("directed", False)))
    except InputError as exc:
        raise GraphFormatError(str(exc)) from None


def load_graph(path) -> WeightedGraph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_edge_list(text)

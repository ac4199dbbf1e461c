"""Graph and partition file formats.

Edge-list: one edge per line, "u v" or "u v w", 0-indexed, '#' comments.
The node count is inferred as max index + 1, so trailing isolated nodes
cannot be represented.

METIS: header "n m [fmt [ncon]]", then one 1-indexed neighbor list per
node; '%' comment lines. Each undirected edge must appear in both
endpoint lists with the same weight. fmt digits (right-aligned) declare
vertex sizes / vertex weights / edge weights; vertex data is skipped.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .graph import Graph, Partition

GRAPH_FORMATS = ("edge-list", "metis")


def load_graph(path: str | Path, format: str = "edge-list") -> Graph:
    if format == "edge-list":
        return load_edge_list(path)
    if format == "metis":
        return load_metis(path)
    raise ValueError(f"unknown graph format {format!r}")


def _wrap_graph_error(path: str, line_no: int, exc: ValueError) -> ParseError:
    return ParseError(path, line_no, str(exc))


def load_edge_list(path: str | Path) -> Graph:
    path = str(path)
    edges: list[tuple[int, int, float]] = []
    seen: dict[tuple[int, int], int] = {}
    max_node = -1
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) not in (2, 3):
                raise ParseError(path, line_no, f"expected 'u v' or 'u v w', got {line!r}")
            try:
                u, v = int(tokens[0]), int(tokens[1])
                w = float(tokens[2]) if len(tokens) == 3 else 1.0
            except ValueError:
                raise ParseError(path, line_no, f"non-numeric field in {line!r}") from None
            if u < 0 or v < 0:
                raise ParseError(path, line_no, f"negative node index in {line!r}")
            if u == v:
                raise ParseError(path, line_no, f"self-loop at node {u}")
            if w < 0:
                raise ParseError(path, line_no, f"negative weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(
                    path, line_no,
                    f"duplicate undirected edge ({u}, {v}), first seen on line {seen[key]}",
                )
            seen[key] = line_no
            edges.append((u, v, w))
            max_node = max(max_node, u, v)
    if not edges:
        raise ParseError(path, 0, "no edges found; node count cannot be inferred")
    try:
        return Graph(max_node + 1, edges)
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from exc


def load_metis(path: str | Path) -> Graph:
    path = str(path)
    lines: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if raw.lstrip().startswith("%"):
                continue
            lines.append((line_no, raw.rstrip("\n")))
    if not lines:
        raise ParseError(path, 0, "empty file")

    header_no, header = lines[0]
    tokens = header.split()
    if len(tokens) < 2 or len(tokens) > 4:
        raise ParseError(path, header_no, f"bad header {header!r}")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(path, header_no, f"non-numeric header {header!r}") from None
    fmt = tokens[2].zfill(3) if len(tokens) >= 3 else "000"
    if len(fmt) != 3 or any(c not in "01" for c in fmt):
        raise ParseError(path, header_no, f"bad fmt field {tokens[2]!r}")
    has_vsize, has_vwgt, has_ewgt = (c == "1" for c in fmt)
    ncon = int(tokens[3]) if len(tokens) == 4 else (1 if has_vwgt else 0)
    if n < 1:
        raise ParseError(path, header_no, f"node count must be >= 1, got {n}")

    body = lines[1:]
    if len(body) < n:
        raise ParseError(path, header_no, f"expected {n} vertex lines, found {len(body)}")
    for line_no, extra in body[n:]:
        if extra.strip():
            raise ParseError(path, line_no, "trailing non-blank line after vertex lists")

    # weights[key] holds the weight from the first endpoint list; sides
    # counts how many endpoint lists mention the edge (must end at 2).
    weights: dict[tuple[int, int], float] = {}
    sides: dict[tuple[int, int], int] = {}
    for u, (line_no, line) in enumerate(body[:n]):
        fields = line.split()
        pos = 0
        if has_vsize:
            pos += 1
        pos += ncon
        if pos > len(fields):
            raise ParseError(path, line_no, "missing vertex data fields")
        entries = fields[pos:]
        step = 2 if has_ewgt else 1
        if len(entries) % step != 0:
            raise ParseError(path, line_no, "neighbor list has a dangling field")
        local_seen: set[int] = set()
        for k in range(0, len(entries), step):
            try:
                v = int(entries[k]) - 1
                w = float(entries[k + 1]) if has_ewgt else 1.0
            except ValueError:
                raise ParseError(path, line_no, f"non-numeric field {entries[k]!r}") from None
            if not 0 <= v < n:
                raise ParseError(path, line_no, f"neighbor index {v + 1} out of range 1..{n}")
            if v == u:
                raise ParseError(path, line_no, f"self-loop at node {u}")
            if v in local_seen:
                raise ParseError(path, line_no, f"duplicate neighbor {v + 1}")
            local_seen.add(v)
            key = (min(u, v), max(u, v))
            if key in weights:
                if weights[key] != w:
                    raise ParseError(
                        path, line_no,
                        f"edge ({key[0] + 1}, {key[1] + 1}) has mismatched weights",
                    )
                sides[key] += 1
                if sides[key] > 2:
                    raise ParseError(
                        path, line_no, f"edge ({key[0] + 1}, {key[1] + 1}) listed too often"
                    )
            else:
                weights[key] = w
                sides[key] = 1

    one_sided = [k for k, c in sides.items() if c != 2]
    if one_sided:
        u, v = one_sided[0]
        raise ParseError(
            path, header_no,
            f"edge ({u + 1}, {v + 1}) appears in only one endpoint's list",
        )
    if len(weights) != m:
        raise ParseError(path, header_no, f"header declares {m} edges, found {len(weights)}")
    try:
        return Graph(n, [(u, v, w) for (u, v), w in weights.items()])
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from exc


def _format_weight(w: float) -> str:
    return repr(int(w)) if w == int(w) else repr(w)


def save_edge_list(g: Graph, path: str | Path) -> None:
    """Write canonical edge-list form; unit weights are left implicit."""
    lines = []
    for u, v, w in g.edges():
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {_format_weight(w)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_metis(g: Graph, path: str | Path) -> None:
    weighted = any(w != 1.0 for _, _, w in g.edges())
    header = f"{g.n} {g.edge_count} 001" if weighted else f"{g.n} {g.edge_count}"
    lines = [header]
    for u in range(g.n):
        entries = []
        for v, w in sorted(g.neighbors(u)):
            entries.append(f"{v + 1} {_format_weight(w)}" if weighted else str(v + 1))
        lines.append(" ".join(entries))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_partition(part: Partition, path: str | Path) -> None:
    """One label per line, node order."""
    Path(path).write_text(
        "\n".join(str(x) for x in part.labels.tolist()) + "\n", encoding="utf-8"
    )


def load_partition(path: str | Path) -> Partition:
    path = str(path)
    labels = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line not in ("0", "1"):
                raise ParseError(path, line_no, f"expected 0 or 1, got {line!r}")
            labels.append(int(line))
    if not labels:
        raise ParseError(path, 0, "no labels found")
    return Partition(labels)

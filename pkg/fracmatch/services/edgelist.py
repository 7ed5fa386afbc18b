"""Edge-list files: header "n k", then one edge per line as 1-based vertices.

Blank lines and text after '#' are ignored.
"""

from pathlib import Path

from fracmatch.schemas.hull import Hypergraph


def parse_edge_list(text: str) -> Hypergraph:
    """Parse edge-list text; raises ValueError with the offending line number."""
    header: tuple[int, int] | None = None
    sets: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise ValueError(f"line {lineno}: not an integer list: {raw!r}") from e
        if header is None:
            if len(values) != 2:
                raise ValueError(f"line {lineno}: header must be 'n k'")
            header = (values[0], values[1])
            continue
        if len(set(values)) != len(values):
            raise ValueError(f"line {lineno}: repeated vertex")
        sets.append(values)
    if header is None:
        raise ValueError("missing 'n k' header")
    n, k = header
    return Hypergraph.from_sets(n, k, sets)


def read_edge_list(path: str | Path) -> Hypergraph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def format_edge_list(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.k}"]
    lines.extend(" ".join(str(v) for v in e) for e in h.edge_sets())
    return "\n".join(lines) + "\n"


def write_edge_list(h: Hypergraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(h), encoding="utf-8")

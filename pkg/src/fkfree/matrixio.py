"""Plain-text adjacency matrices and DOT export."""

from __future__ import annotations

from typing import Iterable

from .core import Digraph


class MatrixFormatError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_matrix(text: str) -> Digraph:
    """Parse n lines of n characters from {0,1}; lines starting with '#' are comments."""
    rows = []
    width = None
    last_line = 0
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if line.startswith("#"):
            continue
        if line == "" and lineno == len(text.split("\n")):
            break
        last_line = lineno
        if width is None:
            if not line:
                raise MatrixFormatError(lineno, 1, "empty matrix row")
            width = len(line)
        for col, ch in enumerate(line, 1):
            if ch not in "01":
                raise MatrixFormatError(lineno, col, f"illegal character {ch!r}")
        if len(line) != width:
            raise MatrixFormatError(lineno, min(len(line), width) + 1, f"row has length {len(line)}, expected {width}")
        if len(rows) == width:
            raise MatrixFormatError(lineno, 1, f"more than {width} rows")
        rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
    if width is None:
        raise MatrixFormatError(max(last_line, 1), 1, "no matrix rows")
    if len(rows) != width:
        raise MatrixFormatError(last_line + 1, 1, f"found {len(rows)} rows, expected {width}")
    return Digraph(width, rows)


def emit_matrix(D: Digraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += ["".join("1" if row >> j & 1 else "0" for j in range(D.n)) for row in D.rows]
    return "\n".join(lines) + "\n"


def to_dot(D: Digraph, name: str = "D") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  {v};" for v in range(D.n)]
    lines += [f"  {i} -> {j};" for i, j in D.arcs()]
    lines.append("}")
    return "\n".join(lines) + "\n"

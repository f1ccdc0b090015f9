"""The ``.rbf`` family file format.

    rainbow-family 1
    n <n>
    graphs <s>
    graph 1
    p<j> q<k>        one line per edge, ascending j then k
    end
    graph 2
    ...

7-bit text, LF line endings, no trailing whitespace, final newline.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from .core import BipartiteFamily

HEADER = "rainbow-family 1"
_EDGE = re.compile(r"p([1-9][0-9]*) q([1-9][0-9]*)")
_COUNT = re.compile(r"(n|graphs|graph) ([0-9]+)")


class RbfError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def serialize(family: BipartiteFamily) -> str:
    out = [HEADER, f"n {family.n}", f"graphs {family.s}"]
    for i, graph in enumerate(family.graphs, start=1):
        out.append(f"graph {i}")
        out.extend(f"p{j} q{k}" for j, k in sorted(graph))
        out.append("end")
    return "\n".join(out) + "\n"


def digest(family: BipartiteFamily) -> str:
    return hashlib.sha256(serialize(family).encode("ascii")).hexdigest()


def _bad_char(text: str):
    for lineno, line in enumerate(text.split("\n"), start=1):
        for col, ch in enumerate(line, start=1):
            if ord(ch) > 127 or (ch < " " and ch != "\t") or ch == "\r":
                return RbfError(lineno, col, f"invalid character {ch!r}")
    return None


def parse(text: str) -> BipartiteFamily:
    """Parse strictly; errors carry the 1-based line and column."""
    err = _bad_char(text)
    if err:
        raise err
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise RbfError(len(lines), len(lines[-1]) + 1 if lines else 1, "missing final newline")
    pos = 0

    def take(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            raise RbfError(len(lines) + 1, 1, f"unexpected end of file, expected {what}")
        pos += 1
        line = lines[pos - 1]
        if line != line.rstrip():
            raise RbfError(pos, len(line.rstrip()) + 1, "trailing whitespace")
        return pos, line

    def count(keyword: str, minimum: int) -> int:
        lineno, line = take(f"'{keyword} <int>'")
        m = _COUNT.fullmatch(line)
        if not m or m.group(1) != keyword:
            raise RbfError(lineno, 1, f"expected '{keyword} <int>', got {line!r}")
        value = int(m.group(2))
        if value < minimum:
            raise RbfError(lineno, len(keyword) + 2, f"{keyword} must be >= {minimum}")
        return value

    lineno, line = take("header")
    if line != HEADER:
        raise RbfError(lineno, 1, f"expected {HEADER!r}")
    n = count("n", 1)
    s = count("graphs", 0)
    graphs = []
    for i in range(1, s + 1):
        lineno, line = take(f"'graph {i}'")
        if line != f"graph {i}":
            raise RbfError(lineno, 1, f"expected 'graph {i}', got {line!r}")
        edges: list[tuple[int, int]] = []
        while True:
            lineno, line = take("an edge or 'end'")
            if line == "end":
                break
            m = _EDGE.fullmatch(line)
            if not m:
                raise RbfError(lineno, 1, f"expected 'p<j> q<k>' or 'end', got {line!r}")
            e = (int(m.group(1)), int(m.group(2)))
            if e[0] > n:
                raise RbfError(lineno, 2, f"blue index {e[0]} exceeds n = {n}")
            if e[1] > n:
                raise RbfError(lineno, m.start(2) + 1, f"red index {e[1]} exceeds n = {n}")
            if edges and e <= edges[-1]:
                raise RbfError(lineno, 1, "edges must be strictly ascending")
            edges.append(e)
        graphs.append(edges)
    if pos < len(lines):
        raise RbfError(pos + 1, 1, "content after the last graph")
    return BipartiteFamily.from_edge_sets(n, graphs)


def read_family(path: str | Path) -> BipartiteFamily:
    data = Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        before = data[: exc.start]
        line = before.count(b"\n") + 1
        col = exc.start - (before.rfind(b"\n") + 1) + 1
        raise RbfError(line, col, "non-ASCII byte") from None
    return parse(text)


def write_family(family: BipartiteFamily, path: str | Path) -> None:
    Path(path).write_bytes(serialize(family).encode("ascii"))

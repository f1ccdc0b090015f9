"""Domain types, degree-condition checks and the rainbow-structure verifier.

Vertices are ``p1..pn`` (blue) and ``q1..qn`` (red).  An edge is stored as the
pair ``(j, k)`` meaning ``p_j q_k``; graph indices (colors) run from 1 to s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

BLUE = "p"
RED = "q"

CYCLE_ROLE = "cycle-family"
MATCHING_ROLE = "matching-family"

Edge = tuple[int, int]


class Vertex(NamedTuple):
    """A vertex of X.  Tuple order puts every blue vertex before every red one."""

    side: str
    index: int

    def __str__(self) -> str:
        return f"{self.side}{self.index}"

    @property
    def is_blue(self) -> bool:
        return self.side == BLUE

    @classmethod
    def parse(cls, text: str) -> "Vertex":
        side, index = text[0], int(text[1:])
        if side not in (BLUE, RED) or index < 1:
            raise ValueError(f"bad vertex {text!r}")
        return cls(side, index)


def P(j: int) -> Vertex:
    return Vertex(BLUE, j)


def Q(k: int) -> Vertex:
    return Vertex(RED, k)


def edge_of(u: Vertex, v: Vertex) -> Edge:
    """Normalize an unordered vertex pair to the ``(blue, red)`` edge key."""
    if u.side == v.side:
        raise ValueError(f"{u}{v} joins two vertices of the same color class")
    if u.is_blue:
        return (u.index, v.index)
    return (v.index, u.index)


def edge_str(e: Edge) -> str:
    return f"p{e[0]} q{e[1]}"


@dataclass(frozen=True)
class BipartiteFamily:
    """n blue + n red vertices and graphs G_1..G_s given as edge lists.

    Construction never raises; :meth:`structural_errors` reports malformed
    input and :meth:`require_well_formed` turns it into a ``ValueError``.
    """

    n: int
    graphs: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        graphs = tuple(tuple(sorted((int(a), int(b)) for a, b in g)) for g in self.graphs)
        object.__setattr__(self, "graphs", graphs)

    @classmethod
    def from_edge_sets(cls, n: int, graphs: Iterable[Iterable[Edge]]) -> "BipartiteFamily":
        return cls(n, tuple(tuple(g) for g in graphs))

    @property
    def s(self) -> int:
        return len(self.graphs)

    @cached_property
    def _structural_errors(self) -> tuple[str, ...]:
        errors = []
        if self.n < 1:
            errors.append(f"n must be >= 1, got {self.n}")
        for i, g in enumerate(self.graphs, start=1):
            seen = set()
            for j, k in g:
                if not (1 <= j <= self.n and 1 <= k <= self.n):
                    errors.append(f"graph {i}: edge {edge_str((j, k))} out of range")
                if (j, k) in seen:
                    errors.append(f"graph {i}: duplicate edge {edge_str((j, k))}")
                seen.add((j, k))
        return tuple(errors)

    def structural_errors(self) -> list[str]:
        return list(self._structural_errors)

    def require_well_formed(self) -> None:
        if self._structural_errors:
            raise ValueError("malformed family: " + "; ".join(self._structural_errors))

    @cached_property
    def edge_sets(self) -> tuple[frozenset[Edge], ...]:
        # index 0 is a placeholder so that graph i lives at edge_sets[i]
        return (frozenset(),) + tuple(frozenset(g) for g in self.graphs)

    @cached_property
    def color_mask(self) -> dict[Edge, int]:
        """Bit i is set iff the edge belongs to G_i."""
        masks: dict[Edge, int] = {}
        for i, g in enumerate(self.graphs, start=1):
            for e in g:
                masks[e] = masks.get(e, 0) | (1 << i)
        return masks

    @cached_property
    def blue_nbrs(self) -> tuple[tuple[int, ...], ...]:
        """``blue_nbrs[i][j]``: bitmask of red indices adjacent to p_j in G_i."""
        table = [[0] * (self.n + 1) for _ in range(self.s + 1)]
        for i, g in enumerate(self.graphs, start=1):
            for j, k in g:
                table[i][j] |= 1 << k
        return tuple(tuple(row) for row in table)

    @cached_property
    def red_nbrs(self) -> tuple[tuple[int, ...], ...]:
        """``red_nbrs[i][k]``: bitmask of blue indices adjacent to q_k in G_i."""
        table = [[0] * (self.n + 1) for _ in range(self.s + 1)]
        for i, g in enumerate(self.graphs, start=1):
            for j, k in g:
                table[i][k] |= 1 << j
        return tuple(tuple(row) for row in table)

    def has_edge(self, u: Vertex, v: Vertex, color: int) -> bool:
        if u.side == v.side or not 1 <= color <= self.s:
            return False
        return edge_of(u, v) in self.edge_sets[color]

    def colors_of(self, u: Vertex, v: Vertex) -> list[int]:
        if u.side == v.side:
            return []
        mask = self.color_mask.get(edge_of(u, v), 0)
        return [i for i in range(1, self.s + 1) if mask >> i & 1]

    def neighbors(self, v: Vertex, color: int) -> list[Vertex]:
        if v.is_blue:
            mask = self.blue_nbrs[color][v.index]
            return [Q(k) for k in range(1, self.n + 1) if mask >> k & 1]
        mask = self.red_nbrs[color][v.index]
        return [P(j) for j in range(1, self.n + 1) if mask >> j & 1]

    def degree(self, v: Vertex, color: int) -> int:
        table = self.blue_nbrs if v.is_blue else self.red_nbrs
        return bin(table[color][v.index]).count("1")

    def vertices(self) -> list[Vertex]:
        return [P(j) for j in range(1, self.n + 1)] + [Q(k) for k in range(1, self.n + 1)]

    def with_edge(self, graph: int, e: Edge) -> "BipartiteFamily":
        graphs = [list(g) for g in self.graphs]
        if e not in self.edge_sets[graph]:
            graphs[graph - 1].append(e)
        return BipartiteFamily.from_edge_sets(self.n, graphs)

    def without_edge(self, graph: int, e: Edge) -> "BipartiteFamily":
        graphs = [[f for f in g if f != e] if i == graph else list(g)
                  for i, g in enumerate(self.graphs, start=1)]
        return BipartiteFamily.from_edge_sets(self.n, graphs)


def degree_thresholds(n: int) -> tuple[int, int]:
    """Least integer degrees meeting ``d(red) > n/2`` and ``d(blue) >= n/2``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n // 2 + 1, (n + 1) // 2


@dataclass(frozen=True)
class ValidationReport:
    role: str
    n: int
    red_min: int
    blue_min: int
    expected_graphs: int
    graph_count: int
    # per graph: (min red degree, min blue degree)
    min_degrees: tuple[tuple[int, int], ...] = ()
    violations: tuple[tuple[int, Vertex, int], ...] = ()  # (graph, vertex, degree)
    structural_errors: tuple[str, ...] = ()
    problems: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not (self.violations or self.structural_errors or self.problems)

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> list[str]:
        out = [
            f"role {self.role}",
            f"n {self.n}",
            f"graphs {self.graph_count} (expected {self.expected_graphs})",
            f"thresholds red>={self.red_min} blue>={self.blue_min}",
        ]
        for i, (r, b) in enumerate(self.min_degrees, start=1):
            out.append(f"graph {i} min_red {r} min_blue {b}")
        for msg in self.structural_errors + self.problems:
            out.append(f"error {msg}")
        for g, v, d in self.violations:
            out.append(f"violation graph {g} vertex {v} degree {d}")
        out.append("verdict " + ("pass" if self.passed else "fail"))
        return out


def validate_family(family: BipartiteFamily, role: str = CYCLE_ROLE) -> ValidationReport:
    if role not in (CYCLE_ROLE, MATCHING_ROLE):
        raise ValueError(f"unknown role {role!r}")
    n = family.n
    expected = 2 * n if role == CYCLE_ROLE else n
    structural = tuple(family.structural_errors())
    if structural or n < 1:
        return ValidationReport(role, n, 0, 0, expected, family.s,
                                structural_errors=structural or (f"n must be >= 1, got {n}",))
    red_min, blue_min = degree_thresholds(n)
    problems = []
    if family.s != expected:
        problems.append(f"{role} needs {expected} graphs, found {family.s}")
    if role == CYCLE_ROLE and n < 2:
        problems.append("cycle families need n >= 2")
    mins, violations = [], []
    for i in range(1, family.s + 1):
        red_degs = [bin(family.red_nbrs[i][k]).count("1") for k in range(1, n + 1)]
        blue_degs = [bin(family.blue_nbrs[i][j]).count("1") for j in range(1, n + 1)]
        mins.append((min(red_degs), min(blue_degs)))
        for j, d in enumerate(blue_degs, start=1):
            if d < blue_min:
                violations.append((i, P(j), d))
        for k, d in enumerate(red_degs, start=1):
            if d < red_min:
                violations.append((i, Q(k), d))
    return ValidationReport(role, n, red_min, blue_min, expected, family.s,
                            tuple(mins), tuple(violations), (), tuple(problems))


PATH, CYCLE, MATCHING = "path", "cycle", "matching"


@dataclass(frozen=True)
class RainbowSubgraph:
    """An edge list plus its witness coloring: ``colors[t]`` is the graph of ``edges[t]``.

    For paths and cycles the edges are listed in traversal order when the
    subgraph comes from :func:`from_sequence`; verification does not rely on it.
    """

    kind: str
    edges: tuple[Edge, ...]
    colors: tuple[int, ...]

    @classmethod
    def from_sequence(cls, kind: str, seq: Sequence[Vertex], colors: Sequence[int]) -> "RainbowSubgraph":
        """Build a path (``len(seq) - 1`` edges) or a cycle (closing edge last)."""
        m = len(seq) if kind == CYCLE else len(seq) - 1
        edges = tuple(edge_of(seq[t], seq[(t + 1) % len(seq)]) for t in range(m))
        return cls(kind, edges, tuple(colors))

    def __len__(self) -> int:
        return len(self.edges)

    def color_of(self) -> dict[Edge, int]:
        return dict(zip(self.edges, self.colors))

    def vertex_set(self) -> set[Vertex]:
        out = set()
        for j, k in self.edges:
            out.add(P(j))
            out.add(Q(k))
        return out

    def sequence(self) -> list[Vertex]:
        """Vertex sequence of a path or cycle, canonically oriented."""
        return canonical(self).sequence_unchecked()

    def sequence_unchecked(self) -> list[Vertex]:
        adj: dict[Vertex, list[Vertex]] = {}
        for j, k in self.edges:
            adj.setdefault(P(j), []).append(Q(k))
            adj.setdefault(Q(k), []).append(P(j))
        if not adj:
            return []
        if self.kind == PATH:
            start = min(v for v, ns in adj.items() if len(ns) == 1)
        else:
            start = min(adj)
        seq, prev = [start], None
        nxt = min(adj[start])
        cur = start
        while True:
            if self.kind == CYCLE and nxt == start:
                break
            seq.append(nxt)
            prev, cur = cur, nxt
            options = [v for v in adj[cur] if v != prev]
            if not options:
                break
            nxt = options[0]
        return seq

    def missing_colors(self, s: int) -> list[int]:
        used = set(self.colors)
        return [i for i in range(1, s + 1) if i not in used]


@dataclass(frozen=True)
class RainbowCheck:
    ok: bool
    reasons: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def _component_count(edges: Sequence[Edge]) -> int:
    parent: dict[Vertex, Vertex] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for j, k in edges:
        for v in (P(j), Q(k)):
            parent.setdefault(v, v)
        a, b = find(P(j)), find(Q(k))
        if a != b:
            parent[a] = b
    return len({find(v) for v in parent})


def verify_rainbow(sub: RainbowSubgraph, family: BipartiteFamily) -> RainbowCheck:
    """Ground-truth acceptor: structure, edge membership and color injectivity."""
    reasons = []
    if sub.kind not in (PATH, CYCLE, MATCHING):
        return RainbowCheck(False, (f"unknown kind {sub.kind!r}",))
    if len(sub.colors) != len(sub.edges):
        return RainbowCheck(False, ("colors and edges differ in length",))
    if not sub.edges:
        return RainbowCheck(False, ("empty edge set",))
    if len(set(sub.edges)) != len(sub.edges):
        reasons.append("repeated edge")
    if len(set(sub.colors)) != len(sub.colors):
        reasons.append("non-injective colors")
    for e, c in zip(sub.edges, sub.colors):
        if not 1 <= c <= family.s:
            reasons.append(f"color {c} out of range for edge {edge_str(e)}")
        elif e not in family.edge_sets[c]:
            reasons.append(f"edge {edge_str(e)} not in graph {c}")
        if not (1 <= e[0] <= family.n and 1 <= e[1] <= family.n):
            reasons.append(f"edge {edge_str(e)} out of range")

    deg: dict[Vertex, int] = {}
    for j, k in sub.edges:
        deg[P(j)] = deg.get(P(j), 0) + 1
        deg[Q(k)] = deg.get(Q(k), 0) + 1
    m = len(sub.edges)
    if sub.kind == MATCHING:
        if any(d != 1 for d in deg.values()):
            reasons.append("edges not vertex-disjoint")
    elif sub.kind == CYCLE:
        if m < 4:
            reasons.append("cycle shorter than 4")
        if any(d != 2 for d in deg.values()) or _component_count(sub.edges) != 1:
            reasons.append("edges do not form a single cycle")
    else:
        ends = sum(1 for d in deg.values() if d == 1)
        if (any(d > 2 for d in deg.values()) or ends != 2 or len(deg) != m + 1
                or _component_count(sub.edges) != 1):
            reasons.append("edges do not form a single path")
    return RainbowCheck(not reasons, tuple(reasons))


def canonical(sub: RainbowSubgraph) -> RainbowSubgraph:
    """Canonical edge order and orientation; the edge-to-color map is unchanged.

    Cycles start at their lowest blue vertex and leave towards the lower of its
    two red neighbours; paths start at the smaller endpoint; matchings are sorted.
    """
    col = sub.color_of()
    if sub.kind == MATCHING:
        edges = tuple(sorted(sub.edges))
        return RainbowSubgraph(MATCHING, edges, tuple(col[e] for e in edges))
    seq = RainbowSubgraph(sub.kind, sub.edges, sub.colors).sequence_unchecked()
    if sub.kind == CYCLE:
        closing = [edge_of(seq[t], seq[(t + 1) % len(seq)]) for t in range(len(seq))]
    else:
        closing = [edge_of(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
    return RainbowSubgraph(sub.kind, tuple(closing), tuple(col[e] for e in closing))


def witness_lines(sub: RainbowSubgraph) -> list[str]:
    """Human-auditable witness: one edge per line with its graph index."""
    c = canonical(sub)
    out = [f"kind {c.kind}"]
    if c.kind != MATCHING:
        out.append("sequence " + " ".join(str(v) for v in c.sequence_unchecked()))
    for e, color in zip(c.edges, c.colors):
        out.append(f"edge {edge_str(e)} color {color}")
    return out

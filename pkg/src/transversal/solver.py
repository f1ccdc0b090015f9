"""Proof-guided search for rainbow structures.

Every move builds candidate vertex sequences the way the existence proofs do
(Posa rotations, auxiliary-digraph in/out neighbourhoods, Bondy pairings,
shift sets on the cycle) and hands them to :func:`_assemble`, which keeps the
colors of edges carried over from the old structure, matches the new edges to
the free colors, and verifies the result.  Moves never claim non-existence:
``no_move`` only means that no pattern instance fired.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import oracle
from .core import (CYCLE, MATCHING, PATH, BipartiteFamily, Edge, RainbowSubgraph,
                   Vertex, canonical, edge_of, verify_rainbow)
from .generators import SplitMix64
from .lemmas import CyclicSet, symmetric_shift_union

NO_MOVE = "no_move"


class MoveUnavailable(Exception):
    """A requested relabeling or recoloring is not supported by the family."""


class MoveError(ValueError):
    """Input of the wrong kind or shape for a move."""


@dataclass(frozen=True)
class Move:
    outcome: str  # "hamiltonian", "state", "path", "shorter", "found" or NO_MOVE
    value: object = None
    pattern: str = ""

    @property
    def fired(self) -> bool:
        return self.outcome != NO_MOVE


_NOTHING = Move(NO_MOVE)


# ---------------------------------------------------------------------------
# states and relabeling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledCycleState:
    """A rainbow cycle v_1..v_L (v_1 blue) with ``phi[i-1]`` the color of v_i v_{i+1}.

    ``pendant`` is an optional rainbow edge (x, y, color) with x red and y blue.
    """

    seq: tuple[Vertex, ...]
    phi: tuple[int, ...]
    pendant: tuple[Vertex, Vertex, int] | None
    outside: tuple[Vertex, ...]
    missing: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.seq)

    def v(self, i: int) -> Vertex:
        return self.seq[(i - 1) % len(self.seq)]

    def color(self, i: int) -> int:
        """Color of the cycle edge v_i v_{i+1}."""
        return self.phi[(i - 1) % len(self.seq)]

    def position(self, u: Vertex) -> int | None:
        try:
            return self.seq.index(u) + 1
        except ValueError:
            return None

    @property
    def x(self) -> Vertex | None:
        return self.pendant[0] if self.pendant else None

    @property
    def y(self) -> Vertex | None:
        return self.pendant[1] if self.pendant else None

    def cycle(self) -> RainbowSubgraph:
        return RainbowSubgraph.from_sequence(CYCLE, self.seq, self.phi)

    def kept_colors(self) -> dict[Edge, int]:
        kept = dict(zip(self.cycle().edges, self.phi))
        if self.pendant:
            kept[edge_of(self.pendant[0], self.pendant[1])] = self.pendant[2]
        return kept

    def rotated(self, i: int) -> "LabeledCycleState":
        """Relabel so that the current v_i becomes v_1."""
        t = (i - 1) % len(self.seq)
        return LabeledCycleState(self.seq[t:] + self.seq[:t], self.phi[t:] + self.phi[:t],
                                 self.pendant, self.outside, self.missing)

    def reversed(self) -> "LabeledCycleState":
        """Traverse the cycle the other way, keeping v_1."""
        seq = (self.seq[0],) + tuple(reversed(self.seq[1:]))
        phi = tuple(reversed(self.phi))
        return LabeledCycleState(seq, phi, self.pendant, self.outside, self.missing)

    def orientations(self) -> Iterator["LabeledCycleState"]:
        yield self
        yield self.reversed()


def _make_state(seq: Sequence[Vertex], phi: Sequence[int], pendant, family: BipartiteFamily):
    on = set(seq)
    outside = tuple(v for v in family.vertices() if v not in on)
    used = set(phi) | ({pendant[2]} if pendant else set())
    missing = tuple(c for c in range(1, family.s + 1) if c not in used)
    return LabeledCycleState(tuple(seq), tuple(phi), pendant, outside, missing)


def relabel_to_canonical(sub: RainbowSubgraph, family: BipartiteFamily,
                         pendant: tuple[Edge, int] | None = None,
                         recolor: tuple[int, int] | None = None) -> LabeledCycleState:
    """Index a verified rainbow cycle as v_1 (lowest blue) .. v_L with per-edge colors.

    ``pendant`` is an extra rainbow edge disjoint from the cycle.  ``recolor=(i, c)``
    moves edge v_i v_{i+1} onto the missing color c; this raises
    :class:`MoveUnavailable` if that edge is not in G_c or c is in use.
    """
    if sub.kind != CYCLE:
        raise MoveError("relabel_to_canonical needs a cycle")
    c = canonical(sub)
    seq = c.sequence_unchecked()
    phi = list(c.colors)
    pend = None
    if pendant is not None:
        (j, k), color = pendant
        pend = (Vertex("q", k), Vertex("p", j), color)
        if Vertex("q", k) in seq or Vertex("p", j) in seq:
            raise MoveError("pendant edge meets the cycle")
    state = _make_state(seq, phi, pend, family)
    if recolor is not None:
        state = recolor_edge(state, recolor[0], recolor[1], family)
    return state


def recolor_edge(state: LabeledCycleState, i: int, new_color: int,
                 family: BipartiteFamily) -> LabeledCycleState:
    if new_color not in state.missing:
        raise MoveUnavailable(f"color {new_color} is already used")
    if not family.has_edge(state.v(i), state.v(i + 1), new_color):
        raise MoveUnavailable(f"edge {state.v(i)}{state.v(i + 1)} is not in graph {new_color}")
    phi = list(state.phi)
    phi[(i - 1) % state.length] = new_color
    return _make_state(state.seq, phi, state.pendant, family)


# ---------------------------------------------------------------------------
# assembling candidates
# ---------------------------------------------------------------------------

def _sdr(options: list[list[int]]) -> list[int] | None:
    """Distinct representatives, lowest colors first."""
    order = sorted(range(len(options)), key=lambda t: len(options[t]))
    chosen = [0] * len(options)
    used: set[int] = set()

    def go(idx: int) -> bool:
        if idx == len(order):
            return True
        t = order[idx]
        for c in options[t]:
            if c not in used:
                used.add(c)
                chosen[t] = c
                if go(idx + 1):
                    return True
                used.discard(c)
        return False

    return chosen if go(0) else None


def _assemble(parts: Sequence[tuple[str, Sequence[Vertex]]], kept: dict[Edge, int],
              family: BipartiteFamily, fixed: dict[Edge, int] | None = None
              ) -> list[RainbowSubgraph] | None:
    """Color the edges of ``parts``: fixed colors first, then carried-over colors, then free ones."""
    fixed = fixed or {}
    seen_vertices: set[Vertex] = set()
    plan: list[tuple[str, list[Edge]]] = []
    for kind, seq in parts:
        if len(set(seq)) != len(seq) or seen_vertices & set(seq):
            return None
        seen_vertices |= set(seq)
        try:
            if kind == CYCLE:
                edges = [edge_of(seq[t], seq[(t + 1) % len(seq)]) for t in range(len(seq))]
            else:
                edges = [edge_of(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
        except ValueError:
            return None
        plan.append((kind, edges))
    all_edges = [e for _, es in plan for e in es]
    if len(set(all_edges)) != len(all_edges):
        return None
    color: dict[Edge, int] = {}
    taken: set[int] = set()
    for e in all_edges:
        if e in fixed:
            if fixed[e] in taken or e not in family.edge_sets[fixed[e]]:
                return None
            color[e] = fixed[e]
            taken.add(fixed[e])
    for e in all_edges:
        if e not in color and e in kept and kept[e] not in taken:
            color[e] = kept[e]
            taken.add(kept[e])
    fresh = [e for e in all_edges if e not in color]
    pool_mask = family.color_mask
    options = [[c for c in range(1, family.s + 1)
                if c not in taken and pool_mask.get(e, 0) >> c & 1] for e in fresh]
    if any(not o for o in options):
        return None
    picks = _sdr(options)
    if picks is None:
        return None
    color.update(zip(fresh, picks))
    out = []
    for kind, edges in plan:
        sub = RainbowSubgraph(kind, tuple(edges), tuple(color[e] for e in edges))
        check = verify_rainbow(sub, family)
        if not check:
            raise AssertionError(f"assembled an invalid {kind}: {check.reasons}")
        out.append(sub)
    return out


# ---------------------------------------------------------------------------
# auxiliary digraph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuxiliaryDigraph:
    arcs: frozenset[tuple[Vertex, Vertex]]

    def out_degree(self, v: Vertex) -> int:
        return sum(1 for a, _ in self.arcs if a == v)

    def in_degree(self, v: Vertex) -> int:
        return sum(1 for _, b in self.arcs if b == v)

    def in_neighbors(self, v: Vertex) -> list[Vertex]:
        return sorted(a for a, b in self.arcs if b == v)

    def out_neighbors(self, v: Vertex) -> list[Vertex]:
        return sorted(b for a, b in self.arcs if a == v)

    def has_arc(self, a: Vertex, b: Vertex) -> bool:
        return (a, b) in self.arcs


def build_auxiliary_digraph(state, family: BipartiteFamily) -> AuxiliaryDigraph:
    """Arcs v_i -> u for red cycle vertices v_i and edges v_i u of G_{phi(v_i v_{i+1})}, u != v_{i+1}.

    Only cycle vertices and the pendant's blue end y are admitted as heads.  Given a
    near-perfect rainbow matching instead, arcs run q_i -> p for p q_i in G_{color(p_i q_i)},
    p != p_i.
    """
    if isinstance(state, RainbowSubgraph):
        if state.kind != MATCHING:
            raise MoveError("digraph input must be a cycle state or a matching")
        arcs = set()
        for (j, k), c in zip(state.edges, state.colors):
            for u in family.neighbors(Vertex("q", k), c):
                if u.index != j:
                    arcs.add((Vertex("q", k), u))
        return AuxiliaryDigraph(frozenset(arcs))
    if not isinstance(state, LabeledCycleState):
        raise MoveError("digraph input must be a cycle state or a matching")
    heads = set(state.seq)
    if state.pendant:
        heads.add(state.y)
    arcs = set()
    for i in range(1, state.length + 1):
        vi = state.v(i)
        if vi.is_blue:
            continue
        for u in family.neighbors(vi, state.color(i)):
            if u != state.v(i + 1) and u in heads:
                arcs.add((vi, u))
    return AuxiliaryDigraph(frozenset(arcs))


def _arc_in(digraph: AuxiliaryDigraph, target: Vertex, state: LabeledCycleState) -> set[int]:
    return {state.position(u) for u in digraph.in_neighbors(target) if state.position(u)}


# ---------------------------------------------------------------------------
# Hamiltonian moves
# ---------------------------------------------------------------------------

def _arc(state: LabeledCycleState, i: int, j: int) -> list[Vertex]:
    """Cycle vertices v_i, v_{i+1}, ..., v_j walking forward (inclusive)."""
    L = state.length
    steps = (j - i) % L
    return [state.v(i + t) for t in range(steps + 1)]


def _back(state: LabeledCycleState, i: int, j: int) -> list[Vertex]:
    """Cycle vertices v_i, v_{i-1}, ..., v_j walking backward (inclusive)."""
    L = state.length
    steps = (i - j) % L
    return [state.v(i - t) for t in range(steps + 1)]


def _pendant_variants(state: LabeledCycleState, family: BipartiteFamily) -> Iterator[LabeledCycleState]:
    """The state itself, plus versions where the pendant edge takes a missing color."""
    yield state
    x, y, c = state.pendant
    for m in state.missing:
        if family.has_edge(x, y, m):
            yield _make_state(state.seq, state.phi, (x, y, m), family)


def close_hamiltonian(state: LabeledCycleState, family: BipartiteFamily) -> Move:
    """Turn a (2n-2)-cycle plus a disjoint rainbow edge xy into a rainbow Hamiltonian cycle.

    Patterns, in order: inserting xy into a cycle edge, the in-neighbour-of-y
    reversal, then the two in-degree cases (a Hamiltonian path through xy closed by
    a rotation at a high in-degree vertex, and the v_j-x-y-v_{j+1} crossing).
    """
    n = family.n
    if state.pendant is None or state.length != 2 * n - 2:
        raise MoveError("close_hamiltonian needs a (2n-2)-cycle with a pendant edge")
    if not state.missing:
        return _NOTHING
    for variant in _pendant_variants(state, family):
        for st in variant.orientations():
            for pattern, parts in _closure_candidates(st, family):
                got = _assemble([(CYCLE, parts)], st.kept_colors(), family)
                if got:
                    return Move("hamiltonian", canonical(got[0]), pattern)
            hit = _case_one(st, family)
            if hit:
                return hit
    return _NOTHING


def _closure_candidates(st: LabeledCycleState, family: BipartiteFamily):
    L = st.length
    x, y = st.x, st.y
    h = build_auxiliary_digraph(st, family)
    # xy inserted between consecutive cycle vertices
    for j in range(1, L + 1):
        a, b = st.v(j), st.v(j + 1)
        first, second = (x, y) if a.is_blue else (y, x)
        # v_{j+1} .. v_j around the cycle, then back to v_{j+1} through the pendant
        yield "insert", _arc(st, j + 1, j) + [first, second]
    x_nbrs = {st.position(u) for m in st.missing for u in family.neighbors(x, m) if st.position(u)}
    for i in sorted(_arc_in(h, y, st)):
        for j in sorted(x_nbrs):
            if (j - i) % L in (0, 1):
                continue
            # (v_j, x, y, v_i, v_{i-1}, ..., v_{j+1}, v_{i+1}, ..., v_{j-1})
            seq = [st.v(j), x, y] + _back(st, i, j + 1) + _arc(st, i + 1, j - 1)
            yield "in-neighbour-of-y", seq
    # case 2: v_{j+1} adjacent to y via a missing color, k in I_j and in N^-(v_j)
    for j in range(1, L + 1, 2):
        vj1 = st.v(j + 1)
        if not any(family.has_edge(y, vj1, m) for m in st.missing):
            continue
        i_j = {i for i in range(1, L + 1) if family.has_edge(st.v(i + 1), x, st.color(j))}
        i_minus = _arc_in(h, st.v(j), st)
        for k in sorted(i_j & i_minus):
            if k == j - 1 or k == j:
                continue
            seq = _arc(st, k + 1, j) + _back(st, k, j + 1) + [y, x]
            yield "case-2", seq


def _case_one(st: LabeledCycleState, family: BipartiteFamily) -> Move | None:
    """Pick v_1 among high in-degree blue vertices, route xy through a cycle edge, rotate."""
    L = st.length
    x, y = st.x, st.y
    h = build_auxiliary_digraph(st, family)
    blues = [i for i in range(1, L + 1) if st.v(i).is_blue]
    blues.sort(key=lambda i: (-h.in_degree(st.v(i)), i))
    for w in blues:
        s = st.rotated(w)
        hs = h  # arcs do not depend on the labeling
        x_side = set(family.neighbors(x, s.color(1)))
        y_side = {u for m in s.missing for u in family.neighbors(y, m)}
        for j in range(2, L + 1):
            a, b = s.v(j), s.v(j + 1)
            if not ((a in x_side and b in y_side) or (b in x_side and a in y_side)):
                continue
            sigma, tau = (x, y) if a in x_side and b in y_side else (y, x)
            path_seq = _arc(s, 2, j) + [sigma, tau] + _arc(s, j + 1, L + 1)
            got = _assemble([(PATH, path_seq)], s.kept_colors(), family)
            if not got:
                continue
            path = got[0]
            free = path.missing_colors(family.s)
            v1, v2 = s.v(1), s.v(2)
            i_minus = {s.position(u) for u in hs.in_neighbors(v1) if s.position(u)}
            for c in free:
                i_c = {i for i in range(1, L + 1) if family.has_edge(s.v(i + 1), v2, c)}
                for k in sorted(i_c & i_minus):
                    if k == j or k < 2:
                        continue
                    l = path_seq.index(s.v(k))
                    if path_seq[l + 1] != s.v(k + 1):
                        continue
                    cyc = path_seq[: l + 1] + path_seq[l + 1:][::-1]
                    got2 = _assemble([(CYCLE, cyc)], path.color_of(), family)
                    if got2:
                        return Move("hamiltonian", canonical(got2[0]), "case-1")
    return None


def rotate_path(path: RainbowSubgraph, family: BipartiteFamily) -> Move:
    """Close a rainbow Hamiltonian path, or rotate it into a (2n-2)-cycle plus a pendant edge.

    With the path written u_1 .. u_2n: the closing edge u_2n u_1 gives a Hamiltonian
    cycle; u_2n u_3 gives the cycle u_3 .. u_2n; and a pair of chords u_3 u_{t+1},
    u_2n u_t (t odd) gives the cycle u_3, u_{t+1} .. u_2n, u_t .. u_4.  In the last
    two cases u_1 u_2 keeps its color and becomes the pendant.
    """
    if path.kind != PATH:
        raise MoveError("rotate_path needs a path")
    n = family.n
    seq = path.sequence_unchecked()
    if len(seq) != 2 * n:
        raise MoveError("rotate_path needs a Hamiltonian path")
    if not path.missing_colors(family.s):
        return _NOTHING
    kept = path.color_of()
    for u in (seq, seq[::-1]):
        got = _assemble([(CYCLE, u)], kept, family)
        if got:
            return Move("hamiltonian", canonical(got[0]), "close")
    for u in (seq, seq[::-1]):
        pend = [u[0], u[1]]
        candidates = [("chord-u3", u[2:])]
        for t in range(5, 2 * n - 2, 2):  # 1-based odd t in [5, 2n-3]
            # 0-based: u_t = u[t-1]
            candidates.append(("rotation", [u[2]] + u[t:] + u[t - 1:2:-1]))
        for pattern, cyc in candidates:
            got = _assemble([(CYCLE, cyc), (PATH, pend)], kept, family)
            if got:
                cycle, k2 = got
                red, blue = (pend[0], pend[1]) if not pend[0].is_blue else (pend[1], pend[0])
                state = relabel_to_canonical(cycle, family, pendant=(edge_of(red, blue), k2.colors[0]))
                return Move("state", state, pattern)
    return _NOTHING


def extend_cycle(cycle: RainbowSubgraph, family: BipartiteFamily) -> Move:
    """Grow a rainbow (2n-2)-cycle: pendant edge on the two outside vertices, or a Hamiltonian path.

    The path runs p, b, ..., a, q where a is a cycle neighbour of q, b is next to a
    on the cycle and adjacent to p, both new edges taking missing colors.
    """
    n = family.n
    if cycle.kind != CYCLE or len(cycle) != 2 * n - 2:
        raise MoveError("extend_cycle needs a (2n-2)-cycle")
    st = relabel_to_canonical(cycle, family)
    if len(st.missing) < 1:
        return _NOTHING
    q = next(v for v in st.outside if not v.is_blue)
    p = next(v for v in st.outside if v.is_blue)
    for m in st.missing:
        if family.has_edge(p, q, m):
            return Move("state", _make_state(st.seq, st.phi, (q, p, m), family), "outside-edge")
    kept = st.kept_colors()
    L = st.length
    for m1 in st.missing:
        a_set = [st.position(u) for u in family.neighbors(q, m1) if st.position(u)]
        for a in sorted(a_set):
            for b, walk in ((a + 1, _arc(st, a + 1, a + L)), (a - 1, _back(st, a - 1, a - L))):
                # walk starts at b and ends at a
                if not any(family.has_edge(p, st.v(b), m2) for m2 in st.missing if m2 != m1):
                    continue
                got = _assemble([(PATH, [p] + walk + [q])], kept, family)
                if got:
                    return Move("path", canonical(got[0]), "neighbour-of-a")
    return _NOTHING


# ---------------------------------------------------------------------------
# shortening and fixed-length moves
# ---------------------------------------------------------------------------

def shorten_cycle(state: LabeledCycleState, family: BipartiteFamily) -> Move:
    """From a rainbow Hamiltonian cycle, produce a rainbow (2n-2)-cycle.

    Chords into a blue vertex v_1 of large in-degree give the cycle v_1 .. v_k
    directly (k = 2n-2) or, through v_2 v_{k+3} and v_2 v_{k+5}, cycles of length
    2n-2 and 2n-4; a (2n-4)-cycle with a spare rainbow edge is then repaired by
    splicing outside vertices back in.
    """
    n = family.n
    if state.length != 2 * n or state.pendant is not None:
        raise MoveError("shorten_cycle needs a Hamiltonian cycle state")
    if n < 3:
        return _NOTHING
    h = build_auxiliary_digraph(state, family)
    kept = state.kept_colors()
    L = state.length
    for base in state.orientations():
        blues = [i for i in range(1, L + 1) if base.v(i).is_blue]
        blues.sort(key=lambda i: (-h.in_degree(base.v(i)), i))
        for w in blues:
            s = base.rotated(w)
            ks = sorted((k for k in range(2, L + 1, 2)
                         if family.has_edge(s.v(k), s.v(1), s.color(k))), reverse=True)
            short_candidates = []
            for k in ks:
                if k == L - 2:
                    short_candidates.append(("chord", [s.v(i) for i in range(1, L - 1)], None))
                if k == L - 4:
                    short_candidates.append(("chord-2n-4", [s.v(i) for i in range(1, L - 3)],
                                             [s.v(L - 2), s.v(L - 1)]))
                if k + 3 <= L:
                    cyc = _arc(s, 2, k) + [s.v(1)] + _back(s, L, k + 3)
                    short_candidates.append(("v2-chord+3", cyc, None))
                if k + 5 <= L:
                    cyc = _arc(s, 2, k) + [s.v(1)] + _back(s, L, k + 5)
                    short_candidates.append(("v2-chord+5", cyc, [s.v(k + 2), s.v(k + 3)]))
            for pattern, cyc, pend in short_candidates:
                if pend is None:
                    got = _assemble([(CYCLE, cyc)], kept, family)
                    if got and len(got[0]) == L - 2:
                        return Move("shorter", canonical(got[0]), pattern)
                    continue
                got = _assemble([(CYCLE, cyc), (PATH, pend)], kept, family)
                if not got:
                    continue
                repaired = repair_short_cycle(got[0], got[1], family)
                if repaired is not None:
                    return Move("shorter", repaired, pattern + "/repair")
    return _NOTHING


def wildcard_edges(family: BipartiteFamily, threshold: int) -> list[Edge]:
    """Edges lying in at least ``threshold`` graphs."""
    return sorted(e for e, m in family.color_mask.items() if bin(m).count("1") >= threshold)


def repair_short_cycle(cycle: RainbowSubgraph, k2: RainbowSubgraph,
                       family: BipartiteFamily) -> RainbowSubgraph | None:
    """Turn a rainbow (2n-4)-cycle plus a disjoint rainbow edge into a rainbow (2n-2)-cycle.

    Splices an outside path between consecutive cycle vertices (two vertices, e.g.
    v_j x y v_{j+1}) or in place of one cycle vertex (three vertices, e.g.
    v_j x y z v_{j+2}); new edges take free colors.
    """
    n = family.n
    st = relabel_to_canonical(cycle, family)
    kept = st.kept_colors()
    kept.update(k2.color_of())
    outside = list(st.outside)
    target = 2 * n - 2
    L = st.length
    for paths_len, removed in ((2, 0), (3, 1)):
        for outer in _outside_paths(outside, paths_len, family):
            for j in range(1, L + 1):
                a, b = st.v(j), st.v(j + 1 + removed)
                if outer[0].side == a.side or outer[-1].side == b.side:
                    continue
                seq = _arc(st, j + 1 + removed, j) + list(outer)
                if len(seq) != target:
                    continue
                got = _assemble([(CYCLE, seq)], kept, family)
                if got:
                    return canonical(got[0])
    return None


def _outside_paths(outside: Sequence[Vertex], size: int, family: BipartiteFamily):
    from itertools import permutations
    for combo in permutations(outside, size):
        if all(combo[t].side != combo[t + 1].side and family.colors_of(combo[t], combo[t + 1])
               for t in range(size - 1)):
            yield combo


def _cycle_state_with_outside(state: LabeledCycleState) -> tuple[Vertex, Vertex]:
    reds = [v for v in state.outside if not v.is_blue]
    blues = [v for v in state.outside if v.is_blue]
    if len(reds) != 1 or len(blues) != 1:
        raise MoveError("state must leave exactly one red and one blue vertex outside")
    return reds[0], blues[0]


def find_cycle_by_shift_sets(state: LabeledCycleState, family: BipartiteFamily, length: int) -> Move:
    """Rainbow cycle of ``length`` vertices from a (2n-2)-cycle and outside vertices x (red), y (blue).

    A = cycle positions joined to x in one missing color.  A partner of x at offset
    +-(length-2) (the set B) closes x v_a .. v_b; a partner of y at offset +-(length-3)
    (the set B') closes x v_a .. v_b y using the edge xy.
    """
    n = family.n
    L = 2 * n - 2
    if length % 2 or not 4 <= length <= 2 * n - 4:
        raise MoveError(f"length must be even in [4, {2 * n - 4}]")
    if state.length != L:
        raise MoveError("find_cycle_by_shift_sets needs a (2n-2)-cycle state")
    x, y = _cycle_state_with_outside(state)
    kept = state.kept_colors()
    for m1 in state.missing:
        for m2 in state.missing:
            if m1 == m2:
                continue
            for owner in (x, y):
                a_set = CyclicSet.of(L, [state.position(u) - 1 for u in family.neighbors(owner, m1)
                                         if state.position(u)])
                b_set = symmetric_shift_union(a_set, length - 2)
                partners = {state.position(u) - 1 for u in family.neighbors(owner, m2) if state.position(u)}
                for b in sorted(b_set.members & partners):
                    for a in ((b - (length - 2)) % L, (b + (length - 2)) % L):
                        if a not in a_set.members:
                            continue
                        seg = _walk(state, a, b, length - 1)
                        got = _assemble([(CYCLE, [owner] + seg)], kept, family,
                                        fixed={edge_of(owner, state.v(a + 1)): m1,
                                               edge_of(owner, state.v(b + 1)): m2})
                        if got:
                            return Move("found", canonical(got[0]), "shift-set-B")
            a_set = CyclicSet.of(L, [state.position(u) - 1 for u in family.neighbors(x, m1)
                                     if state.position(u)])
            b_prime = symmetric_shift_union(a_set, length - 3)
            partners = {state.position(u) - 1 for u in family.neighbors(y, m2) if state.position(u)}
            for b in sorted(b_prime.members & partners):
                for a in ((b - (length - 3)) % L, (b + (length - 3)) % L):
                    if a not in a_set.members:
                        continue
                    seg = _walk(state, a, b, length - 2)
                    got = _assemble([(CYCLE, [x] + seg + [y])], kept, family,
                                    fixed={edge_of(x, state.v(a + 1)): m1,
                                           edge_of(y, state.v(b + 1)): m2})
                    if got:
                        return Move("found", canonical(got[0]), "shift-set-B'+xy")
    return _NOTHING


def _walk(state: LabeledCycleState, a: int, b: int, count: int) -> list[Vertex]:
    """``count`` consecutive cycle vertices from 0-based position a to b, in whichever direction fits."""
    L = state.length
    if (b - a) % L == count - 1:
        return [state.seq[(a + t) % L] for t in range(count)]
    return [state.seq[(a - t) % L] for t in range(count)]


def bondy_pairing_moves(state: LabeledCycleState, family: BipartiteFamily,
                        length: int, j: int) -> list[RainbowSubgraph]:
    """All cycles of ``length`` vertices obtained from the chord pairings at the cycle edge v_j v_{j+1}.

    For each k of parity opposite to j (k != j+1), v_j v_k is paired with
    v_{j+1} v_{k-length+3}, or with v_{j+1} v_{k-length+1} when j lies in
    {k-length+3, ..., k-1}.  A pair whose chords lie in two distinct missing
    graphs yields a cycle; every returned cycle is verified.
    """
    L = state.length
    if length % 2 or not 4 <= length <= L:
        raise MoveError(f"length must be even in [4, {L}]")
    if not 1 <= j <= L:
        raise MoveError(f"j must be in [1, {L}]")
    kept = state.kept_colors()
    out: list[RainbowSubgraph] = []
    seen = set()
    for k in range(1, L + 1):
        if (k - j) % 2 == 0 or k == (j % L) + 1:
            continue
        d = (k - j) % L
        if 1 <= d <= length - 3:
            other = k - length + 1
            # v_j, v_{j-1}, ..., v_{k-l+1}, v_{j+1}, ..., v_k
            seq = _back(state, j, other) + _arc(state, j + 1, k)
        else:
            other = k - length + 3
            # v_j, v_k, v_{k-1}, ..., v_{k-l+3}, v_{j+1}
            seq = [state.v(j)] + _back(state, k, other) + [state.v(j + 1)]
        if len(seq) != length:
            continue
        chord_a = (state.v(j), state.v(k))
        chord_b = (state.v(j + 1), state.v(other))
        hit = _pair_cycle(state, family, seq, chord_a, chord_b, kept)
        if hit is not None and (hit.edges, hit.colors) not in seen:
            seen.add((hit.edges, hit.colors))
            out.append(hit)
    return out


def _pair_cycle(state, family, seq, chord_a, chord_b, kept) -> RainbowSubgraph | None:
    for m1 in state.missing:
        for m2 in state.missing:
            if m1 == m2 or not family.has_edge(*chord_a, m1) or not family.has_edge(*chord_b, m2):
                continue
            fixed = {edge_of(*chord_a): m1, edge_of(*chord_b): m2}
            got = _assemble([(CYCLE, seq)], kept, family, fixed=fixed)
            if got:
                return canonical(got[0])
    return None


# ---------------------------------------------------------------------------
# perfect matchings
# ---------------------------------------------------------------------------

def pm_swap(matching: RainbowSubgraph, family: BipartiteFamily) -> Move:
    """Complete a rainbow matching of n-1 edges to a rainbow perfect matching.

    Patterns, in order: the direct edge p_n q_n; one swap through an arc q_i -> p_n;
    the two-swap through i, j, k of the even/odd-case-1 argument; and the
    alternating p_n q_j, p_j q_k, p_k q_n exchange of odd case 2.
    """
    n = family.n
    if matching.kind != MATCHING or len(matching) != n - 1:
        raise MoveError("pm_swap needs a rainbow matching with n-1 edges")
    return _pm_augment(matching, family)


def _pm_augment(matching: RainbowSubgraph, family: BipartiteFamily) -> Move:
    edges = list(matching.edges)
    colors = list(matching.colors)
    used_b = {j for j, _ in edges}
    used_r = {k for _, k in edges}
    free_b = [j for j in range(1, family.n + 1) if j not in used_b]
    free_r = [k for k in range(1, family.n + 1) if k not in used_r]
    missing = matching.missing_colors(family.s)
    es = family.edge_sets
    m = len(edges)

    def done(new_edges, new_colors, pattern):
        sub = canonical(RainbowSubgraph(MATCHING, tuple(new_edges), tuple(new_colors)))
        check = verify_rainbow(sub, family)
        if not check:
            raise AssertionError(f"pm_swap built an invalid matching: {check.reasons}")
        return Move("found", sub, pattern)

    for pn in free_b:
        for qn in free_r:
            for cn in missing:
                # direct
                if (pn, qn) in es[cn]:
                    return done(edges + [(pn, qn)], colors + [cn], "direct")
                # one swap: q_i -> p_n arc and p_i q_n in G_cn
                for i in range(m):
                    pi, qi = edges[i]
                    ci = colors[i]
                    if (pn, qi) in es[ci] and (pi, qn) in es[cn]:
                        ne = edges[:i] + edges[i + 1:] + [(pn, qi), (pi, qn)]
                        nc = colors[:i] + colors[i + 1:] + [ci, cn]
                        return done(ne, nc, "one-swap")
                    if (pi, qn) in es[ci] and (pn, qi) in es[cn]:
                        ne = edges[:i] + edges[i + 1:] + [(pn, qi), (pi, qn)]
                        nc = colors[:i] + colors[i + 1:] + [cn, ci]
                        return done(ne, nc, "one-swap")
    for pn in free_b:
        for qn in free_r:
            for cn in missing:
                # two swaps: q_j p_n in G_ci, p_j q_n in G_cn, arc q_k -> p_i, p_k q_i in G_cj
                for i in range(m):
                    pi, qi = edges[i]
                    for jj in range(m):
                        if jj == i:
                            continue
                        pj, qj = edges[jj]
                        if (pn, qj) not in es[colors[i]] or (pj, qn) not in es[cn]:
                            continue
                        for k in range(m):
                            if k in (i, jj):
                                continue
                            pk, qk = edges[k]
                            if (pi, qk) in es[colors[k]] and (pk, qi) in es[colors[jj]]:
                                rest = [t for t in range(m) if t not in (i, jj, k)]
                                ne = [edges[t] for t in rest] + [(pn, qj), (pj, qn), (pi, qk), (pk, qi)]
                                nc = [colors[t] for t in rest] + [colors[i], cn, colors[k], colors[jj]]
                                return done(ne, nc, "two-swap")
                # odd case 2: p_n q_j in G_cn, arc q_k -> p_j, p_k q_n in G_cj
                for jj in range(m):
                    pj, qj = edges[jj]
                    if (pn, qj) not in es[cn]:
                        continue
                    for k in range(m):
                        if k == jj:
                            continue
                        pk, qk = edges[k]
                        if (pj, qk) in es[colors[k]] and (pk, qn) in es[colors[jj]]:
                            rest = [t for t in range(m) if t not in (jj, k)]
                            ne = [edges[t] for t in rest] + [(pn, qj), (pj, qk), (pk, qn)]
                            nc = [colors[t] for t in rest] + [cn, colors[k], colors[jj]]
                            return done(ne, nc, "path-swap")
    return _NOTHING


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

class RoleError(ValueError):
    """The family cannot host the requested target (too few graphs, n too small)."""


class Target(NamedTuple):
    kind: str  # "ham", "cycle" or "pm"
    length: int = 0

    def __str__(self) -> str:
        return f"cycle:{self.length}" if self.kind == "cycle" else self.kind


def parse_target(text: str, n: int | None = None) -> Target:
    if text in ("ham", "hamiltonian"):
        return Target("ham", 2 * n if n else 0)
    if text in ("pm", "perfect_matching"):
        return Target("pm")
    if text.startswith("cycle:"):
        return Target("cycle", int(text.split(":", 1)[1]))
    raise ValueError(f"unknown target {text!r}")


@dataclass
class SolveResult:
    outcome: str  # found / none / budget_exhausted / no_move
    witness: RainbowSubgraph | None
    via: str  # "moves", "oracle" or ""
    stats: Counter = field(default_factory=Counter)
    stall: str | None = None
    seconds: float = 0.0
    states: list = field(default_factory=list)  # cycle states the moves passed through


class _Stats:
    def __init__(self):
        self.counts: Counter = Counter()
        self.states: list[LabeledCycleState] = []

    def record(self, name: str, move: Move | None = None, fired: bool | None = None) -> None:
        self.counts[f"{name}.tried"] += 1
        if move is not None and isinstance(move.value, LabeledCycleState):
            self.states.append(move.value)
        if (move is not None and move.fired) or fired:
            self.counts[f"{name}.fired"] += 1
            if move is not None and move.pattern:
                self.counts[f"{name}.{move.pattern}"] += 1


def greedy_rainbow_path(family: BipartiteFamily, start: Vertex,
                        max_rotations: int | None = None) -> RainbowSubgraph | None:
    """Rainbow path grown from ``start``; when stuck, Posa-rotate the far end (lowest index first)."""
    n = family.n
    max_rotations = 4 * n * n if max_rotations is None else max_rotations
    seq = [start]
    cols: list[int] = []
    used: set[int] = set()
    free = lambda: [c for c in range(1, family.s + 1) if c not in used]  # noqa: E731

    def extension(path_set):
        end = seq[-1]
        for c in free():
            for u in family.neighbors(end, c):
                if u not in path_set:
                    return u, c
        return None

    rotations = 0
    flipped = False
    seen = set()
    while len(seq) < 2 * n:
        ext = extension(set(seq))
        if ext:
            seq.append(ext[0])
            cols.append(ext[1])
            used.add(ext[1])
            continue
        end = seq[-1]
        rotated = False
        for i in range(len(seq) - 3, -1, -1):
            u = seq[i]
            if u.side == end.side or rotations >= max_rotations:
                continue
            options = [cols[i]] + free()
            c = next((c for c in options if family.has_edge(u, end, c)), None)
            if c is None:
                continue
            new_seq = seq[: i + 1] + seq[i + 1:][::-1]
            key = tuple(new_seq)
            if key in seen:
                continue
            new_cols = cols[:i] + [c] + cols[i + 1:][::-1]
            seen.add(key)
            rotations += 1
            seq, cols = new_seq, new_cols
            used = set(cols)
            rotated = True
            break
        if not rotated:
            if flipped or len(seq) < 2:
                break
            seq.reverse()
            cols.reverse()
            flipped = True
    if len(seq) < 2:
        return None
    return RainbowSubgraph.from_sequence(PATH, seq, cols)


def _hamiltonian_by_moves(family: BipartiteFamily, rng: SplitMix64, stats: _Stats,
                          attempts: int = 4) -> tuple[RainbowSubgraph | None, str | None]:
    n = family.n
    verts = family.vertices()
    stall = "no rainbow path"
    for attempt in range(attempts):
        start = verts[0] if attempt == 0 else verts[rng.below(len(verts))]
        path = greedy_rainbow_path(family, start)
        stats.record("greedy-path", fired=path is not None and len(path) == 2 * n - 1)
        if path is None:
            continue
        if len(path) == 2 * n - 3:
            # a (2n-2)-vertex path that closes up feeds the cycle-extension move
            seq = path.sequence_unchecked()
            got = _assemble([(CYCLE, seq)], path.color_of(), family)
            if not got:
                stall = f"path on {len(path) + 1}/{2 * n} vertices"
                continue
            mv = extend_cycle(got[0], family)
            stats.record("extend_cycle", mv)
            if mv.outcome == "state":
                mv2 = close_hamiltonian(mv.value, family)
                stats.record("close_hamiltonian", mv2)
                if mv2.fired:
                    return mv2.value, None
                stall = "close_hamiltonian"
                continue
            if mv.outcome != "path":
                stall = "extend_cycle"
                continue
            path = mv.value
        if len(path) != 2 * n - 1:
            stall = f"path on {len(path) + 1}/{2 * n} vertices"
            continue
        mv = rotate_path(path, family)
        stats.record("rotate_path", mv)
        if mv.outcome == "hamiltonian":
            return mv.value, None
        if mv.outcome != "state":
            stall = "rotate_path"
            continue
        mv2 = close_hamiltonian(mv.value, family)
        stats.record("close_hamiltonian", mv2)
        if mv2.fired:
            return mv2.value, None
        stall = "close_hamiltonian"
    return None, stall


def _cycle_by_moves(family: BipartiteFamily, length: int, rng: SplitMix64,
                    stats: _Stats) -> tuple[RainbowSubgraph | None, str | None]:
    n = family.n
    ham, stall = _hamiltonian_by_moves(family, rng, stats)
    if ham is None or length == 2 * n:
        return ham, stall
    mv = shorten_cycle(relabel_to_canonical(ham, family), family)
    stats.record("shorten_cycle", mv)
    if not mv.fired:
        return None, "shorten_cycle"
    c2 = mv.value
    if length == 2 * n - 2:
        return c2, None
    base = relabel_to_canonical(c2, family)
    variants = [base]
    for i in range(1, base.length + 1):
        for c in base.missing:
            try:
                variants.append(recolor_edge(base, i, c, family))
            except MoveUnavailable:
                pass
    for st in variants:
        if length <= 2 * n - 4:
            mv = find_cycle_by_shift_sets(st, family, length)
            stats.record("find_cycle_by_shift_sets", mv)
            if mv.fired:
                return mv.value, None
        for j in range(1, st.length + 1):
            out = bondy_pairing_moves(st, family, length, j)
            stats.record("bondy_pairing_moves", fired=bool(out))
            if out:
                return out[0], None
    return None, "shift sets and pairings"


def greedy_rainbow_matching(family: BipartiteFamily, color_order: Iterable[int]) -> RainbowSubgraph | None:
    """One edge per color in the given order, lowest free edge first."""
    edges, colors = [], []
    used_b, used_r = set(), set()
    for c in color_order:
        if len(edges) == family.n:
            break
        for j, k in family.graphs[c - 1]:
            if j not in used_b and k not in used_r:
                edges.append((j, k))
                colors.append(c)
                used_b.add(j)
                used_r.add(k)
                break
    if not edges:
        return None
    return RainbowSubgraph(MATCHING, tuple(edges), tuple(colors))


def _matching_by_moves(family: BipartiteFamily, rng: SplitMix64, stats: _Stats,
                       attempts: int = 4) -> tuple[RainbowSubgraph | None, str | None]:
    n = family.n
    stall = "no rainbow edge"
    for attempt in range(attempts):
        order = list(range(1, family.s + 1))
        if attempt:
            rng.shuffle(order)
        m = greedy_rainbow_matching(family, order)
        stats.record("greedy-matching", fired=m is not None and len(m) == n)
        if m is None:
            continue
        while len(m) < n:
            mv = pm_swap(m, family) if len(m) == n - 1 else _pm_augment(m, family)
            stats.record("pm_swap" if len(m) == n - 1 else "pm_augment", mv)
            if not mv.fired:
                stall = f"matching with {len(m)}/{n} edges"
                break
            m = mv.value
        else:
            return canonical(m), None
    return None, stall


def check_role(family: BipartiteFamily, target: Target) -> None:
    family.require_well_formed()
    n = family.n
    if target.kind == "pm":
        if family.s < n:
            raise RoleError(f"perfect matching needs >= {n} graphs, family has {family.s}")
        return
    length = 2 * n if target.kind == "ham" else target.length
    if n < 2:
        raise RoleError("cycle targets need n >= 2")
    if length % 2 or not 4 <= length <= 2 * n:
        raise RoleError(f"cycle length must be even in [4, {2 * n}], got {length}")
    if family.s < length:
        raise RoleError(f"a rainbow {length}-cycle needs >= {length} graphs, family has {family.s}")


def solve(family: BipartiteFamily, target: Target | str, budget: oracle.SearchBudget = oracle.UNLIMITED,
          fallback: bool = True, seed: int = 0) -> SolveResult:
    """Moves first; on a stall defer to the exact oracle (``fallback``) or report the stall."""
    if isinstance(target, str):
        target = parse_target(target, family.n)
    if target.kind == "ham":
        target = Target("ham", 2 * family.n)
    check_role(family, target)
    t0 = time.perf_counter()
    stats = _Stats()
    rng = SplitMix64(seed)
    if target.kind == "pm":
        witness, stall = _matching_by_moves(family, rng, stats)
    elif target.kind == "ham" or target.length == 2 * family.n:
        witness, stall = _hamiltonian_by_moves(family, rng, stats)
    else:
        witness, stall = _cycle_by_moves(family, target.length, rng, stats)
    if witness is not None:
        check = verify_rainbow(witness, family)
        if not check:
            raise AssertionError(f"solver produced an invalid witness: {check.reasons}")
        return SolveResult(oracle.FOUND, witness, "moves", stats.counts, None,
                           time.perf_counter() - t0, stats.states)
    stats.counts["stalls"] += 1
    if not fallback:
        return SolveResult(NO_MOVE, None, "", stats.counts, stall, time.perf_counter() - t0,
                           stats.states)
    if target.kind == "pm":
        res = oracle.find_rainbow_perfect_matching(family, budget)
    else:
        res = oracle.find_rainbow_cycle(family, target.length or 2 * family.n, budget)
    stats.counts["oracle.nodes"] += res.nodes
    return SolveResult(res.status, res.witness, "oracle", stats.counts, stall,
                       time.perf_counter() - t0, stats.states)

"""Exact backtracking search for rainbow cycles, paths and perfect matchings.

The search extends an alternating vertex sequence over the union graph and
keeps, for the edges chosen so far, a maximum matching edges -> colors
(a system of distinct representatives).  An extension whose new edge cannot
be matched is pruned; that prune is exact because more edges never make an
SDR easier to find.  A ``none`` answer is therefore a proof of non-existence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import (CYCLE, MATCHING, PATH, BipartiteFamily, RainbowSubgraph, Vertex,
                   canonical, verify_rainbow)

FOUND = "found"
NONE = "none"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    time_limit: float | None = None  # seconds

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes < 0:
            raise ValueError("max_nodes must be nonnegative")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be nonnegative")


UNLIMITED = SearchBudget()


@dataclass(frozen=True)
class SearchResult:
    status: str
    witness: RainbowSubgraph | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _Exhausted(Exception):
    pass


class _Search:
    """Shared state: vertex ids are 0..n-1 for p_1..p_n and n..2n-1 for q_1..q_n."""

    def __init__(self, family: BipartiteFamily, budget: SearchBudget):
        family.require_well_formed()
        self.family = family
        self.n = n = family.n
        self.s = family.s
        self.budget = budget
        self.nodes = 0
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        masks = family.color_mask
        # cmask[u][v]: colors of the edge between ids u and v (0 if absent or same side)
        self.cmask = [[0] * (2 * n) for _ in range(2 * n)]
        self.adj = [0] * (2 * n)
        for (j, k), m in masks.items():
            u, v = j - 1, n + k - 1
            self.cmask[u][v] = self.cmask[v][u] = m
            self.adj[u] |= 1 << v
            self.adj[v] |= 1 << u
        # color-matching state
        self.owner = [-1] * (self.s + 1)  # color -> edge slot
        self.assign: list[int] = []  # edge slot -> color
        self.emask: list[int] = []  # edge slot -> allowed colors

    def tick(self):
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _Exhausted
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Exhausted

    def vertex(self, u: int) -> Vertex:
        return Vertex("p", u + 1) if u < self.n else Vertex("q", u - self.n + 1)

    # --- incremental SDR -------------------------------------------------
    def _augment(self, slot: int, seen: set) -> bool:
        m = self.emask[slot]
        for c in range(1, self.s + 1):
            if m >> c & 1 and c not in seen:
                seen.add(c)
                if self.owner[c] < 0 or self._augment(self.owner[c], seen):
                    self.owner[c] = slot
                    self.assign[slot] = c
                    return True
        return False

    def push_edge(self, mask: int):
        """Add an edge; return an undo token, or None if the colors cannot be matched."""
        snapshot = (self.owner[:], self.assign[:])
        self.emask.append(mask)
        self.assign.append(0)
        if self._augment(len(self.emask) - 1, set()):
            return snapshot
        self.emask.pop()
        self.owner, self.assign = snapshot
        return None

    def pop_edge(self, token):
        self.emask.pop()
        self.owner, self.assign = token


def _check_cycle_length(family: BipartiteFamily, length: int):
    if length % 2 or not 4 <= length <= 2 * family.n:
        raise ValueError(f"cycle length must be even in [4, {2 * family.n}], got {length}")


def _cycle_search(st: _Search, length: int):
    """Yield (vertex ids, colors) for rainbow cycles, each vertex cycle in one orientation only."""
    n = st.n
    hamiltonian = length == 2 * n
    seq: list[int] = []

    def feasible(used: int, cur: int, start: int) -> bool:
        if not hamiltonian:
            return True
        avail = ~used | (1 << cur) | (1 << start)
        rest = ~used & ((1 << (2 * n)) - 1)
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            if bin(st.adj[u] & avail & ~(1 << u)).count("1") < 2:
                return False
        return True

    def extend(used: int, allowed: int):
        cur = seq[-1]
        if len(seq) == length:
            m = st.cmask[cur][seq[0]]
            # orientation: the red vertex after the start must be the smaller red neighbour
            if m and seq[1] < cur:
                st.tick()
                tok = st.push_edge(m)
                if tok is not None:
                    yield list(seq), list(st.assign)
                    st.pop_edge(tok)
            return
        cand = st.adj[cur] & ~used & allowed
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            st.tick()
            tok = st.push_edge(st.cmask[cur][v])
            if tok is None:
                continue
            seq.append(v)
            nused = used | low
            if feasible(nused, v, seq[0]):
                yield from extend(nused, allowed)
            seq.pop()
            st.pop_edge(tok)

    full = (1 << (2 * n)) - 1
    for start in range(n):
        # the start is the lowest-index blue vertex of the cycle
        allowed = full & ~((1 << start) - 1)
        seq.append(start)
        yield from extend(1 << start, allowed)
        seq.pop()
        if hamiltonian:
            break


def find_rainbow_cycle(family: BipartiteFamily, length: int,
                       budget: SearchBudget = UNLIMITED) -> SearchResult:
    """Rainbow cycle on exactly ``length`` vertices, or a sound ``none``."""
    _check_cycle_length(family, length)
    if family.s < length:
        family.require_well_formed()
        return SearchResult(NONE)
    st = _Search(family, budget)
    return _finish(family, _collect_first(st, _cycle_search(st, length), CYCLE))


def _collect_first(st: _Search, gen, kind: str) -> SearchResult:
    try:
        for ids, colors in gen:
            seq = [st.vertex(u) for u in ids]
            sub = canonical(RainbowSubgraph.from_sequence(kind, seq, colors))
            return SearchResult(FOUND, sub, st.nodes)
    except _Exhausted:
        return SearchResult(BUDGET_EXHAUSTED, None, st.nodes)
    return SearchResult(NONE, None, st.nodes)


def _finish(family, result: SearchResult) -> SearchResult:
    if result.witness is not None:
        check = verify_rainbow(result.witness, family)
        if not check:
            raise AssertionError(f"oracle produced an invalid witness: {check.reasons}")
    return result


def find_rainbow_hamiltonian(family: BipartiteFamily, budget: SearchBudget = UNLIMITED) -> SearchResult:
    if family.n < 2:
        family.require_well_formed()
        return SearchResult(NONE)
    return find_rainbow_cycle(family, 2 * family.n, budget)


def _path_search(st: _Search):
    n = st.n
    total = 2 * n
    seq: list[int] = []

    def vkey(u):
        return st.vertex(u)

    def extend(used: int):
        cur = seq[-1]
        if len(seq) == total:
            if vkey(seq[0]) < vkey(cur):
                yield list(seq), list(st.assign)
            return
        rest = ~used & ((1 << total) - 1)
        avail = rest | (1 << cur)
        r = rest
        while r:
            low = r & -r
            r ^= low
            if not st.adj[low.bit_length() - 1] & avail:
                return
        cand = st.adj[cur] & ~used
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            st.tick()
            tok = st.push_edge(st.cmask[cur][v])
            if tok is None:
                continue
            seq.append(v)
            yield from extend(used | low)
            seq.pop()
            st.pop_edge(tok)

    for start in sorted(range(total), key=vkey):
        seq.append(start)
        yield from extend(1 << start)
        seq.pop()


def find_rainbow_hamiltonian_path(family: BipartiteFamily, budget: SearchBudget = UNLIMITED) -> SearchResult:
    """Path through all 2n vertices whose 2n-1 edges carry distinct colors."""
    family.require_well_formed()
    if family.s < 2 * family.n - 1:
        return SearchResult(NONE)
    st = _Search(family, budget)
    return _finish(family, _collect_first(st, _path_search(st), PATH))


def _matching_search(st: _Search):
    n = st.n
    reds_full = ((1 << n) - 1) << n
    chosen: list[int] = []

    def extend(j: int, used_red: int):
        if j == n:
            yield [(b, r) for b, r in enumerate(chosen)], list(st.assign)
            return
        free = reds_full & ~used_red
        for b in range(j, n):
            if not st.adj[b] & free:
                return
        cand = st.adj[j] & free
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            st.tick()
            tok = st.push_edge(st.cmask[j][v])
            if tok is None:
                continue
            chosen.append(v)
            yield from extend(j + 1, used_red | low)
            chosen.pop()
            st.pop_edge(tok)

    yield from extend(0, 0)


def find_rainbow_perfect_matching(family: BipartiteFamily, budget: SearchBudget = UNLIMITED) -> SearchResult:
    """n disjoint edges with distinct colors (one edge per graph when s == n)."""
    family.require_well_formed()
    n = family.n
    if family.s < n:
        return SearchResult(NONE)
    st = _Search(family, budget)
    try:
        for pairs, colors in _matching_search(st):
            edges = tuple((b + 1, r - n + 1) for b, r in pairs)
            sub = canonical(RainbowSubgraph(MATCHING, edges, tuple(colors)))
            return _finish(family, SearchResult(FOUND, sub, st.nodes))
    except _Exhausted:
        return SearchResult(BUDGET_EXHAUSTED, None, st.nodes)
    return SearchResult(NONE, None, st.nodes)


def _count_sdrs(masks: list[int], s: int, cap: int) -> int:
    """Number of injective color choices, one allowed color per edge (DP over used colors)."""
    ways = {0: 1}
    for m in masks:
        nxt: dict[int, int] = {}
        for used, w in ways.items():
            free = m & ~used
            while free:
                low = free & -free
                free ^= low
                key = used | low
                nxt[key] = min(cap, nxt.get(key, 0) + w)
        ways = nxt
        if not ways:
            return 0
    return min(cap, sum(ways.values()))


def count_rainbow_cycles(family: BipartiteFamily, length: int, cap: int) -> int:
    """Number of (cycle, coloring) pairs, cycles taken up to rotation and reflection, capped."""
    _check_cycle_length(family, length)
    family.require_well_formed()
    if family.s < length:
        return 0
    st = _Search(family, UNLIMITED)
    total = 0
    for ids, _colors in _cycle_search(st, length):
        masks = [st.cmask[ids[t]][ids[(t + 1) % length]] for t in range(length)]
        total += _count_sdrs(masks, family.s, cap)
        if total >= cap:
            return cap
    return total

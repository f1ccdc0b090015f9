"""Seeded random families at (or one edge below) the degree thresholds.

Randomness comes from SplitMix64, a fixed 64-bit generator defined by its
output sequence, so families are reproducible across languages:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)                     (all arithmetic mod 2**64)

From seed 1234567 the first outputs are 6457827717110365317,
3203168211198807973, 9817491932198370423.  Shuffles are Fisher-Yates from
the last position down, drawing ``next() % (i + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BipartiteFamily, Edge, degree_thresholds

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, k: int) -> int:
        return self.next() % k

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            r = self.below(i + 1)
            items[i], items[r] = items[r], items[i]
        return items


def derive_seed(master: int, index: int) -> int:
    """Per-trial seed: ``mix64(master ^ (index * GOLDEN_GAMMA))``."""
    return mix64((master & MASK64) ^ ((index * GOLDEN_GAMMA) & MASK64))


@dataclass(frozen=True)
class GenSpec:
    n: int
    graph_count: int
    slack: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("GenSpec needs n >= 2")
        if self.graph_count < 1:
            raise ValueError("graph_count must be >= 1")
        if self.slack < 0:
            raise ValueError("slack must be >= 0")


def _thin(n: int, rng: SplitMix64, red_floor: int, blue_floor: int) -> list[Edge]:
    edges = [(j, k) for j in range(1, n + 1) for k in range(1, n + 1)]
    blue_deg = [n] * (n + 1)
    red_deg = [n] * (n + 1)
    keep = set(edges)
    for j, k in rng.shuffle(list(edges)):
        if blue_deg[j] > blue_floor and red_deg[k] > red_floor:
            keep.discard((j, k))
            blue_deg[j] -= 1
            red_deg[k] -= 1
    return sorted(keep)


def random_valid_family(spec: GenSpec) -> BipartiteFamily:
    """Thin each complete graph in random order while both endpoints stay above threshold + slack."""
    red_min, blue_min = degree_thresholds(spec.n)
    rng = SplitMix64(spec.seed)
    red_floor = min(spec.n, red_min + spec.slack)
    blue_floor = min(spec.n, blue_min + spec.slack)
    graphs = [_thin(spec.n, rng, red_floor, blue_floor) for _ in range(spec.graph_count)]
    return BipartiteFamily.from_edge_sets(spec.n, graphs)


def random_near_miss_family(spec: GenSpec) -> BipartiteFamily:
    """A threshold-tight family with exactly one vertex in one graph one edge short."""
    if spec.n < 3:
        raise ValueError("near-miss families need n >= 3")
    n = spec.n
    red_min, blue_min = degree_thresholds(n)
    rng = SplitMix64(spec.seed)
    graphs = [_thin(n, rng, red_min, blue_min) for _ in range(spec.graph_count)]
    order = rng.shuffle(list(range(spec.graph_count)))

    def degrees(g):
        bd, rd = [0] * (n + 1), [0] * (n + 1)
        for j, k in g:
            bd[j] += 1
            rd[k] += 1
        return bd, rd

    # prefer deleting an edge whose other endpoint has a spare edge
    for gi in order:
        g = graphs[gi]
        bd, rd = degrees(g)
        for j, k in rng.shuffle(list(g)):
            blue_tight, red_tight = bd[j] == blue_min, rd[k] == red_min
            if blue_tight != red_tight:
                graphs[gi] = [e for e in g if e != (j, k)]
                return BipartiteFamily.from_edge_sets(n, graphs)

    # every edge joins two tight vertices: delete p_j q_k and give q_k a new blue neighbour
    gi = order[0]
    g = graphs[gi]
    j, k = rng.shuffle(list(g))[0]
    present = set(g)
    w = next(b for b in range(1, n + 1) if b != j and (b, k) not in present)
    graphs[gi] = sorted((present - {(j, k)}) | {(w, k)})
    return BipartiteFamily.from_edge_sets(n, graphs)

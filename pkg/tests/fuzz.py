"""Seeded random solver inputs: a rainbow structure first, then a family that contains it."""

from transversal.core import MATCHING, PATH, BipartiteFamily, RainbowSubgraph, Vertex, edge_of
from transversal.generators import SplitMix64
from transversal.solver import _make_state


def _family_around(n, s, required, rng, density):
    graphs = []
    for c in range(1, s + 1):
        g = {(j, k) for j in range(1, n + 1) for k in range(1, n + 1) if rng.below(1000) < density * 1000}
        g |= {e for e, col in required if col == c}
        graphs.append(sorted(g))
    return BipartiteFamily.from_edge_sets(n, graphs)


def _alternating(n, size, rng):
    blues = rng.shuffle(list(range(1, n + 1)))
    reds = rng.shuffle(list(range(1, n + 1)))
    seq = []
    for t in range(size):
        seq.append(Vertex("p", blues[t // 2]) if t % 2 == 0 else Vertex("q", reds[t // 2]))
    return seq


def cycle_state(seed, n=None, pendant=True):
    """A (2n-2)-cycle state, with a pendant edge on the two outside vertices if asked."""
    rng = SplitMix64(seed)
    n = n or 3 + rng.below(3)
    s = 2 * n
    seq = _alternating(n, 2 * n, rng)
    cyc, rest = seq[: 2 * n - 2], seq[2 * n - 2:]
    colors = rng.shuffle(list(range(1, s + 1)))
    edges = [edge_of(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc))]
    required = list(zip(edges, colors))
    pend = None
    if pendant:
        y, x = rest
        required.append((edge_of(x, y), colors[len(cyc)]))
        pend = (x, y, colors[len(cyc)])
    family = _family_around(n, s, required, rng, rng.below(7) / 10)
    return _make_state(cyc, colors[: len(cyc)], pend, family), family


def hamiltonian_state(seed, n=None):
    rng = SplitMix64(seed)
    n = n or 3 + rng.below(3)
    seq = _alternating(n, 2 * n, rng)
    colors = rng.shuffle(list(range(1, 2 * n + 1)))
    edges = [edge_of(seq[t], seq[(t + 1) % len(seq)]) for t in range(len(seq))]
    family = _family_around(n, 2 * n, list(zip(edges, colors)), rng, rng.below(8) / 10)
    return _make_state(seq, colors, None, family), family


def hamiltonian_path(seed, n=None):
    rng = SplitMix64(seed)
    n = n or 2 + rng.below(4)
    seq = _alternating(n, 2 * n, rng)
    colors = rng.shuffle(list(range(1, 2 * n + 1)))[: 2 * n - 1]
    edges = [edge_of(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
    family = _family_around(n, 2 * n, list(zip(edges, colors)), rng, rng.below(8) / 10)
    return RainbowSubgraph.from_sequence(PATH, seq, colors), family


def near_matching(seed, n=None):
    rng = SplitMix64(seed)
    n = n or 2 + rng.below(5)
    reds = rng.shuffle(list(range(1, n + 1)))
    blues = rng.shuffle(list(range(1, n + 1)))
    colors = rng.shuffle(list(range(1, n + 1)))[: n - 1]
    edges = [(blues[t], reds[t]) for t in range(n - 1)]
    family = _family_around(n, n, list(zip(edges, colors)), rng, rng.below(8) / 10)
    return RainbowSubgraph(MATCHING, tuple(edges), tuple(colors)), family


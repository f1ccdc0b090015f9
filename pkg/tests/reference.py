"""Slow, independent existence checks: every vertex sequence times every injective coloring."""

from itertools import permutations


def _injective_coloring_exists(edges, family):
    def go(t, used):
        if t == len(edges):
            return True
        for c in range(1, family.s + 1):
            if c not in used and edges[t] in family.edge_sets[c]:
                if go(t + 1, used | {c}):
                    return True
        return False

    return go(0, frozenset())


def cycle_exists(family, length):
    n, half = family.n, length // 2
    if family.s < length:
        return False
    for blues in permutations(range(1, n + 1), half):
        for reds in permutations(range(1, n + 1), half):
            edges = []
            for t in range(half):
                edges.append((blues[t], reds[t]))
                edges.append((blues[(t + 1) % half], reds[t]))
            if _injective_coloring_exists(edges, family):
                return True
    return False


def perfect_matching_exists(family):
    n = family.n
    if family.s < n:
        return False
    for reds in permutations(range(1, n + 1)):
        if _injective_coloring_exists([(j + 1, reds[j]) for j in range(n)], family):
            return True
    return False


def hamiltonian_path_exists(family):
    n = family.n
    if family.s < 2 * n - 1:
        return False
    for blues in permutations(range(1, n + 1)):
        for reds in permutations(range(1, n + 1)):
            # blue-first alternation covers every Hamiltonian path up to reversal
            seq = [v for pair in zip(blues, reds) for v in pair]
            edges = [(seq[t], seq[t + 1]) if t % 2 == 0 else (seq[t + 1], seq[t])
                     for t in range(2 * n - 1)]
            if _injective_coloring_exists(edges, family):
                return True
    return False

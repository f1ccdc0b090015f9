"""Deterministic builders for baseline and extremal (sharpness) families."""

from __future__ import annotations

from typing import Iterable

from .core import BipartiteFamily, Edge


def complete_family(n: int, s: int) -> BipartiteFamily:
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    k_nn = [(j, k) for j in range(1, n + 1) for k in range(1, n + 1)]
    return BipartiteFamily.from_edge_sets(n, [k_nn] * s)


def _blocks(pairs: Iterable[tuple[range, range]]) -> list[Edge]:
    return sorted((j, k) for blue, red in pairs for j in blue for k in red)


def two_blocks_family(n: int) -> BipartiteFamily:
    """2n copies of K_{n/2,n/2} + K_{n/2,n/2}: every degree n/2, no rainbow Hamiltonian cycle."""
    if n % 2 or n < 4:
        raise ValueError("two_blocks_family needs an even n >= 4")
    h = n // 2
    low, high = range(1, h + 1), range(h + 1, n + 1)
    return BipartiteFamily.from_edge_sets(n, [_blocks([(low, low), (high, high)])] * (2 * n))


def pm_blocks_family(n: int) -> BipartiteFamily:
    """n graphs with no rainbow perfect matching.

    Red parts A = q_1..q_a, B = the rest; blue parts C = p_1..p_a, D = the rest,
    with a = ceil(n/2).  G_1..G_{n-1} are complete on (A,C) and (B,D); G_n is
    complete on (A,D) and (B,C).
    """
    if n < 2:
        raise ValueError("pm_blocks_family needs n >= 2")
    a = (n + 1) // 2
    red_a, red_b = range(1, a + 1), range(a + 1, n + 1)
    blue_c, blue_d = range(1, a + 1), range(a + 1, n + 1)
    straight = _blocks([(blue_c, red_a), (blue_d, red_b)])
    crossed = _blocks([(blue_d, red_a), (blue_c, red_b)])
    return BipartiteFamily.from_edge_sets(n, [straight] * (n - 1) + [crossed])


HEXAGON_EDGES: tuple[Edge, ...] = ((1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3))


def hexagon_family() -> BipartiteFamily:
    """Six copies of the 6-cycle p1 q1 p2 q2 p3 q3."""
    return identical_family(HEXAGON_EDGES, 3, 6)


def identical_family(edges: Iterable[Edge], n: int, s: int) -> BipartiteFamily:
    edges = list(edges)
    family = BipartiteFamily.from_edge_sets(n, [edges] * s)
    errors = family.structural_errors()
    if errors or s < 1:
        raise ValueError("invalid edges: " + "; ".join(errors or ["s must be >= 1"]))
    return family

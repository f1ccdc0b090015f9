"""Set arithmetic in the cyclic group Z_m.

These are checkers: the shift-set facts used by the cycle-shortening moves are
established in the test-suite by exhaustive sweeps over small moduli.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class CyclicSet:
    modulus: int
    members: frozenset[int]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        members = frozenset(int(a) for a in self.members)
        bad = [a for a in members if not 0 <= a < self.modulus]
        if bad:
            raise ValueError(f"members {sorted(bad)} outside [0, {self.modulus})")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, modulus: int, members: Iterable[int]) -> "CyclicSet":
        """Build from arbitrary integers, reducing each modulo ``modulus``."""
        return cls(modulus, frozenset(a % modulus for a in members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, a) -> bool:
        return a % self.modulus in self.members

    def __or__(self, other: "CyclicSet") -> "CyclicSet":
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return CyclicSet(self.modulus, self.members | other.members)

    def __and__(self, other: "CyclicSet") -> "CyclicSet":
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return CyclicSet(self.modulus, self.members & other.members)


def shift_set(a: CyclicSet, k: int) -> CyclicSet:
    return CyclicSet(a.modulus, frozenset((x + k) % a.modulus for x in a.members))


def symmetric_shift_union(a: CyclicSet, d: int) -> CyclicSet:
    """``(A + d) | (A - d)``."""
    return shift_set(a, d) | shift_set(a, -d)


def lemma10_implication_holds(a: CyclicSet, d: int) -> bool:
    """``|A| == |(A+d) | (A-d)|`` implies ``A == A + 2d``."""
    m = a.modulus
    if m % 2 or not 1 <= d <= m // 2:
        raise ValueError(f"need even modulus and 1 <= d <= m/2, got m={m}, d={d}")
    if len(symmetric_shift_union(a, d)) != len(a):
        return True
    return shift_set(a, 2 * d) == a


def is_progression_mod(a: CyclicSet, step: int) -> bool:
    """True iff A = {a, a+step, ..., a+step*(|A|-1)} mod m for some a (empty set counts)."""
    if not a.members:
        return True
    k = len(a)
    m = a.modulus
    for start in a.members:
        if {(start + step * t) % m for t in range(k)} == a.members:
            return True
    return False


def lemma11_analyze(a: CyclicSet) -> tuple[bool, bool, bool]:
    """Return (|B| >= |A|+1, |B| == |A|+1, A is a step-2 progression) for B = (A+1)|(A-1).

    Requires an even modulus 2n, odd members only and ``|A| <= n/2``.
    """
    m = a.modulus
    if m % 2:
        raise ValueError("modulus must be even")
    n = m // 2
    if any(x % 2 == 0 for x in a.members):
        raise ValueError("members must be odd")
    if 2 * len(a) > n:
        raise ValueError(f"|A| = {len(a)} exceeds n/2 = {n / 2}")
    b = symmetric_shift_union(a, 1)
    return len(b) >= len(a) + 1, len(b) == len(a) + 1, is_progression_mod(a, 2)

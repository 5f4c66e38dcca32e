"""Combinatorics of torus fixed points: k-subsets of {1..n}.

Fixed points are indexed by k-element subsets I of {1..n}.  Each subset
carries its ambient size so that mixed-context use fails loudly instead of
silently misindexing matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb


class DomainError(ValueError):
    """Invalid combinatorial arguments (e.g. k > n)."""


@dataclass(frozen=True)
class FixedPointIndex:
    """A k-subset of {1..n}, strictly increasing, with ambient size n."""

    elements: tuple
    n: int

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        if any(not (1 <= e <= self.n) for e in elems):
            raise DomainError(f"elements {elems} out of range 1..{self.n}")
        if any(a >= b for a, b in zip(elems, elems[1:])):
            raise DomainError(f"elements {elems} not strictly increasing")

    @property
    def k(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item):
        return item in self.elements

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.elements) + "]"

    def label(self):
        """Serialization key, e.g. ``[1,3]``."""
        return str(self)


def subsets(k, n):
    """All k-subsets of {1..n} in lexicographic order of element lists."""
    if not (0 <= k <= n <= 12):
        raise DomainError(f"need 0 <= k <= n <= 12, got k={k}, n={n}")
    return [FixedPointIndex(c, n) for c in combinations(range(1, n + 1), k)]


def complement(index):
    """The complementary subset of {1..n}."""
    inside = set(index.elements)
    return FixedPointIndex(
        tuple(a for a in range(1, index.n + 1) if a not in inside), index.n
    )


def sigma(index):
    """Minimal-length permutation listing I increasingly, then its complement.

    Returned as the image tuple (sigma(1), ..., sigma(n)).
    """
    return tuple(index.elements) + tuple(complement(index).elements)


def ell(index):
    """Length of the minimal permutation: sum of (i_a - a)."""
    return sum(i - (a + 1) for a, i in enumerate(index.elements))


def transpose(index, i, j):
    """Image of the subset under the transposition of ambient letters i, j."""
    if i == j:
        return index
    elems = set(index.elements)
    if (i in elems) == (j in elems):
        return index
    if i in elems:
        elems.discard(i)
        elems.add(j)
    else:
        elems.discard(j)
        elems.add(i)
    return FixedPointIndex(tuple(sorted(elems)), index.n)


def longest_image(index):
    """Image of the subset under the longest permutation a -> n+1-a."""
    return FixedPointIndex(
        tuple(sorted(index.n + 1 - e for e in index.elements)), index.n
    )


def count(k, n):
    return comb(n, k)

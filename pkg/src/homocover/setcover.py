"""Greedy and exact set cover over small universes (bitmask encoded)."""
from __future__ import annotations


def _popcount(x):
    return bin(x).count("1")


def greedy(masks, universe):
    """Indices of a cover chosen greedily (largest gain, lowest index on ties)."""
    left = universe
    chosen = []
    while left:
        best, gain = -1, 0
        for i, s in enumerate(masks):
            g = _popcount(s & left)
            if g > gain:
                best, gain = i, g
        if best < 0:
            raise ValueError("the sets do not cover the universe")
        chosen.append(best)
        left &= ~masks[best]
    return chosen


def exact(masks, universe):
    """Minimum-cardinality cover by depth-first branch and bound.

    Branches on the lowest uncovered element; prunes with the bound
    ``chosen + ceil(uncovered / largest set)``.
    """
    incumbent = greedy(masks, universe)
    # drop duplicates and sets dominated by another set
    order = sorted(range(len(masks)), key=lambda i: (-_popcount(masks[i] & universe), i))
    kept = []
    for i in order:
        s = masks[i] & universe
        if s and not any((s | masks[j]) == masks[j] for j in kept):
            kept.append(i)
    by_elem = {}
    e = universe
    while e:
        bit = e & -e
        by_elem[bit] = [i for i in kept if masks[i] & bit]
        e ^= bit
    biggest = max(_popcount(masks[i] & universe) for i in kept)
    best = [list(incumbent)]

    def search(left, chosen):
        if not left:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        need = -(-_popcount(left) // biggest)
        if len(chosen) + need >= len(best[0]):
            return
        bit = left & -left
        for i in by_elem[bit]:
            chosen.append(i)
            search(left & ~masks[i], chosen)
            chosen.pop()

    search(universe, [])
    return sorted(best[0])

"""Receive schedules in O(log p) per rank via depth-first search with removal.

A rank's receive schedule says, for each of the ``q`` rounds of a
communication phase, which block arrives.  Entry values are signed: a
non-negative value is a block of the current phase (exactly one per phase,
the rank's baseblock), a negative value ``v`` stands for block ``v + q`` of
the previous phase.  Over any phase the ``q`` values are pairwise distinct.

The schedule is found by a greedy backtracking search over canonical skip
sequences: for round ``k`` the search looks for the intermediate rank
closest below ``r - skips[k]`` reachable with the skip indices that are
still live, accepts the final (smallest) skip index of that path as the
round's block, and unlinks it so no later round can reuse it.  Working on
the virtual rank ``p + r`` keeps all intermediate values non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .skips import SkipTable, baseblock

__all__ = ["SkipIndexList", "DfsCounters", "RecvSchedule", "dfs_blocks", "recv_schedule"]


class SkipIndexList:
    """Doubly linked list of skip indices ``0..q`` in decreasing order.

    ``next[e]`` is the next smaller live index and ``prev[e]`` the next
    larger one; ``-1`` terminates both ends.  The sentinel's own links live
    at Python index ``-1``, so ``next[-1]`` is the head (largest live index)
    and ``prev[-1]`` the tail.  ``unlink`` is O(1) and leaves the removed
    node's own links untouched, so an iteration holding a just-removed index
    can still step off it.
    """

    __slots__ = ("next", "prev")

    def __init__(self, q: int) -> None:
        self.next = list(range(-1, q + 1))  # next[e] = e - 1, next[-1] = q
        self.prev = list(range(1, q + 2)) + [0]  # prev[e] = e + 1, prev[-1] = 0
        self.prev[q] = -1

    def unlink(self, e: int) -> None:
        nxt, prv = self.next, self.prev
        nxt[prv[e]] = nxt[e]
        prv[nxt[e]] = prv[e]

    def live(self) -> list[int]:
        """Live indices in decreasing order (for tests and debugging)."""
        out = []
        e = self.next[-1]
        while e != -1:
            out.append(e)
            e = self.next[e]
        return out


@dataclass
class DfsCounters:
    """Work counters for one search, kept for the complexity assertions.

    ``recursive_calls`` counts calls made from inside :func:`dfs_blocks`
    (the initial invocation is not counted) and stays <= 2q.
    ``admissibility_misses`` counts loop iterations whose admissibility test
    fails; empirically bounded by 2q (see tests).
    """

    recursive_calls: int = 0
    admissibility_misses: int = 0


@dataclass
class RecvSchedule:
    """Receive blocks for one rank: ``blocks[k]`` arrives in round ``k``."""

    r: int
    b: int
    blocks: list[int]
    counters: DfsCounters = field(default_factory=DfsCounters)


def dfs_blocks(
    t: SkipTable,
    r: int,
    r_prime: int,
    s: list[int],
    e: int,
    k: int,
    out: list[int],
    links: SkipIndexList,
    counters: DfsCounters,
) -> int:
    """Greedy depth-first search with removal of accepted skip indices.

    Extends the path sum ``r_prime`` by live skips in decreasing order.  A
    skip index ``e`` is *admissible for k* when ``r_prime + skips[e] <=
    r - skips[k]``; an admissible index is explored recursively, and
    accepted as ``out[k]`` afterwards if the canonical-path conditions hold:
    the current sum still leaves room for a continuation via ``skips[k+1]``
    (``r_prime <= r - skips[k+1]``) and the extended sum is strictly closer
    to the target than the previously accepted path (``s > r_prime +
    skips[e]``).  Accepted indices are unlinked so they are never reused.

    ``s`` is a one-element list: the same cell must be visible to every
    recursion level, because an acceptance deep in the search resets the
    comparison point for the frames above it.

    Call initially as ``dfs_blocks(t, p + r, 0, [p + p], q, 0, out, links,
    counters)`` with the baseblock index of ``r`` already unlinked; this
    fills ``out[0..q-1]`` with distinct indices from ``{0..q}`` minus the
    baseblock and returns ``q``.
    """
    skips = t.skips
    q = t.q
    nxt = links.next
    if k >= q or r_prime > r - skips[k + 1]:
        return k
    while e != -1:
        if r_prime + skips[e] <= r - skips[k]:
            counters.recursive_calls += 1
            k = dfs_blocks(t, r, r_prime + skips[e], s, e, k, out, links, counters)
            # admissibility for the (possibly advanced) k still holds
            if k < q and r_prime <= r - skips[k + 1] and s[0] > r_prime + skips[e]:
                s[0] = r_prime + skips[e]
                out[k] = e
                k += 1
                links.unlink(e)
        else:
            counters.admissibility_misses += 1
        e = nxt[e]
    return k


def recv_schedule(r: int, t: SkipTable) -> RecvSchedule:
    """Compute the receive schedule of rank ``r`` for root 0.

    Builds the decreasing skip-index list, unlinks the baseblock of ``r``,
    runs :func:`dfs_blocks` on the virtual rank ``p + r``, and normalizes
    the raw indices: the entry equal to ``q`` becomes the baseblock (the
    round in which the block travels directly from the root), every other
    entry has ``q`` subtracted (a block of the previous phase).
    """
    if not 0 <= r < t.p:
        raise ValueError(f"rank {r} out of range [0, {t.p})")
    b = baseblock(r, t)
    counters = DfsCounters()
    q = t.q
    if q == 0:
        return RecvSchedule(r=r, b=b, blocks=[], counters=counters)
    links = SkipIndexList(q)
    links.unlink(b)
    out = [0] * q
    kf = dfs_blocks(t, t.p + r, 0, [t.p + t.p], q, 0, out, links, counters)
    if kf != q:  # cannot happen for a valid skip table
        raise AssertionError(f"search ended with {kf} of {q} blocks for r={r}, p={t.p}")
    for k in range(q):
        if out[k] == q:
            out[k] = b
        else:
            out[k] -= q
    return RecvSchedule(r=r, b=b, blocks=out, counters=counters)

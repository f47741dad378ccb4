"""Skip tables for log-regular circulant communication graphs.

The communication pattern underlying the broadcast schedules is a directed
circulant graph on ``p`` nodes with ``q = ceil(log2 p)`` skips (jumps): in
round ``k`` every rank ``r`` sends to ``(r + skips[k]) % p`` and receives
from ``(r - skips[k]) % p``.  The skips are generated by repeated halving of
``p`` (rounding up), which gives ``skips[0] = 1`` and ``skips[q] = p``.

Every rank ``0 <= r < p`` decomposes into a sum of distinct skips.  The
decomposition produced by greedy descending subtraction is the *canonical*
one; its smallest index is the rank's *baseblock*, the first real block the
rank receives during a broadcast.  The root ``r = 0`` has an empty
decomposition and baseblock ``q`` by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "SkipTable",
    "SkipSequence",
    "compute_skips",
    "baseblock",
    "canonical_skip_sequence",
    "to_proc",
    "from_proc",
]


@dataclass(frozen=True)
class SkipTable:
    """Circulant-graph skips for ``p`` ranks.

    ``skips`` has ``q + 1`` entries with ``skips[q] == p``; only

    ``skips[0..q-1]`` are communication skips, the last entry is kept so the
    schedule algorithms can use it as a search bound.

    Ranks and intermediate values fit in Python ints, so there is no hard
    limit on ``p`` here; the bulk verification kernel works in int64 and
    supports ``p`` up to 2**61.
    """

    p: int
    q: int
    skips: tuple[int, ...]


@dataclass(frozen=True)
class SkipSequence:
    """Strictly increasing skip indices whose skips sum to ``target``.

    Empty exactly for ``target == 0``.
    """

    target: int
    indices: tuple[int, ...]


def compute_skips(p: int) -> SkipTable:
    """Build the skip table for ``p`` ranks by repeated halving.

    ``skips[k] = skips[k+1] - skips[k+1] // 2`` going down from
    ``skips[q] = p``; exactly ``q = ceil(log2 p)`` halvings reach 1.

    Raises ``ValueError`` for ``p < 1``.
    """
    if p < 1:
        raise ValueError(f"processor count must be >= 1, got {p}")
    q = (p - 1).bit_length()
    skips = [0] * (q + 1)
    skips[q] = p
    k = q
    while k > 0:
        k -= 1
        skips[k] = skips[k + 1] - skips[k + 1] // 2
    return SkipTable(p=p, q=q, skips=tuple(skips))


def baseblock(r: int, t: SkipTable) -> int:
    """Smallest index of the canonical skip sequence of ``r``.

    Greedy descending subtraction: walk the skips from large to small,
    subtracting every skip that fits.  The index that reduces the remainder
    to zero is returned.  Only ``r = 0`` returns ``q``.
    """
    if not 0 <= r < t.p:
        raise ValueError(f"rank {r} out of range [0, {t.p})")
    if r == 0:
        return t.q
    skips = t.skips
    k = t.q
    while k > 0:
        k -= 1
        s = skips[k]
        if s == r:
            return k
        if s < r:
            r -= s
    return t.q


def canonical_skip_sequence(r: int, t: SkipTable) -> SkipSequence:
    """Canonical decomposition of ``r`` into a sum of distinct skips.

    Same greedy descent as :func:`baseblock`, recording every index that is
    subtracted.  The greedy order resolves the ambiguous cases (a skip equal
    to the sum of the two below it, and a remainder that completes the next
    larger skip) in favour of the larger skip, which is what makes the
    sequence canonical.
    """
    if not 0 <= r < t.p:
        raise ValueError(f"rank {r} out of range [0, {t.p})")
    target = r
    indices: list[int] = []
    skips = t.skips
    k = t.q
    while k > 0 and r > 0:
        k -= 1
        s = skips[k]
        if s <= r:
            indices.append(k)
            r -= s
    indices.reverse()
    return SkipSequence(target=target, indices=tuple(indices))


def to_proc(r: int, k: int, t: SkipTable) -> int:
    """Rank that ``r`` sends to in round ``k``."""
    return (r + t.skips[k]) % t.p


def from_proc(r: int, k: int, t: SkipTable) -> int:
    """Rank that ``r`` receives from in round ``k``."""
    return (r - t.skips[k] + t.p) % t.p

"""Send schedules in O(log p) per rank, with at most four neighbor fallbacks.

The send schedule of rank ``r`` must equal, entry for entry, the receive
schedule of the round's destination: ``send[k](r) == recv[k]((r + skips[k])
% p)``.  Computing each destination's receive schedule outright would cost
O(log^2 p); instead the descent below reconstructs the destination's missing
block from a pair of local quantities, a virtual rank ``r_prime`` and an
upper bound ``e`` with ``r_prime < e`` throughout.

For a handful of geometries the missing block of the destination cannot be
inferred locally; those branches (*violations*) fall back to computing the
single neighbor's receive schedule and reading one entry.  No rank incurs
more than four violations, which keeps the total cost O(log p).
"""

from __future__ import annotations

from dataclasses import dataclass

from .recv import recv_schedule
from .skips import SkipTable, baseblock

__all__ = ["SendSchedule", "send_schedule"]


@dataclass
class SendSchedule:
    """Send blocks for one rank: ``blocks[k]`` is sent in round ``k``."""

    r: int
    b: int
    blocks: list[int]
    violation_count: int = 0


@dataclass
class _Descent:
    """State threaded through the per-round steps of the send computation."""

    t: SkipTable
    r: int
    b: int
    r_prime: int
    c: int
    e: int
    out: list[int]
    violations: int = 0

    def neighbor_block(self, k: int) -> int:
        """Violation fallback: one receive-schedule entry of the destination."""
        self.violations += 1
        return recv_schedule((self.r + self.t.skips[k]) % self.t.p, self.t).blocks[k]


def _lower_step(st: _Descent, k: int, trace: list | None) -> None:
    """Round ``k`` with ``r_prime < skips[k]``: the destination sits in the
    stretch ``[skips[k], e)`` reached by adding ``skips[k]``."""
    skips = st.t.skips
    sk = skips[k]
    if st.e < skips[k - 1] or (k == 1 and st.b > 0):
        st.out[k] = st.c
        branch = "carry"
    elif st.r_prime == 0 and k == 2:
        if st.e == 2 and skips[2] == 3:
            st.out[k] = st.neighbor_block(k)  # violation (1)
            branch = "viol1"
        else:
            st.out[k] = st.c
            branch = "carry"
    elif st.r_prime == 0 and sk == 5:  # implies k == 3
        if st.e == 3:
            st.out[k] = st.neighbor_block(k)  # violation (1)
            branch = "viol1"
        else:
            st.out[k] = st.c
            branch = "carry"
    elif st.r_prime + sk >= st.e:
        st.out[k] = st.neighbor_block(k)  # violation (2)
        branch = "viol2"
    else:
        st.out[k] = st.c
        branch = "carry"
    if st.e > sk:
        st.e = sk
    if trace is not None:
        trace.append(("lower", k, branch, st.r_prime, st.e, st.c))


def _upper_step(st: _Descent, k: int, trace: list | None) -> None:
    """Round ``k`` with ``r_prime >= skips[k]``: the rank itself sits in the
    upper stretch; it hands on block ``k - q`` and both ``r_prime`` and
    ``e`` shift down by ``skips[k]`` for the next round."""
    skips = st.t.skips
    sk = skips[k]
    st.c = k - st.t.q
    if k == 1 or st.r_prime > sk or st.e - sk < skips[k - 1]:
        st.out[k] = st.c
        branch = "carry"
    elif k == 2:
        if skips[2] == 3 and st.e == 5:
            st.out[k] = st.neighbor_block(k)  # violation (1)
            branch = "viol1"
        else:
            st.out[k] = st.c
            branch = "carry"
    elif sk == 5:  # implies k == 3
        if st.e == 8:
            st.out[k] = st.neighbor_block(k)  # violation (1)
            branch = "viol1"
        else:
            st.out[k] = st.c
            branch = "carry"
    elif st.r_prime + sk > st.e:
        st.out[k] = st.neighbor_block(k)  # violation (3)
        branch = "viol3"
    else:
        st.out[k] = st.c
        branch = "carry"
    st.r_prime -= sk
    st.e -= sk
    if trace is not None:
        trace.append(("upper", k, branch, st.r_prime, st.e, st.c))


def send_schedule(r: int, t: SkipTable, trace: list | None = None) -> SendSchedule:
    """Compute the send schedule of rank ``r`` for root 0.

    The root emits fresh blocks in order (``send[k] = k``).  Every other
    rank runs the descent from round ``q - 1`` down to 1, dispatching on
    whether its virtual rank lies in the lower or upper part of the current
    range, and finishes with ``send[0] = b - q``: the first thing a rank
    passes on is its own baseblock, received one phase earlier.

    ``trace``, if given, collects ``(part, k, branch, r_prime, e, c)``
    tuples after each round for inspection in tests.
    """
    if not 0 <= r < t.p:
        raise ValueError(f"rank {r} out of range [0, {t.p})")
    q = t.q
    if q == 0:
        return SendSchedule(r=r, b=baseblock(r, t), blocks=[])
    if r == 0:
        return SendSchedule(r=0, b=t.q, blocks=list(range(q)))
    b = baseblock(r, t)
    st = _Descent(t=t, r=r, b=b, r_prime=r, c=b, e=t.p, out=[0] * q)
    for k in range(q - 1, 0, -1):
        assert st.r_prime < st.e
        if st.r_prime < t.skips[k]:
            _lower_step(st, k, trace)
        else:
            _upper_step(st, k, trace)
    st.out[0] = b - q
    return SendSchedule(r=r, b=b, blocks=st.out, violation_count=st.violations)

"""Combined per-rank schedule: receive blocks, send blocks, baseblock."""

from __future__ import annotations

from dataclasses import dataclass

from .recv import recv_schedule
from .send import send_schedule
from .skips import SkipTable, compute_skips

__all__ = ["Schedule", "schedule_for_rank", "schedule_table"]


@dataclass
class Schedule:
    """Everything a rank needs to run a broadcast: ``recv[k]`` is received
    and ``send[k]`` sent in round ``k`` (mod q); both arrays advance by
    ``q`` after every phase."""

    r: int
    b: int
    recv: list[int]
    send: list[int]


def schedule_for_rank(r: int, t: SkipTable) -> Schedule:
    rs = recv_schedule(r, t)
    ss = send_schedule(r, t)
    return Schedule(r=r, b=rs.b, recv=rs.blocks, send=ss.blocks)


def schedule_table(p: int) -> tuple[SkipTable, list[Schedule]]:
    """Schedules for all ranks of a ``p``-rank graph."""
    t = compute_skips(p)
    return t, [schedule_for_rank(r, t) for r in range(p)]

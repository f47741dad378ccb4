"""Round-optimal broadcast schedules on log-regular circulant graphs.

Library layout:

- :mod:`circbcast.skips` -- skip tables, baseblocks, canonical skip sequences
- :mod:`circbcast.recv` -- receive schedules (DFS with removal, O(log p))
- :mod:`circbcast.send` -- send schedules (descent with <= 4 fallbacks)
- :mod:`circbcast.schedule` -- combined per-rank schedule
- :mod:`circbcast.verify` -- correctness conditions, exhaustive range checks
- :mod:`circbcast.sim` -- round-lockstep broadcast / all-to-all simulator
- :mod:`circbcast.bench` -- schedule-computation timing
- :mod:`circbcast.cli` -- ``circbcast`` command line tool

``verify`` and ``bench`` use a compiled bulk kernel (numba) when available
and fall back to the pure-Python implementation otherwise; the two are
exact-equality cross-checked in the test suite.
"""

from .recv import DfsCounters, RecvSchedule, SkipIndexList, dfs_blocks, recv_schedule
from .schedule import Schedule, schedule_for_rank, schedule_table
from .send import SendSchedule, send_schedule
from .skips import (
    SkipSequence,
    SkipTable,
    baseblock,
    canonical_skip_sequence,
    compute_skips,
    from_proc,
    to_proc,
)

__version__ = "0.1.0"

__all__ = [
    "SkipTable",
    "SkipSequence",
    "compute_skips",
    "baseblock",
    "canonical_skip_sequence",
    "to_proc",
    "from_proc",
    "SkipIndexList",
    "DfsCounters",
    "RecvSchedule",
    "dfs_blocks",
    "recv_schedule",
    "SendSchedule",
    "send_schedule",
    "Schedule",
    "schedule_for_rank",
    "schedule_table",
    "__version__",
]

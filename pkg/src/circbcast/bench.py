"""Timing of per-rank schedule computation.

Times how long it takes to compute receive and send schedules for every
rank of a p-rank graph, reporting the total and the per-rank average in
microseconds.  Results are for the local machine and interpreter; the
meaningful signal is growth with q = ceil(log2 p), which should be at most
linear.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .recv import recv_schedule
from .send import send_schedule
from .skips import compute_skips
from .verify import _get_kernel

__all__ = ["BenchResult", "bench_schedules", "parse_pset"]


@dataclass
class BenchResult:
    p: int
    q: int
    total_s: float
    per_proc_us: float
    engine: str

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "total_s": round(self.total_s, 6),
            "per_proc_us": round(self.per_proc_us, 4),
            "engine": self.engine,
        }


def bench_schedules(p: int, engine: str = "auto", repeat: int = 1) -> BenchResult:
    """Compute all 2p schedules of a p-rank graph, best time of `repeat` runs.

    Schedules are computed and discarded; array/bookkeeping traffic is kept
    out of the timed region.  With engine "auto" the compiled kernel is
    used when available (after a warm-up call so compilation never lands in
    the measurement); "pure" times the reference implementation.
    """
    t = compute_skips(p)
    kern = _get_kernel() if engine in ("auto", "kernel") else None
    if engine == "kernel" and kern is None:
        raise RuntimeError("compiled kernel unavailable (numba not importable)")
    if kern is not None and p >= kern.MAX_KERNEL_P:
        kern = None
    best = float("inf")
    if kern is not None:
        import numpy as np

        skips = np.array(t.skips, np.int64)
        kern.time_schedules(2, 1, np.array([1, 2], np.int64))  # JIT warm-up
        for _ in range(max(repeat, 1)):
            t0 = time.perf_counter()
            kern.time_schedules(p, t.q, skips)
            best = min(best, time.perf_counter() - t0)
        used = "kernel"
    else:
        for _ in range(max(repeat, 1)):
            t0 = time.perf_counter()
            for r in range(p):
                recv_schedule(r, t)
                send_schedule(r, t)
            best = min(best, time.perf_counter() - t0)
        used = "pure"
    return BenchResult(
        p=p, q=t.q, total_s=best, per_proc_us=best / p * 1e6, engine=used
    )


def bench_many(
    p_values: list[int], engine: str = "auto", repeat: int = 1, jobs: int = 1
) -> list[BenchResult]:
    """Benchmark several processor counts, optionally across worker processes.

    Results come back in input order.  Timings from parallel workers share
    the machine; prefer jobs=1 when the numbers matter.
    """
    if jobs <= 1:
        return [bench_schedules(p, engine=engine, repeat=repeat) for p in p_values]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(bench_schedules, p, engine, repeat) for p in p_values]
        return [f.result() for f in futures]


def parse_pset(text: str) -> list[int]:
    """Parse a processor-count list: comma-separated values or lo:hi ranges.

    "1024,17:20" -> [1024, 17, 18, 19, 20]
    """
    out: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            lo_s, hi_s = item.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo < 1 or hi < lo:
                raise ValueError(f"bad range {item!r}")
            out.extend(range(lo, hi + 1))
        else:
            v = int(item)
            if v < 1:
                raise ValueError(f"bad processor count {item!r}")
            out.append(v)
    if not out:
        raise ValueError("empty processor set")
    return out

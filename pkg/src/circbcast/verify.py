"""Independent checks of the four schedule correctness conditions.

For a p-rank schedule family (all receive and send schedules plus
baseblocks) the conditions are:

1. what a rank receives in round k is what its from-processor sends:
   ``recv[r][k] == send[(r - skips[k]) % p][k]``
2. what a rank sends in round k is what its to-processor receives:
   ``send[r][k] == recv[(r + skips[k]) % p][k]``
3. over any q successive rounds a rank receives q distinct blocks; as a
   multiset ``recv[r] == ({-1..-q} - {b-q}) | {b}`` where b is the rank's
   baseblock (for the root the set is plainly ``{-1..-q}``)
4. a rank only sends blocks it already holds: ``send[r][k]`` equals
   ``b - q`` (its baseblock from the previous phase) or some ``recv[r][j]``
   with ``j < k``; the root instead injects fresh blocks in order
   (``send[0][k] == k``)

The checks run on plain integer arrays and are independent of how the
schedules were produced, so they double as the oracle for the schedule
algorithms and as a fault detector for externally supplied (possibly
corrupted) schedule families.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .recv import recv_schedule
from .send import send_schedule
from .skips import compute_skips

__all__ = [
    "Counterexample",
    "VerifyStats",
    "VerificationReport",
    "RangeSummary",
    "ScheduleArrays",
    "compute_schedule_arrays",
    "check_conditions",
    "verify_all",
    "verify_range",
]

_VIOL_HIST_SLOTS = 16  # violations are provably small; 16 leaves room to observe a bound break


@dataclass(frozen=True)
class Counterexample:
    condition: int
    r: int
    k: int  # -1 when the failure is not tied to a single round
    expected: Optional[int]
    actual: Optional[int]
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "r": self.r,
            "k": self.k,
            "expected": self.expected,
            "actual": self.actual,
            "detail": self.detail,
        }


@dataclass
class VerifyStats:
    max_recursive_calls: int = 0
    max_admissibility_misses: int = 0
    max_violations: int = 0
    violation_hist: tuple[int, ...] = ()
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "max_recursive_calls": self.max_recursive_calls,
            "max_admissibility_misses": self.max_admissibility_misses,
            "max_violations": self.max_violations,
            "violation_hist": list(self.violation_hist),
            "seconds": round(self.seconds, 6),
        }


@dataclass
class VerificationReport:
    p: int
    passed: tuple[bool, bool, bool, bool]
    counterexamples: list[Counterexample]
    stats: VerifyStats

    @property
    def ok(self) -> bool:
        return all(self.passed)

    def first_counterexample(self, condition: int) -> Optional[Counterexample]:
        for c in self.counterexamples:
            if c.condition == condition:
                return c
        return None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "pass": self.ok,
            "conditions": list(self.passed),
            "stats": self.stats.to_dict(),
            "counterexamples": [c.to_dict() for c in self.counterexamples],
        }


@dataclass
class ScheduleArrays:
    """Schedule family of one graph as arrays: recv/send are (p, q) int8."""

    p: int
    q: int
    b: np.ndarray
    recv: np.ndarray
    send: np.ndarray
    max_recursive_calls: int = 0
    max_admissibility_misses: int = 0
    max_violations: int = 0
    violation_hist: tuple[int, ...] = ()


_kernel_mod = None
_kernel_checked = False


def _get_kernel():
    global _kernel_mod, _kernel_checked
    if not _kernel_checked:
        _kernel_checked = True
        try:
            from . import _kernel

            _kernel_mod = _kernel
        except ImportError:
            _kernel_mod = None
    return _kernel_mod


def compute_schedule_arrays(p: int, engine: str = "auto") -> ScheduleArrays:
    """Schedules for every rank of a p-rank graph.

    ``engine`` selects the implementation: "pure" runs the reference
    recursive code, "kernel" the compiled bulk kernel, "auto" prefers the
    kernel when it is importable and p fits in its int64 arithmetic.
    """
    t = compute_skips(p)
    q = t.q
    kern = _get_kernel() if engine in ("auto", "kernel") else None
    if engine == "kernel" and kern is None:
        raise RuntimeError("compiled kernel unavailable (numba not importable)")
    if kern is not None and p >= kern.MAX_KERNEL_P:
        if engine == "kernel":
            raise ValueError(f"kernel supports p < 2**61, got {p}")
        kern = None

    recv = np.empty((p, q), np.int8)
    send = np.empty((p, q), np.int8)
    b = np.empty(p, np.int8)
    if kern is not None:
        hist = np.zeros(_VIOL_HIST_SLOTS, np.int64)
        stats = np.zeros(3, np.int64)
        skips = np.array(t.skips, np.int64)
        kern.fill_schedules(p, q, skips, 0, p, recv, send, b, hist, stats)
        return ScheduleArrays(
            p=p,
            q=q,
            b=b,
            recv=recv,
            send=send,
            max_recursive_calls=int(stats[0]),
            max_admissibility_misses=int(stats[1]),
            max_violations=int(stats[2]),
            violation_hist=tuple(int(x) for x in hist),
        )

    hist_l = [0] * _VIOL_HIST_SLOTS
    mc = mm = mv = 0
    for r in range(p):
        rs = recv_schedule(r, t)
        ss = send_schedule(r, t)
        b[r] = rs.b
        recv[r, :] = rs.blocks
        send[r, :] = ss.blocks
        hist_l[min(ss.violation_count, _VIOL_HIST_SLOTS - 1)] += 1
        mc = max(mc, rs.counters.recursive_calls)
        mm = max(mm, rs.counters.admissibility_misses)
        mv = max(mv, ss.violation_count)
    return ScheduleArrays(
        p=p,
        q=q,
        b=b,
        recv=recv,
        send=send,
        max_recursive_calls=mc,
        max_admissibility_misses=mm,
        max_violations=mv,
        violation_hist=tuple(hist_l),
    )


def _first_true(mask: np.ndarray) -> tuple[int, int]:
    """(row, col) of the first True in row-major order; mask must be 2-D."""
    flat = int(np.argmax(mask))
    return flat // mask.shape[1], flat % mask.shape[1]


def check_conditions(
    p: int, q: int, b: np.ndarray, recv: np.ndarray, send: np.ndarray
) -> tuple[tuple[bool, bool, bool, bool], list[Counterexample]]:
    """Check conditions 1-4 on a schedule family given as arrays.

    Returns per-condition pass flags and the first counterexample of each
    failing condition.  Never raises on bad schedules.
    """
    if q == 0:
        return (True, True, True, True), []
    skips = compute_skips(p).skips
    recv = np.asarray(recv)
    send = np.asarray(send)
    bv = np.asarray(b)
    ranks = np.arange(p, dtype=np.int64)
    counterexamples: list[Counterexample] = []
    passed = [True, True, True, True]

    # conditions 1 and 2: every round's transfer agrees between the two
    # ends; checked per round to keep the working set at O(p)
    for k in range(q):
        from_send = send[(ranks - skips[k]) % p, k]
        bad = recv[:, k] != from_send
        if passed[0] and bad.any():
            passed[0] = False
            r = int(np.argmax(bad))
            counterexamples.append(
                Counterexample(
                    condition=1,
                    r=r,
                    k=k,
                    expected=int(from_send[r]),
                    actual=int(recv[r, k]),
                    detail=f"recv[{r}][{k}] != send[{(r - skips[k]) % p}][{k}]",
                )
            )
        to_recv = recv[(ranks + skips[k]) % p, k]
        bad = send[:, k] != to_recv
        if passed[1] and bad.any():
            passed[1] = False
            r = int(np.argmax(bad))
            counterexamples.append(
                Counterexample(
                    condition=2,
                    r=r,
                    k=k,
                    expected=int(to_recv[r]),
                    actual=int(send[r, k]),
                    detail=f"send[{r}][{k}] != recv[{(r + skips[k]) % p}][{k}]",
                )
            )
        if not passed[0] and not passed[1]:
            break

    # condition 3: the recv row of rank r is, as a multiset,
    # {-q..-1} with b-q replaced by b (root: plain {-q..-1})
    expected = np.empty((p, q), np.int16)
    for j in range(q - 1):
        expected[:, j] = -q + j + (j >= bv)
    expected[:, q - 1] = np.where(bv < q, bv, -1)
    bad_rows = (np.sort(recv, axis=1) != expected).any(axis=1)
    if bad_rows.any():
        passed[2] = False
        r = int(np.argmax(bad_rows))
        counterexamples.append(
            Counterexample(
                condition=3,
                r=r,
                k=-1,
                expected=None,
                actual=None,
                detail=f"recv row {sorted(int(x) for x in recv[r])} is not the "
                f"required multiset for b={int(bv[r])}",
            )
        )

    # condition 4: a block sent in round k was received in some round j < k
    # or is the baseblock of the previous phase; the root injects block k
    base_prev = bv.astype(np.int16) - q
    ok4 = np.empty((p, q), bool)
    for k in range(q):
        acc = send[:, k] == base_prev
        for j in range(k):
            acc |= send[:, k] == recv[:, j]
        ok4[:, k] = acc
    ok4[0, :] = send[0, :] == np.arange(q)
    mism = ~ok4
    if mism.any():
        passed[3] = False
        r, k = _first_true(mism)
        counterexamples.append(
            Counterexample(
                condition=4,
                r=r,
                k=k,
                expected=None,
                actual=int(send[r, k]),
                detail=f"send[{r}][{k}]={int(send[r, k])} was never received in "
                f"rounds 0..{k - 1} and is not the carried baseblock",
            )
        )
    return (passed[0], passed[1], passed[2], passed[3]), counterexamples


def verify_all(p: int, engine: str = "auto") -> VerificationReport:
    """Compute all schedules of a p-rank graph and check conditions 1-4."""
    t0 = time.perf_counter()
    arrays = compute_schedule_arrays(p, engine=engine)
    passed, cexs = check_conditions(p, arrays.q, arrays.b, arrays.recv, arrays.send)
    stats = VerifyStats(
        max_recursive_calls=arrays.max_recursive_calls,
        max_admissibility_misses=arrays.max_admissibility_misses,
        max_violations=arrays.max_violations,
        violation_hist=arrays.violation_hist,
        seconds=time.perf_counter() - t0,
    )
    return VerificationReport(p=p, passed=passed, counterexamples=cexs, stats=stats)


@dataclass
class RangeSummary:
    p_lo: int
    p_hi: int
    checked: int = 0
    all_passed: bool = True
    first_failure: Optional[VerificationReport] = None
    max_recursive_calls: int = 0
    max_admissibility_misses: int = 0
    max_violations: int = 0
    violation_hist: list[int] = field(default_factory=lambda: [0] * _VIOL_HIST_SLOTS)
    seconds: float = 0.0

    def absorb(self, report: VerificationReport) -> None:
        self.checked += 1
        st = report.stats
        self.max_recursive_calls = max(self.max_recursive_calls, st.max_recursive_calls)
        self.max_admissibility_misses = max(
            self.max_admissibility_misses, st.max_admissibility_misses
        )
        self.max_violations = max(self.max_violations, st.max_violations)
        for i, n in enumerate(st.violation_hist):
            self.violation_hist[i] += n
        if not report.ok and self.first_failure is None:
            self.all_passed = False
            self.first_failure = report

    def to_dict(self) -> dict:
        return {
            "p_lo": self.p_lo,
            "p_hi": self.p_hi,
            "checked": self.checked,
            "pass": self.all_passed,
            "max_recursive_calls": self.max_recursive_calls,
            "max_admissibility_misses": self.max_admissibility_misses,
            "max_violations": self.max_violations,
            "violation_hist": self.violation_hist,
            "seconds": round(self.seconds, 6),
            "first_failure": self.first_failure.to_dict() if self.first_failure else None,
        }


def _read_checkpoint(path: str) -> Optional[int]:
    try:
        with open(path) as fh:
            text = fh.read().strip()
        return int(text) if text else None
    except (OSError, ValueError):
        return None


def _write_checkpoint(path: str, p: int) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(f"{p}\n")
    os.replace(tmp, path)


def _verify_chunk(args: tuple) -> list[VerificationReport]:
    lo, hi, engine = args
    return [verify_all(p, engine=engine) for p in range(lo, hi)]


def verify_range(
    p_lo: int,
    p_hi: int,
    engine: str = "auto",
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    stop_on_fail: bool = True,
    on_report: Optional[Callable[[VerificationReport], None]] = None,
) -> RangeSummary:
    """Run :func:`verify_all` for every p in [p_lo, p_hi] (inclusive).

    A checkpoint file holds the last completed p as plain text; when given,
    verification resumes after it and the file is advanced as p values
    complete.  ``jobs > 1`` fans chunks of the range out to worker
    processes; reports are consumed in p order either way.  With
    ``stop_on_fail`` the sweep ends at the first failing p (its report is
    included in the summary).
    """
    if not 1 <= p_lo <= p_hi:
        raise ValueError(f"invalid range [{p_lo}, {p_hi}]")
    summary = RangeSummary(p_lo=p_lo, p_hi=p_hi)
    t0 = time.perf_counter()
    start = p_lo
    if checkpoint is not None:
        done = _read_checkpoint(checkpoint)
        if done is not None:
            start = max(start, done + 1)

    def consume(report: VerificationReport) -> bool:
        summary.absorb(report)
        if on_report is not None:
            on_report(report)
        if checkpoint is not None and summary.all_passed:
            _write_checkpoint(checkpoint, report.p)
        return not (stop_on_fail and not report.ok)

    if jobs <= 1:
        for p in range(start, p_hi + 1):
            if not consume(verify_all(p, engine=engine)):
                break
    else:
        from concurrent.futures import ProcessPoolExecutor

        total = p_hi + 1 - start
        nchunks = min(max(jobs * 4, 1), max(total, 1))
        base, rem = divmod(max(total, 0), nchunks)
        chunks = []
        lo = start
        for i in range(nchunks):
            hi = lo + base + (1 if i < rem else 0)
            if lo < hi:
                chunks.append((lo, hi, engine))
            lo = hi
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for reports in pool.map(_verify_chunk, chunks):
                stop = False
                for report in reports:
                    if not consume(report):
                        stop = True
                        break
                if stop:
                    break
    summary.seconds = time.perf_counter() - t0
    return summary

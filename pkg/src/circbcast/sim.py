"""Round-lockstep simulation of n-block broadcast and all-to-all broadcast.

The simulator executes the schedule-driven algorithms over p simulated
ranks in synchronous rounds under the one-ported model: per round every
rank sends at most one message and receives at most one message.  Payloads
are opaque 64-bit tokens; no block numbers or other metadata travel with a
message, so a receiver's slot choice comes entirely from its own schedule.
Any mismatch (an overwrite with a different token, a missing or unexpected
message) is recorded as a failure instead of raising, since such events
indicate a broken schedule, which is exactly what the simulator exists to
surface.

Conventions shared by both algorithms: schedule entries below 0 mean no
transfer this round; entries above n-1 are clamped to n-1 (the last block
is transferred again); x initial virtual rounds align the total round count
n-1+q to a phase boundary and are skipped outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .recv import recv_schedule
from .schedule import Schedule, schedule_for_rank
from .skips import compute_skips

__all__ = [
    "token",
    "virtual_rounds",
    "adjust_schedule",
    "SimResult",
    "run_broadcast",
    "run_allgatherv",
    "make_sizes",
]

_MAX_RECORDED_FAILURES = 64


def token(root: int, j: int) -> int:
    """Deterministic 64-bit payload token for block j of root `root`."""
    x = ((root & 0xFFFFFFFF) << 32 | (j & 0xFFFFFFFF)) ^ 0x9E3779B97F4A7C15
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & 0xFFFFFFFFFFFFFFFF
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


def virtual_rounds(n: int, q: int) -> int:
    """Initial no-communication rounds so that n-1+q+x is a phase multiple."""
    if n < 1:
        raise ValueError(f"block count must be >= 1, got {n}")
    if q == 0:
        return 0
    return (q - (n - 1 + q) % q) % q


def _adjust_row(blocks: list[int], x: int, q: int) -> list[int]:
    """x virtual rounds already happened: shift a schedule row accordingly."""
    out = list(blocks)
    for i in range(x):
        out[i] += q - x
    for i in range(x, q):
        out[i] -= x
    return out


def adjust_schedule(sched: Schedule, x: int) -> Schedule:
    """Shift both schedule arrays for x already-elapsed virtual rounds.

    Entries at rounds before x pick up ``q - x`` (they now belong to the
    next phase); entries from x on drop by x.  ``x = 0`` is the identity.
    """
    q = len(sched.recv)
    if not 0 <= x <= max(q - 1, 0):
        raise ValueError(f"virtual rounds {x} out of range for q={q}")
    return Schedule(
        r=sched.r,
        b=sched.b,
        recv=_adjust_row(sched.recv, x, q),
        send=_adjust_row(sched.send, x, q),
    )


@dataclass
class SimResult:
    """Outcome of one simulated collective.

    ``rounds`` counts communication rounds in which at least one message
    moved; ``correct`` is True when every destination buffer ended complete
    and exact.  ``failures`` holds the first few anomalies as dicts.
    """

    p: int
    n: int
    root: Optional[int]
    rounds: int
    messages_total: int
    correct: bool
    x: int = 0
    failures: list[dict] = field(default_factory=list)
    failures_total: int = 0
    round_messages: list[int] = field(default_factory=list)
    message_log: Optional[list] = None

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "n": self.n,
            "root": self.root,
            "rounds": self.rounds,
            "messages_total": self.messages_total,
            "correct": self.correct,
            "x": self.x,
            "failures": self.failures,
        }
        if self.message_log is not None:
            out["message_log"] = self.message_log
        return out


def _record(result: SimResult, failure: dict) -> None:
    result.failures_total += 1
    if len(result.failures) < _MAX_RECORDED_FAILURES:
        result.failures.append(failure)


def run_broadcast(
    p: int,
    n: int,
    root: int = 0,
    collect_log: bool = False,
    on_round_end: Optional[Callable[[int, list], None]] = None,
) -> SimResult:
    """Broadcast n blocks from `root` to all other ranks.

    Every rank runs the schedule of its renumbered rank ``(g - root) % p``;
    nothing is ever sent to the root.  A correct schedule family completes
    in exactly ``n - 1 + q`` communication rounds.

    ``on_round_end(completed_rounds, buffers)`` is invoked after every
    round; buffers is the live list of per-rank slot lists (read-only use).
    """
    if p < 1:
        raise ValueError(f"processor count must be >= 1, got {p}")
    if n < 1:
        raise ValueError(f"block count must be >= 1, got {n}")
    if not 0 <= root < p:
        raise ValueError(f"root {root} out of range [0, {p})")
    t = compute_skips(p)
    q = t.q
    result = SimResult(
        p=p,
        n=n,
        root=root,
        rounds=0,
        messages_total=0,
        correct=True,
        message_log=[] if collect_log else None,
    )
    buffers: list[list] = [[None] * n for _ in range(p)]
    buffers[root] = [token(root, j) for j in range(n)]
    if p == 1:
        return result

    x = virtual_rounds(n, q)
    result.x = x
    recv_arr: list[list[int]] = []
    send_arr: list[list[int]] = []
    for g in range(p):
        sched = adjust_schedule(schedule_for_rank((g - root) % p, t), x)
        recv_arr.append(sched.recv)
        send_arr.append(sched.send)

    skips = t.skips
    last = n - 1 + q
    for i in range(x, last + x):
        k = i % q
        sk = skips[k]
        deliveries: dict[int, tuple[int, int]] = {}  # dest -> (src, token)
        sent = 0
        for g in range(p):
            sb = send_arr[g][k]
            if sb < 0:
                continue
            dest = (g + sk) % p
            if dest == root:
                continue
            idx = sb if sb < n else n - 1
            tok = buffers[g][idx]
            if tok is None:
                _record(
                    result,
                    {"kind": "sent-empty-slot", "round": i, "src": g, "block": idx},
                )
                continue
            if dest in deliveries:  # cannot happen: g -> g + skips[k] is a bijection
                _record(result, {"kind": "one-ported-breach", "round": i, "dest": dest})
                continue
            deliveries[dest] = (g, tok)
            sent += 1
            if result.message_log is not None:
                result.message_log.append({"round": i, "src": g, "dest": dest, "block": idx})
        for g in range(p):
            rb = recv_arr[g][k]
            if g == root or rb < 0:
                if g in deliveries:
                    src, _ = deliveries.pop(g)
                    _record(
                        result,
                        {"kind": "unexpected-message", "round": i, "src": src, "dest": g},
                    )
                continue
            idx = rb if rb < n else n - 1
            got = deliveries.pop(g, None)
            if got is None:
                _record(
                    result,
                    {"kind": "expected-message-missing", "round": i, "dest": g, "block": idx},
                )
                continue
            src, tok = got
            cur = buffers[g][idx]
            if cur is None:
                buffers[g][idx] = tok
            elif cur != tok:
                _record(
                    result,
                    {"kind": "mismatched-overwrite", "round": i, "dest": g, "block": idx},
                )
        for g in range(p):
            send_arr[g][k] += q
            recv_arr[g][k] += q
        result.round_messages.append(sent)
        if sent:
            result.rounds += 1
        result.messages_total += sent
        if on_round_end is not None:
            on_round_end(i - x + 1, buffers)

    for g in range(p):
        for j in range(n):
            if buffers[g][j] != token(root, j):
                _record(result, {"kind": "incomplete-buffer", "rank": g, "block": j})
    result.correct = result.failures_total == 0
    return result


def _block_elems(size: int, n: int, m: int) -> int:
    """Element count of block m when `size` elements split into n blocks."""
    return size // n + (1 if m < size % n else 0)


def make_sizes(shape: str, p: int, n: int, m: Optional[int] = None) -> list[int]:
    """Per-root element counts for the three standard input shapes.

    uniform: total m split evenly; mod3: rank j weighted by j % 3 (every
    third rank contributes nothing); degenerate: rank 0 contributes all of
    m, everyone else nothing.  m defaults to p * n.
    """
    if m is None:
        m = p * n
    if shape == "uniform":
        base, rem = divmod(m, p)
        return [base + (1 if j < rem else 0) for j in range(p)]
    if shape == "mod3":
        weights = [j % 3 for j in range(p)]
        total = sum(weights)
        if total == 0:
            return [m] + [0] * (p - 1)
        sizes = [m * w // total for w in weights]
        deficit = m - sum(sizes)
        for j in range(p - 1, -1, -1):
            if deficit == 0:
                break
            if weights[j]:
                sizes[j] += 1
                deficit -= 1
        return sizes
    if shape == "degenerate":
        return [m] + [0] * (p - 1)
    raise ValueError(f"unknown sizes shape {shape!r}")


def run_allgatherv(
    p: int,
    n: int,
    sizes: Sequence[int],
    collect_log: bool = False,
) -> SimResult:
    """All-to-all broadcast: every rank's n blocks reach every other rank.

    ``sizes[j]`` is the element count rank j contributes (zero means rank j
    is skipped entirely in packing and unpacking).  Each rank holds one
    receive schedule per root j, the schedule of rank ``(r - j) % p``, and
    send blocks cross-indexed from the receive blocks of the round's
    from-processor.  Per round, blocks for all roots are packed into one
    message (pack order: ascending j, skipping the destination's own root
    and empty roots), so the one-ported model still holds.
    """
    if p < 1:
        raise ValueError(f"processor count must be >= 1, got {p}")
    if n < 1:
        raise ValueError(f"block count must be >= 1, got {n}")
    sizes = list(sizes)
    if len(sizes) != p:
        raise ValueError(f"sizes has {len(sizes)} entries for p={p}")
    if any(s < 0 for s in sizes):
        raise ValueError("sizes entries must be >= 0")

    t = compute_skips(p)
    q = t.q
    result = SimResult(
        p=p,
        n=n,
        root=None,
        rounds=0,
        messages_total=0,
        correct=True,
        message_log=[] if collect_log else None,
    )
    active = [s > 0 for s in sizes]
    buffers: list[list[list]] = [[[None] * n for _ in range(p)] for _ in range(p)]
    for g in range(p):
        if active[g]:
            buffers[g][g] = [token(g, m) for m in range(n)]
    if p == 1:
        return result

    skips = t.skips
    # one receive schedule per (rank, root) pair, send blocks cross-indexed
    recv_rows = [recv_schedule(d, t).blocks for d in range(p)]
    recvblocks: list[list[list[int]]] = []
    sendblocks: list[list[list[int]]] = []
    x = virtual_rounds(n, q)
    result.x = x
    for g in range(p):
        rrows = [list(recv_rows[(g - j) % p]) for j in range(p)]
        srows = [
            [rrows[(j - skips[k]) % p][k] for k in range(q)] for j in range(p)
        ]
        recvblocks.append([_adjust_row(row, x, q) for row in rrows])
        sendblocks.append([_adjust_row(row, x, q) for row in srows])

    total_elems = sum(sizes)
    last = n - 1 + q
    for i in range(x, last + x):
        k = i % q
        sk = skips[k]
        packs: list[list[tuple[int, int, object]]] = []
        sent = 0
        for g in range(p):
            tproc = (g + sk) % p
            pack: list[tuple[int, int, object]] = []
            pack_elems = 0
            for j in range(p):
                if j != tproc and active[j]:
                    sb = sendblocks[g][j][k]
                    if sb >= 0:
                        idx = sb if sb < n else n - 1
                        tok = buffers[g][j][idx]
                        if tok is None:
                            _record(
                                result,
                                {"kind": "sent-empty-slot", "round": i, "src": g,
                                 "root": j, "block": idx},
                            )
                        pack.append((j, idx, tok))
                        pack_elems += _block_elems(sizes[j], n, idx)
                sendblocks[g][j][k] += q
            if pack_elems > total_elems - sizes[tproc]:
                _record(result, {"kind": "pack-size-bound", "round": i, "src": g})
            packs.append(pack)
            if pack:
                sent += 1
                if result.message_log is not None:
                    result.message_log.append(
                        {"round": i, "src": g, "dest": tproc,
                         "pack": [(j, idx) for j, idx, _ in pack]}
                    )
        for g in range(p):
            fproc = (g - sk) % p
            incoming = packs[fproc]
            pos = 0
            for j in range(p):
                if j != g and active[j]:
                    rb = recvblocks[g][j][k]
                    if rb >= 0:
                        idx = rb if rb < n else n - 1
                        if pos >= len(incoming):
                            _record(
                                result,
                                {"kind": "expected-block-missing", "round": i,
                                 "dest": g, "root": j, "block": idx},
                            )
                        else:
                            pj, pidx, tok = incoming[pos]
                            pos += 1
                            if pj != j:
                                _record(
                                    result,
                                    {"kind": "pack-misaligned", "round": i, "dest": g,
                                     "root": j, "got_root": pj},
                                )
                            cur = buffers[g][j][idx]
                            if cur is None:
                                buffers[g][j][idx] = tok
                            elif cur != tok:
                                _record(
                                    result,
                                    {"kind": "mismatched-overwrite", "round": i,
                                     "dest": g, "root": j, "block": idx},
                                )
                recvblocks[g][j][k] += q
            if pos != len(incoming):
                _record(
                    result,
                    {"kind": "unexpected-blocks", "round": i, "dest": g,
                     "extra": len(incoming) - pos},
                )
        result.round_messages.append(sent)
        if sent:
            result.rounds += 1
        result.messages_total += sent

    for g in range(p):
        for j in range(p):
            if not active[j]:
                continue
            for m in range(n):
                if buffers[g][j][m] != token(j, m):
                    _record(
                        result,
                        {"kind": "incomplete-buffer", "rank": g, "root": j, "block": m},
                    )
    result.correct = result.failures_total == 0
    return result

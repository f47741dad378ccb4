"""Compiled bulk schedule computation (numba).

Fills receive/send schedules for a contiguous rank range into numpy arrays.
The search is the same greedy DFS with removal as :mod:`circbcast.recv`,
rewritten with an explicit stack so numba can compile it; acceptance order,
outputs, and work counters are identical to the recursive version (the test
suite asserts exact equality across full rank sweeps).

int64 arithmetic bounds the supported processor count: the search works on
virtual ranks up to ``2 * p``, so ``p`` must stay below 2**61.  The pure
Python implementation has no such limit.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_KERNEL_P = 1 << 61

# slot i of the linked-list arrays holds skip index e = i - 1; slot 0 is the
# -1 sentinel shared by both ends of the list


@njit(cache=True)
def _baseblock(r, q, skips):
    if r == 0:
        return q
    k = q
    while k > 0:
        k -= 1
        s = skips[k]
        if s == r:
            return k
        if s < r:
            r -= s
    return q


@njit(cache=True)
def _recv_into(p, q, skips, r, out, nxt, prv, stk_rp, stk_e):
    """Fill out[0:q] with the normalized receive blocks of rank r.

    Returns (baseblock, recursive_calls, admissibility_misses).
    """
    b = _baseblock(r, q, skips)
    if q == 0:
        return b, 0, 0
    for e in range(q + 1):
        nxt[e + 1] = e
        prv[e + 1] = e + 2
    prv[q + 1] = 0
    nxt[0] = q + 1
    prv[0] = 1
    nxt[prv[b + 1]] = nxt[b + 1]
    prv[nxt[b + 1]] = prv[b + 1]

    rr = p + r
    s = p + p
    calls = 0
    misses = 0
    rp = 0
    e = q
    k = 0
    sp = 0
    cap = stk_rp.shape[0]
    entering = True
    while True:
        if entering:
            entering = False
            if k >= q or rp > rr - skips[k + 1]:
                e = -2  # force a return from this frame
        if e == -2 or e == -1:
            # frame done: unwind one level and run the acceptance check
            if sp == 0:
                break
            sp -= 1
            rp = stk_rp[sp]
            e = stk_e[sp]
            if k < q and rp <= rr - skips[k + 1] and s > rp + skips[e]:
                s = rp + skips[e]
                out[k] = e
                k += 1
                nxt[prv[e + 1]] = nxt[e + 1]
                prv[nxt[e + 1]] = prv[e + 1]
            e = nxt[e + 1] - 1
            continue
        if rp + skips[e] <= rr - skips[k]:
            calls += 1
            if sp >= cap:
                raise RuntimeError("schedule search exceeded its stack bound")
            stk_rp[sp] = rp
            stk_e[sp] = e
            sp += 1
            rp = rp + skips[e]
            entering = True
        else:
            misses += 1
            e = nxt[e + 1] - 1
    for k2 in range(q):
        if out[k2] == q:
            out[k2] = b
        else:
            out[k2] = out[k2] - q
    return b, calls, misses


@njit(cache=True)
def _send_into(p, q, skips, r, out, scratch, nxt, prv, stk_rp, stk_e):
    """Fill out[0:q] with the send blocks of rank r; returns the violation count."""
    if q == 0:
        return 0
    if r == 0:
        for k in range(q):
            out[k] = k
        return 0
    b = _baseblock(r, q, skips)
    rp = r
    c = b
    e = p
    viol = 0
    for k in range(q - 1, 0, -1):
        sk = skips[k]
        if rp < sk:
            if e < skips[k - 1] or (k == 1 and b > 0):
                out[k] = c
            elif rp == 0 and k == 2:
                if e == 2 and skips[2] == 3:
                    viol += 1
                    _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                    out[k] = scratch[k]
                else:
                    out[k] = c
            elif rp == 0 and sk == 5:
                if e == 3:
                    viol += 1
                    _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                    out[k] = scratch[k]
                else:
                    out[k] = c
            elif rp + sk >= e:
                viol += 1
                _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                out[k] = scratch[k]
            else:
                out[k] = c
            if e > sk:
                e = sk
        else:
            c = k - q
            if k == 1 or rp > sk or e - sk < skips[k - 1]:
                out[k] = c
            elif k == 2:
                if skips[2] == 3 and e == 5:
                    viol += 1
                    _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                    out[k] = scratch[k]
                else:
                    out[k] = c
            elif sk == 5:
                if e == 8:
                    viol += 1
                    _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                    out[k] = scratch[k]
                else:
                    out[k] = c
            elif rp + sk > e:
                viol += 1
                _recv_into(p, q, skips, (r + sk) % p, scratch, nxt, prv, stk_rp, stk_e)
                out[k] = scratch[k]
            else:
                out[k] = c
            rp -= sk
            e -= sk
    out[0] = b - q
    return viol


@njit(cache=True)
def fill_schedules(p, q, skips, lo, hi, recv_out, send_out, b_out, viol_hist, stats):
    """Schedules for ranks lo..hi-1 of a p-rank graph.

    recv_out/send_out are (hi - lo, q) int8, b_out (hi - lo,) int8;
    viol_hist accumulates violation counts; stats is
    [max_recursive_calls, max_admissibility_misses, max_violations],
    updated with running maxima.
    """
    nxt = np.empty(q + 2, np.int64)
    prv = np.empty(q + 2, np.int64)
    stk_rp = np.empty(4 * q + 8, np.int64)
    stk_e = np.empty(4 * q + 8, np.int64)
    row = np.empty(max(q, 1), np.int64)
    scratch = np.empty(max(q, 1), np.int64)
    for r in range(lo, hi):
        b, calls, misses = _recv_into(p, q, skips, r, row, nxt, prv, stk_rp, stk_e)
        i = r - lo
        b_out[i] = b
        for k in range(q):
            recv_out[i, k] = row[k]
        viol = _send_into(p, q, skips, r, row, scratch, nxt, prv, stk_rp, stk_e)
        for k in range(q):
            send_out[i, k] = row[k]
        viol_hist[viol] += 1
        if calls > stats[0]:
            stats[0] = calls
        if misses > stats[1]:
            stats[1] = misses
        if viol > stats[2]:
            stats[2] = viol


@njit(cache=True)
def time_schedules(p, q, skips):
    """Compute all schedules of a p-rank graph without storing them.

    Returns (max_calls, max_misses, max_violations); used by the benchmark
    so timing excludes array traffic.
    """
    nxt = np.empty(q + 2, np.int64)
    prv = np.empty(q + 2, np.int64)
    stk_rp = np.empty(4 * q + 8, np.int64)
    stk_e = np.empty(4 * q + 8, np.int64)
    row = np.empty(max(q, 1), np.int64)
    scratch = np.empty(max(q, 1), np.int64)
    mc = mm = mv = 0
    for r in range(p):
        b, calls, misses = _recv_into(p, q, skips, r, row, nxt, prv, stk_rp, stk_e)
        viol = _send_into(p, q, skips, r, row, scratch, nxt, prv, stk_rp, stk_e)
        if calls > mc:
            mc = calls
        if misses > mm:
            mm = misses
        if viol > mv:
            mv = viol
    return mc, mm, mv

#!/usr/bin/env python3
"""Full receive/send schedule tables, in the round-by-rank orientation.

Schedule entries are signed: a non-negative entry names a block of the
current phase (each rank receives exactly one of those per phase, its
baseblock), a negative entry v names block v + q of the previous phase.
The defining cross-property: what rank r sends in round k is exactly what
rank (r + skips[k]) % p receives in round k.

Equivalent command line: circbcast schedule --p 17
"""

from circbcast import compute_skips, schedule_table, to_proc


def print_table(p):
    t, schedules = schedule_table(p)
    width = max(3, len(str(p - 1)) + 1)

    def row(label, values):
        print(label.ljust(9) + "".join(str(v).rjust(width) for v in values))

    print(f"p={p}, q={t.q}, skips={list(t.skips)}")
    row("r:", [s.r for s in schedules])
    row("b:", [s.b for s in schedules])
    for k in range(t.q):
        row(f"recv[{k}]:", [s.recv[k] for s in schedules])
    for k in range(t.q):
        row(f"send[{k}]:", [s.send[k] for s in schedules])
    return t, schedules


if __name__ == "__main__":
    t, schedules = print_table(17)

    print("\nsend[k](r) == recv[k](to-processor) holds everywhere:")
    ok = all(
        schedules[r].send[k] == schedules[to_proc(r, k, t)].recv[k]
        for r in range(t.p)
        for k in range(t.q)
    )
    print(f"  checked {t.p * t.q} entries: {ok}")

    print()
    print_table(16)

#!/usr/bin/env python3
"""Per-rank schedule-computation time versus q = ceil(log2 p).

Both schedules for one rank cost O(log p); the per-rank average should
grow at most linearly from q=10 to q=20.  Absolute numbers depend on the
machine and engine; the growth is the signal.

Equivalent command line: circbcast bench --p 1024,32768,1048576 --repeat 3
"""

from circbcast.bench import bench_schedules

if __name__ == "__main__":
    print("p,q,total_s,per_proc_us,engine")
    results = []
    for exp in (10, 12, 14, 16, 18, 20):
        r = bench_schedules(1 << exp, repeat=3)
        results.append(r)
        print(f"{r.p},{r.q},{r.total_s:.4f},{r.per_proc_us:.4f},{r.engine}")
    ratio = results[-1].per_proc_us / results[0].per_proc_us
    print(f"\nper-rank growth q=10 -> q=20: {ratio:.2f}x (linear-in-q bound: <= 3x)")

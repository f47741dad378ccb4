#!/usr/bin/env python3
"""Skip tables, baseblocks, and canonical skip sequences.

The communication graph for p ranks is a circulant graph with
q = ceil(log2 p) skips, generated by halving p upward-rounded until 1.
Every rank decomposes into a sum of distinct skips; the smallest index of
the canonical decomposition is the rank's baseblock, the first real block
it receives during a broadcast.
"""

from circbcast import baseblock, canonical_skip_sequence, compute_skips, from_proc, to_proc


def show(p):
    t = compute_skips(p)
    print(f"p={p}: q={t.q}, skips={list(t.skips)}")
    for r in range(p):
        seq = canonical_skip_sequence(r, t)
        terms = " + ".join(str(t.skips[e]) for e in seq.indices) or "0"
        print(f"  r={r:>3}: baseblock={baseblock(r, t)}  {r} = {terms}"
              f"  (indices {list(seq.indices)})")


if __name__ == "__main__":
    show(17)
    print()
    show(16)

    print("\nround-k neighbors of rank 0 for p=17:")
    t = compute_skips(17)
    for k in range(t.q):
        print(f"  k={k}: sends to {to_proc(0, k, t):>2}, receives from {from_proc(0, k, t):>2}")

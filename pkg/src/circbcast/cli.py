"""Command line front end.

Subcommands:

- ``skips``     print the skip table of a graph
- ``schedule``  print baseblocks and receive/send schedules
- ``verify``    check the four correctness conditions over a range of p
- ``simulate``  run the n-block broadcast in the lockstep simulator
- ``allgather`` run the n-block all-to-all broadcast
- ``bench``     time schedule computation per rank

Exit codes: 0 success, 1 verification or simulation failure, 2 usage error.
``CB_LOG`` (debug/info/warning/error) controls log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .schedule import schedule_table
from .skips import compute_skips

# verify / sim / bench are imported inside their commands so that the cheap
# inspection commands do not pay the numpy/numba import cost

log = logging.getLogger("circbcast")

_FORMATS = ("text", "csv", "json")


def _range_arg(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 1 <= lo <= hi, got {text!r}")
    return lo, hi


def _fault_arg(text: str) -> tuple[int, int, str, int]:
    parts = text.split(":")
    if len(parts) != 4 or parts[2] not in ("recv", "send"):
        raise argparse.ArgumentTypeError(
            f"expected R:K:recv|send:DELTA, got {text!r}"
        )
    try:
        r, k, delta = int(parts[0]), int(parts[1]), int(parts[3])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-integer field in {text!r}")
    if delta == 0:
        raise argparse.ArgumentTypeError("fault delta must be nonzero")
    return r, k, parts[2], delta


def _pset_arg(text: str) -> list[int]:
    from .bench import parse_pset

    try:
        return parse_pset(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def cmd_skips(args) -> int:
    t = compute_skips(args.p)
    if args.format == "json":
        print(json.dumps({"p": t.p, "q": t.q, "skips": list(t.skips)}))
    elif args.format == "csv":
        print("p,q,skips")
        print(f"{t.p},{t.q},{' '.join(map(str, t.skips))}")
    else:
        print(f"p={t.p} q={t.q} skips={list(t.skips)}")
    return 0


def _render_schedule_text(t, schedules) -> str:
    q = t.q
    rows = [("r:", [s.r for s in schedules]), ("b:", [s.b for s in schedules])]
    for k in range(q):
        rows.append((f"recv[{k}]:", [s.recv[k] for s in schedules]))
    for k in range(q):
        rows.append((f"send[{k}]:", [s.send[k] for s in schedules]))
    label_w = max(len(lbl) for lbl, _ in rows)
    col_w = [
        max(len(str(row[i])) for _, row in rows) for i in range(len(schedules))
    ]
    lines = []
    for lbl, row in rows:
        cells = " ".join(str(v).rjust(col_w[i]) for i, v in enumerate(row))
        lines.append(f"{lbl.ljust(label_w)} {cells}")
    return "\n".join(lines)


def cmd_schedule(args) -> int:
    try:
        t, schedules = schedule_table(args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.r is not None:
        if not 0 <= args.r < args.p:
            print(f"error: rank {args.r} out of range [0, {args.p})", file=sys.stderr)
            return 2
        schedules = [schedules[args.r]]
    q = t.q
    if args.format == "json":
        objs = [
            {"r": s.r, "b": s.b, "recv": s.recv, "send": s.send} for s in schedules
        ]
        if args.r is not None:
            print(json.dumps(objs[0]))
        else:
            print(json.dumps({"p": t.p, "q": q, "skips": list(t.skips), "schedules": objs}))
    elif args.format == "csv":
        head = ["r", "b"] + [f"recv{k}" for k in range(q)] + [f"send{k}" for k in range(q)]
        print(",".join(head))
        for s in schedules:
            print(",".join(map(str, [s.r, s.b] + s.recv + s.send)))
    else:
        if args.r is not None:
            s = schedules[0]
            print(f"p={t.p} q={q} r={s.r} b={s.b}")
            print("recv: " + " ".join(map(str, s.recv)))
            print("send: " + " ".join(map(str, s.send)))
        else:
            print(_render_schedule_text(t, schedules))
    return 0


def cmd_verify(args) -> int:
    from . import verify as V

    if args.range is None and args.p is None:
        print("error: verify needs --range or --p", file=sys.stderr)
        return 2
    lo, hi = args.range if args.range is not None else (args.p, args.p)

    def stream(report: V.VerificationReport) -> None:
        if args.quiet and report.ok:
            return
        if args.format == "json":
            print(json.dumps(report.to_dict()))
        else:
            st = report.stats
            status = "pass" if report.ok else "FAIL"
            line = (
                f"p={report.p} {status} max_calls={st.max_recursive_calls}"
                f" max_misses={st.max_admissibility_misses}"
                f" max_violations={st.max_violations} t={st.seconds:.3f}s"
            )
            if not report.ok:
                line += " " + "; ".join(c.detail for c in report.counterexamples)
            print(line)

    if args.inject_fault is not None:
        import numpy as np

        r, k, which, delta = args.inject_fault
        summary = V.RangeSummary(p_lo=lo, p_hi=hi)
        for p in range(lo, hi + 1):
            arrays = V.compute_schedule_arrays(p, engine=args.engine)
            if not (0 <= r < p and 0 <= k < arrays.q):
                print(
                    f"error: fault coordinate r={r},k={k} invalid for p={p}",
                    file=sys.stderr,
                )
                return 2
            recv = arrays.recv.astype(np.int32)
            send = arrays.send.astype(np.int32)
            (recv if which == "recv" else send)[r, k] += delta
            passed, cexs = V.check_conditions(p, arrays.q, arrays.b, recv, send)
            report = V.VerificationReport(
                p=p, passed=passed, counterexamples=cexs, stats=V.VerifyStats()
            )
            summary.absorb(report)
            stream(report)
            if not report.ok and not args.keep_going:
                break
    else:
        summary = V.verify_range(
            lo,
            hi,
            engine=args.engine,
            jobs=args.jobs,
            checkpoint=args.checkpoint,
            stop_on_fail=not args.keep_going,
            on_report=stream,
        )
    if args.format == "json":
        print(json.dumps({"summary": summary.to_dict()}))
    else:
        print(
            f"summary: [{summary.p_lo},{summary.p_hi}] checked={summary.checked}"
            f" pass={summary.all_passed}"
            f" max_calls={summary.max_recursive_calls}"
            f" max_misses={summary.max_admissibility_misses}"
            f" max_violations={summary.max_violations}"
            f" t={summary.seconds:.3f}s"
        )
    return 0 if summary.all_passed else 1


def cmd_simulate(args) -> int:
    from .sim import run_broadcast

    try:
        result = run_broadcast(args.p, args.n, args.root, collect_log=args.full_log)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        print(
            f"p={result.p} n={result.n} root={result.root} rounds={result.rounds}"
            f" messages={result.messages_total} correct={result.correct}"
        )
        for f in result.failures:
            print(f"failure: {f}")
    else:
        print(json.dumps(result.to_dict()))
    return 0 if result.correct else 1


def cmd_allgather(args) -> int:
    from .sim import make_sizes, run_allgatherv

    try:
        sizes = make_sizes(args.sizes, args.p, args.n, args.m)
        result = run_allgatherv(args.p, args.n, sizes, collect_log=args.full_log)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        print(
            f"p={result.p} n={result.n} sizes={args.sizes} rounds={result.rounds}"
            f" messages={result.messages_total} correct={result.correct}"
        )
        for f in result.failures:
            print(f"failure: {f}")
    else:
        out = result.to_dict()
        out["sizes"] = sizes
        print(json.dumps(out))
    return 0 if result.correct else 1


def cmd_bench(args) -> int:
    from .bench import bench_many

    log.info("benchmarking %d processor counts", len(args.p))
    results = bench_many(args.p, engine=args.engine, repeat=args.repeat, jobs=args.jobs)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in results]))
    else:
        print("p,q,total_s,per_proc_us")
        for r in results:
            print(f"{r.p},{r.q},{r.total_s:.6f},{r.per_proc_us:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circbcast",
        description="Round-optimal broadcast schedules on circulant graphs: "
        "inspect, verify, simulate, benchmark.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_skips = sub.add_parser("skips", help="print the skip table")
    p_skips.add_argument("--p", type=_positive, required=True, help="processor count")
    p_skips.add_argument("--format", choices=_FORMATS, default="text")
    p_skips.set_defaults(func=cmd_skips)

    p_sched = sub.add_parser("schedule", help="print receive/send schedules")
    p_sched.add_argument("--p", type=_positive, required=True, help="processor count")
    p_sched.add_argument("--r", type=int, default=None, help="single rank (default: all)")
    p_sched.add_argument("--format", choices=_FORMATS, default="text")
    p_sched.set_defaults(func=cmd_schedule)

    p_ver = sub.add_parser("verify", help="verify correctness conditions over a range")
    p_ver.add_argument("--range", type=_range_arg, default=None, metavar="LO:HI",
                       help="inclusive processor-count range")
    p_ver.add_argument("--p", type=_positive, default=None, help="single processor count")
    p_ver.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    p_ver.add_argument("--checkpoint", default=None, metavar="FILE",
                       help="resume file holding the last completed p")
    p_ver.add_argument("--format", choices=("text", "json"), default="text")
    p_ver.add_argument("--engine", choices=("auto", "kernel", "pure"), default="auto")
    p_ver.add_argument("--keep-going", action="store_true",
                       help="continue past the first failing p")
    p_ver.add_argument("--quiet", action="store_true",
                       help="print only failures and the summary")
    p_ver.add_argument("--inject-fault", type=_fault_arg, default=None,
                       metavar="R:K:recv|send:DELTA",
                       help="corrupt one schedule entry before checking "
                       "(validates the checker; expect exit 1)")
    p_ver.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate", help="run the broadcast simulator")
    p_sim.add_argument("--p", type=_positive, required=True)
    p_sim.add_argument("--n", type=_positive, required=True, help="block count")
    p_sim.add_argument("--root", type=int, default=0)
    p_sim.add_argument("--format", choices=("text", "json"), default="json")
    p_sim.add_argument("--full-log", action="store_true",
                       help="include the per-message log in the result")
    p_sim.set_defaults(func=cmd_simulate)

    p_all = sub.add_parser("allgather", help="run the all-to-all broadcast simulator")
    p_all.add_argument("--p", type=_positive, required=True)
    p_all.add_argument("--n", type=_positive, required=True, help="blocks per root")
    p_all.add_argument("--sizes", choices=("uniform", "mod3", "degenerate"),
                       default="uniform", help="input shape")
    p_all.add_argument("--m", type=_positive, default=None,
                       help="total element count (default p*n)")
    p_all.add_argument("--format", choices=("text", "json"), default="json")
    p_all.add_argument("--full-log", action="store_true")
    p_all.set_defaults(func=cmd_allgather)

    p_bench = sub.add_parser("bench", help="time schedule computation")
    p_bench.add_argument("--p", type=_pset_arg, required=True,
                         help="processor counts: comma list and lo:hi ranges")
    p_bench.add_argument("--repeat", type=_positive, default=1)
    p_bench.add_argument("--jobs", type=_positive, default=1,
                         help="worker processes (shared-machine timings)")
    p_bench.add_argument("--engine", choices=("auto", "kernel", "pure"), default="auto")
    p_bench.add_argument("--format", choices=("csv", "json"), default="csv")
    p_bench.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    level = os.environ.get("CB_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

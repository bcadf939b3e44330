"""Benchmark the compiled kernel against the pure-Python reference.

Both backends run the same random instance batch through classification
and the two solve entry points; results are per-call microseconds.  The
backends are bit-identical by construction (the test suite enforces it),
so this only measures speed.

Usage: python benchmarks/bench_kernel.py [--count N] [--seed S] [--repeat K]
"""

import argparse
import statistics
import time

from v2vgame import _kernel_py
from v2vgame.analysis import random_endogenous_instances

try:
    from v2vgame import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def _arg_pack(instances):
    packed = []
    for inst in instances:
        ck, cp = inst.curves.crash.kernel_args
        packed.append((inst.beta, inst.y, inst.r, inst.t_val, inst.f_val, ck, cp))
    return packed


def _time_op(label, fn, packed, repeat):
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        for args in packed:
            fn(*args)
        runs.append((time.perf_counter() - start) / len(packed) * 1e6)
    return label, min(runs), statistics.median(runs)


def bench(backend, name, packed, repeat):
    ops = [
        ("classify", lambda *a: backend.classify(*a)),
        ("solve_fast[advisory]", lambda *a: backend.solve_fast(1, *a)),
        ("solve_fast[updating]", lambda *a: backend.solve_fast(0, *a)),
        ("solve_full[advisory]", lambda *a: backend.solve_full(1, *a)),
        ("solve_full[updating]", lambda *a: backend.solve_full(0, *a)),
    ]
    rows = []
    for label, fn in ops:
        rows.append(_time_op(label, fn, packed, repeat))
    print("\n%s backend" % name)
    print("  %-22s %12s %12s" % ("operation", "best us/call", "median"))
    for label, best, med in rows:
        print("  %-22s %12.2f %12.2f" % (label, best, med))
    return {label: best for label, best, _ in rows}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=2000, help="instances per pass")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--repeat", type=int, default=5, help="timing passes per op")
    args = parser.parse_args()

    instances = random_endogenous_instances(args.count, args.seed)
    packed = _arg_pack(instances)
    print(
        "%d random endogenous instances, %d passes per operation"
        % (args.count, args.repeat)
    )

    py = bench(_kernel_py, "pure-Python", packed, args.repeat)
    if _kernel_c is None:
        print("\ncompiled kernel not built; skipping comparison")
        return
    cy = bench(_kernel_c, "compiled", packed, args.repeat)

    print("\nspeedup (pure-Python best / compiled best)")
    for label in py:
        print("  %-22s %11.1fx" % (label, py[label] / cy[label]))


if __name__ == "__main__":
    main()

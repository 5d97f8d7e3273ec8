#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on a representative workload with both backends and
prints a timing table.  The numba timings exclude JIT compilation (one warmup
call per kernel).

    python3 benchmarks/bench_kernels.py [--worlds 4] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from imlab.kernels import _numpy as numpy_backend

try:
    from imlab.kernels import _numba as numba_backend
except ImportError:
    numba_backend = None

from imlab.search import canonical_formulas, preorder_masks, transitive_masks, upset_masks
from imlab.semantics import compile_bank


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def workloads(n):
    pre = np.asarray(preorder_masks(n), np.int64)
    mod = np.asarray(transitive_masks(n), np.int64)

    forms = canonical_formulas(("p", "q"), 2, 2)
    code, starts, ends = compile_bank(forms, ("p", "q"))

    # one mid-sized frame for the evaluation kernels
    pre_rows = numpy_backend.unpack_rows(int(pre[len(pre) // 2]), n)
    mod_rows = numpy_backend.unpack_rows(int(mod[len(mod) // 3]), n)
    lead_rows = numpy_backend.transitive_closure_rows(
        numpy_backend.compose_rows(pre_rows, mod_rows))
    itab, dtab, etab = numpy_backend.space_tables(pre_rows, mod_rows, lead_rows)
    full = (1 << n) - 1
    opens = np.asarray(upset_masks([int(r) for r in pre_rows], n), np.int64)
    nv = len(opens) ** 2
    assign = np.arange(nv, dtype=np.int64)
    propmasks = np.stack([opens[(assign // len(opens)) % len(opens)],
                          opens[assign % len(opens)]])

    def make(backend):
        return {
            "frame_suite": lambda: backend.frame_suite(pre, mod, n),
            "hed_loclin_scan": lambda: backend.hed_loclin_scan(pre, n),
            "bank_eval_operator": lambda: backend.bank_eval_operator(
                code, starts, ends, propmasks, itab, dtab, etab, full),
            "bank_eval_relational": lambda: backend.bank_eval_relational(
                code, starts, ends, propmasks, pre_rows, mod_rows, lead_rows, full),
            "first_refuting_valuation": lambda: [
                backend.first_refuting_valuation(
                    code[starts[i]:ends[i]], opens, 2, itab, dtab, etab, full)
                for i in range(0, len(starts), 4)],
        }

    return make


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worlds", type=int, default=4, choices=(1, 2, 3, 4))
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    make = workloads(args.worlds)
    numpy_work = make(numpy_backend)

    print(f"workload: all labeled frames on {args.worlds} worlds "
          f"({len(preorder_masks(args.worlds))} preorders x "
          f"{len(transitive_masks(args.worlds))} transitive relations), "
          f"best of {args.repeat}")
    header = f"{'kernel':<26} {'numpy':>10} {'numba':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    numba_work = make(numba_backend) if numba_backend is not None else None
    for name, fn in numpy_work.items():
        t_np, res_np = timed(fn, args.repeat)
        if numba_work is None:
            print(f"{name:<26} {t_np * 1e3:>8.1f}ms {'n/a':>10} {'':>9}")
            continue
        numba_work[name]()  # warm up the JIT
        t_nb, res_nb = timed(numba_work[name], args.repeat)
        if name in ("frame_suite",):
            assert np.array_equal(res_np[0], res_nb[0]), "backend results differ"
        print(f"{name:<26} {t_np * 1e3:>8.1f}ms {t_nb * 1e3:>8.1f}ms "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()

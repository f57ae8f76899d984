#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times Viterbi decoding and the scaled forward-backward pass on synthetic
instances of growing size and prints a speedup table.  Also spot-checks
that both backends return bit-identical results on every timed instance.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import random
import time

import numpy as np

from morphtag import _kernels_py

try:
    from morphtag import _speedups
except ImportError:
    _speedups = None


def make_instance(rng, n_positions, n_tags, max_options):
    opt_tags, offsets = [], [0]
    for _ in range(n_positions):
        size = rng.randint(1, max_options)
        opt_tags.extend(sorted(rng.sample(range(n_tags), size)))
        offsets.append(len(opt_tags))
    trans = np.empty((n_tags + 1, n_tags))
    for r in range(n_tags + 1):
        row = np.array([rng.random() + 0.01 for _ in range(n_tags)])
        trans[r] = row / row.sum()
    emits = np.array([rng.random() + 0.001 for _ in range(len(opt_tags))])
    return (
        np.asarray(opt_tags, dtype=np.int32),
        emits,
        np.asarray(offsets, dtype=np.int32),
        trans,
        n_tags,
    )


def time_backend(fn, instances, log_space, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        for opt_tags, emits, offsets, trans, k in instances:
            if log_space:
                with np.errstate(divide="ignore"):
                    result = fn(opt_tags, np.log(emits), offsets, np.log(trans), k)
            else:
                result = fn(opt_tags, emits, offsets, trans, k)
        best = min(best, time.perf_counter() - start)
    return best, result


def check_equal(py_out, c_out, kind):
    if kind == "viterbi":
        assert list(py_out[0]) == list(c_out[0]) and py_out[1] == c_out[1]
    else:
        assert py_out[0] == c_out[0]
        assert list(py_out[1]) == list(c_out[1])
        assert [list(r) for r in py_out[2]] == [list(r) for r in c_out[2]]


def main():
    if _speedups is None:
        print("compiled kernels not built; run "
              "`pip install -e . --no-build-isolation` first")
        return
    rng = random.Random(1)
    shapes = [
        ("short sentences", 50, 12, 8, 4),
        ("medium sentences", 20, 60, 12, 6),
        ("long sequences", 5, 400, 20, 10),
        ("wide tag-sets", 5, 120, 40, 25),
    ]
    print(f"{'workload':<18} {'kernel':<16} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, count, n_pos, n_tags, max_opt in shapes:
        instances = [make_instance(rng, n_pos, n_tags, max_opt) for _ in range(count)]
        for kind, py_fn, c_fn, log_space in (
            ("viterbi", _kernels_py.viterbi_kernel, _speedups.viterbi_kernel, True),
            ("forward-backward", _kernels_py.forward_backward_kernel,
             _speedups.forward_backward_kernel, False),
        ):
            t_py, out_py = time_backend(py_fn, instances, log_space, repeats=3)
            t_c, out_c = time_backend(c_fn, instances, log_space, repeats=3)
            check_equal(out_py, out_c, kind)
            print(f"{name:<18} {kind:<16} {t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms "
                  f"{t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()

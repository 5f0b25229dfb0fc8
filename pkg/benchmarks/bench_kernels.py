"""Benchmark the compiled kernel core against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Times the four kernel entry points on certificate-sized workloads and the
two end-to-end pipelines under each backend.
"""

import argparse
import math
import os
import time

import numpy as np


def _timeit(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_workloads():
    rng = np.random.default_rng(0)
    t = 2.0 * np.pi * np.arange(4096) / 4096
    curve = np.stack(
        [np.cos(t) + 0.2 * np.cos(3 * t), np.sin(t) + 0.15 * np.sin(5 * t)], axis=1
    )
    powers = np.array([(i, j) for i in range(5) for j in range(5 - i)], dtype=np.int64)
    coeffs = rng.uniform(-2, 2, size=powers.shape[0])
    xs = rng.uniform(-2, 2, size=40_000)
    ys = rng.uniform(-2, 2, size=40_000)
    probes = 0.5 * rng.uniform(-1, 1, size=(100, 2))
    quad_t = 2.0 * np.pi * np.arange(2048) / 2048
    unit = np.stack([np.cos(quad_t), np.sin(quad_t)], axis=1)
    samples = np.stack([np.cos(2 * quad_t), np.sin(2 * quad_t)], axis=1)
    pts = 0.6 * rng.uniform(-1, 1, size=(10_000, 2))

    def workloads(impl):
        cand = impl.segment_candidate_pairs(curve)
        return {
            "poly_eval_grid (25 terms, 40k pts)": lambda: impl.poly_eval_grid(
                powers, coeffs, xs, ys
            ),
            "segment pairs + filter (n=4096)": lambda: impl.orientation_filter_pairs(
                curve, *impl.segment_candidate_pairs(curve)
            ),
            "winding (100 pts x 4096 verts)": lambda: impl.winding_accumulate(
                curve, probes
            ),
            "poisson (10k pts x 2048 quad)": lambda: impl.poisson_apply(
                samples, unit, pts
            ),
        }

    return workloads


def pipeline_workloads():
    from interpen.lewy import build_lewy_counterexample
    from interpen.rkc import build_rkc_counterexample
    from interpen.systems import lame

    k = 2.0 * (1.0 + math.sqrt(10.0))
    return {
        "rkc pipeline (lame 1,1)": lambda: build_rkc_counterexample(lame(1.0, 1.0), k=k),
        "lewy pipeline (lame 1,1)": lambda: build_lewy_counterexample(lame(1.0, 1.0)),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    from interpen._kernels import _fallback

    backends = [("python", _fallback)]
    try:
        from interpen._kernels import _core

        backends.append(("compiled", _core))
    except ImportError:
        print("compiled backend not built; benchmarking the fallback only")

    make = kernel_workloads()
    names = list(make(backends[0][1]).keys())
    results = {
        bname: [_timeit(fn, args.repeat) for fn in make(impl).values()]
        for bname, impl in backends
    }

    width = max(len(n) for n in names) + 2
    header = "kernel".ljust(width) + "".join(f"{b:>12}" for b, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for i, name in enumerate(names):
        row = name.ljust(width)
        for bname, _ in backends:
            row += f"{results[bname][i] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            row += f"{results['python'][i] / results['compiled'][i]:>9.1f}x"
        print(row)

    print()
    import interpen._kernels as kernels
    import interpen.geometry as geometry
    import interpen.polynomials as polynomials

    pipe_names = list(pipeline_workloads().keys())
    pipe_results = {}
    for bname, impl in backends:
        geometry._impl = impl
        polynomials._impl = impl
        pipe_results[bname] = [
            _timeit(fn, args.repeat) for fn in pipeline_workloads().values()
        ]
    geometry._impl = kernels.impl
    polynomials._impl = kernels.impl

    header = "pipeline".ljust(width) + "".join(f"{b:>12}" for b, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for i, name in enumerate(pipe_names):
        row = name.ljust(width)
        for bname, _ in backends:
            row += f"{pipe_results[bname][i] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            row += f"{pipe_results['python'][i] / pipe_results['compiled'][i]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()

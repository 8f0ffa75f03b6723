"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both implementations are imported directly, so the ``FUZZYQP_BACKEND``
setting does not matter here. Numba functions are called once before timing
so compilation is excluded; the first-call compile time is reported
separately.
"""
import argparse
import time

import numpy as np

from fuzzyqp import _kernels, build_system, example_instance
from fuzzyqp.crisp import aspiration_interval
from fuzzyqp.generate import random_box_polytope, random_instance
from fuzzyqp.polytope import Polyhedron


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def system_arrays(inst):
    return build_system(inst, [aspiration_interval(inst, q) for q in range(inst.k)]).arrays()


def row(label, t_numba, t_numpy):
    print(f"{label:<38}{t_numba * 1e3:>12.2f}{t_numpy * 1e3:>12.2f}{t_numpy / t_numba:>10.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    cases_m = [("example, 401^2 grid", example_instance(), 401 ** 2)]
    inst = random_instance(rng, n=4, k=3, m=6)
    cases_m.append(("n=4 k=3 m=6, 2^18 points", inst, 2 ** 18))

    arrays = system_arrays(cases_m[0][1])
    t0 = time.perf_counter()
    _kernels.membership_matrix_numba(np.zeros((1, 2)), *arrays)
    compile_m = time.perf_counter() - t0
    A, rhs, lo, hi = random_box_polytope(rng, 2, 2)
    P = Polyhedron.from_box(A, rhs, lo, hi)
    t0 = time.perf_counter()
    _kernels.active_set_solutions_numba(P.A, P.rhs, 2, 1e-12)
    compile_v = time.perf_counter() - t0
    print(f"first-call compile: membership {compile_m:.2f}s, active sets {compile_v:.2f}s "
          f"(cached on disk afterwards)\n")

    print(f"{'case':<38}{'numba ms':>12}{'numpy ms':>12}{'speedup':>11}")
    for label, inst, npts in cases_m:
        arrays = system_arrays(inst)
        box = np.column_stack([np.zeros(inst.n), inst.bounds.u + inst.bounds.t])
        X = rng.uniform(box[:, 0], box[:, 1], (npts, inst.n))
        a = _kernels.membership_matrix_numba(X, *arrays)
        b = _kernels.membership_matrix_numpy(X, *arrays)
        assert np.allclose(a, b, atol=1e-12)
        row(f"membership {label}",
            best_of(lambda: _kernels.membership_matrix_numba(X, *arrays), args.repeat),
            best_of(lambda: _kernels.membership_matrix_numpy(X, *arrays), args.repeat))

    for n, m in [(2, 2), (4, 6), (6, 8), (7, 10), (8, 12)]:
        A, rhs, lo, hi = random_box_polytope(rng, n, m)
        P = Polyhedron.from_box(A, rhs, lo, hi)
        G, h = P.A, P.rhs
        row(f"active sets n={n}, rows={len(h)}",
            best_of(lambda: _kernels.active_set_solutions_numba(G, h, n, 1e-12), args.repeat),
            best_of(lambda: _kernels.active_set_solutions_numpy(G, h, n, 1e-12), args.repeat))


if __name__ == "__main__":
    main()

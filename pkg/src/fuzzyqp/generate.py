"""Seeded random instances with nonnegative data, for property tests and benchmarks."""
import numpy as np

from .instance import FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    B = rng.uniform(-1.0, 1.0, (n, rank))
    Q = B @ B.T
    return 0.5 * (Q + Q.T)


def random_instance(rng, n=2, k=2, m=2) -> FuzzyMoqpInstance:
    objectives = [QuadraticObjective(rng.uniform(0.0, 5.0, n), random_psd(rng, n)) for _ in range(k)]
    l = rng.uniform(0.0, 3.0, n)
    rows = []
    for _ in range(m):
        a = rng.uniform(0.5, 3.0, n)
        d = rng.uniform(0.2, 1.5, n)
        # every crisp variant must contain the nominal lower corner
        b = (a + d) @ l + rng.uniform(2.0, 15.0)
        rows.append(FuzzyRow(a, d, b, rng.uniform(1.0, 8.0)))
    bounds = FuzzyBounds(l=l, r=rng.uniform(0.3, 1.5, n), u=l + rng.uniform(1.0, 8.0, n),
                         t=rng.uniform(0.5, 3.0, n))
    return FuzzyMoqpInstance(objectives, rows, bounds, n)


def random_box_polytope(rng, n, m):
    """``(A, rhs, lo, hi)`` for a random box-bounded polytope containing ``lo``."""
    lo = rng.uniform(0.0, 2.0, n)
    hi = lo + rng.uniform(0.5, 5.0, n)
    A = rng.uniform(-1.0, 3.0, (m, n))
    # keep lo strictly feasible so the region is nonempty
    rhs = A @ lo + rng.uniform(0.5, 6.0, m)
    return A, rhs, lo, hi

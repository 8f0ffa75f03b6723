"""The numba kernels and their numpy fallbacks must agree."""
import itertools

import numpy as np
import pytest

from fuzzyqp import _kernels
from fuzzyqp.generate import random_box_polytope, random_instance
from fuzzyqp.polytope import Polyhedron, vertex_array
from fuzzyqp.solver import build_system
from fuzzyqp.crisp import AspirationInterval

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("seed", range(5))
def test_membership_matrix_backends_agree(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n=3, k=2, m=3)
    intervals = [AspirationInterval(10.0, 80.0), AspirationInterval(5.0, 5.0)]
    system = build_system(inst, intervals)
    X = rng.uniform(0.0, 10.0, (5000, 3))
    a = _kernels.membership_matrix(X, system.arrays(), backend="numba")
    b = _kernels.membership_matrix(X, system.arrays(), backend="numpy")
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)


def test_membership_matrix_without_rows(example_system):
    from fuzzyqp.solver import MembershipSystem

    s = MembershipSystem(example_system.objectives, example_system.objective_mfs, (),
                         example_system.upper_mfs, example_system.lower_mfs)
    X = np.array([[1.0, 5.0], [3.0, 3.0]])
    a = _kernels.membership_matrix(X, s.arrays(), backend="numba")
    b = _kernels.membership_matrix(X, s.arrays(), backend="numpy")
    assert a.shape == (2, 6)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("seed,n,m", [(0, 2, 2), (1, 3, 3), (2, 4, 2), (3, 3, 0)])
def test_vertex_enumeration_backends_agree(seed, n, m):
    A, rhs, lo, hi = random_box_polytope(np.random.default_rng(seed), n, m)
    P = Polyhedron.from_box(A, rhs, lo, hi)
    np.testing.assert_allclose(vertex_array(P, backend="numba"), vertex_array(P, backend="numpy"),
                               atol=1e-10)


def test_backend_flag_is_validated(monkeypatch):
    monkeypatch.setenv("FUZZYQP_BACKEND", "cuda")
    with pytest.raises(ValueError):
        _kernels._requested_backend()
    monkeypatch.setenv("FUZZYQP_BACKEND", "numpy")
    assert _kernels._requested_backend() == "numpy"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_active_set_flags_agree_near_singular(n):
    # subsystems whose condition numbers straddle the 1e12 cut-off
    rng = np.random.default_rng(n)
    rows = []
    for log_eps in np.linspace(-15, -9, 13):
        base = rng.normal(size=n)
        rows.append(base)
        rows.append(base + 10.0 ** log_eps * rng.normal(size=n))
    rows += list(np.eye(n)) + list(-np.eye(n))
    G = np.array(rows)
    h = rng.uniform(1.0, 2.0, len(G))
    pa, oka = _kernels.active_set_solutions(G, h, n, backend="numba")
    pb, okb = _kernels.active_set_solutions(G, h, n, backend="numpy")
    combos = [list(c) for c in itertools.combinations(range(len(G)), n)]
    conds = np.array([np.linalg.cond(G[c]) for c in combos])
    assert np.any(conds > 1e12) and np.any((conds > 1e10) & (conds < 1e12))
    # the residual test is rounding-sensitive right at its own cut-off
    resid = np.array([np.abs(G[c] @ x - h[c]).max() for c, x in zip(combos, pb)])
    clear = (resid < 1e-10) | (resid > 1e-8) | (conds > 1e12)
    np.testing.assert_array_equal(oka[clear], okb[clear])
    # solutions agree to working accuracy where the subsystem is well conditioned
    both = oka & okb & (conds < 1e6)
    np.testing.assert_allclose(pa[both], pb[both], rtol=1e-8, atol=1e-8)

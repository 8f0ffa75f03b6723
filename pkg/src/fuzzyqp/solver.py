"""Max-min and two-phase solvers over the membership system.

Phase 1 maximizes the smallest membership (the max-min decision). Phase 2
keeps every membership at or above the phase-1 level and maximizes their
sum, which removes weakly dominated max-min points. Both phases run seeded
multistart local searches and are certified against a brute-force grid.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .errors import InfeasibleError, LevelSetEmptyError
from .instance import FuzzyMoqpInstance
from .membership import (
    LOWER,
    UPPER,
    LinearBoundMf,
    TrigConstraintMf,
    TrigObjectiveMf,
    level_to_ratio,
)
from .oracle import GridOracleConfig, grid_maximize
from .polytope import Polyhedron, vertex_array

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * np.pi
CERT_TOL = 1e-4
BINDING_TOL = 1e-6
LEVEL_SLACK = 1e-9
PHASE2_FLAG_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class MembershipSystem:
    objectives: tuple
    objective_mfs: tuple
    constraint_mfs: tuple
    upper_mfs: tuple
    lower_mfs: tuple

    @property
    def n(self):
        return len(self.upper_mfs)

    @property
    def k(self):
        return len(self.objective_mfs)

    @property
    def m(self):
        return len(self.constraint_mfs)

    @property
    def size(self):
        return self.k + self.m + 2 * self.n

    @property
    def labels(self):
        return ([f"mu_Z{q + 1}" for q in range(self.k)]
                + [f"delta{i + 1}" for i in range(self.m)]
                + [f"theta{j + 1}" for j in range(self.n)]
                + [f"gamma{j + 1}" for j in range(self.n)])

    @property
    def default_box(self):
        return np.column_stack([np.zeros(self.n), [mf.anchor + mf.tol for mf in self.upper_mfs]])

    def arrays(self):
        """Packed arrays for the membership kernel."""
        n = self.n
        C = np.array([o.c for o in self.objectives]).reshape(self.k, n)
        Q = np.array([o.Q for o in self.objectives]).reshape(self.k, n, n)
        zlo = np.array([mf.lo for mf in self.objective_mfs], dtype=float)
        zhi = np.array([mf.hi for mf in self.objective_mfs], dtype=float)
        A = np.array([mf.a for mf in self.constraint_mfs]).reshape(self.m, n)
        D = np.array([mf.d for mf in self.constraint_mfs]).reshape(self.m, n)
        b = np.array([mf.b for mf in self.constraint_mfs], dtype=float)
        p = np.array([mf.p for mf in self.constraint_mfs], dtype=float)
        u = np.array([mf.anchor for mf in self.upper_mfs])
        t = np.array([mf.tol for mf in self.upper_mfs])
        l = np.array([mf.anchor for mf in self.lower_mfs])
        r = np.array([mf.tol for mf in self.lower_mfs])
        return C, Q, zlo, zhi, A, D, b, p, u, t, l, r


def build_system(instance: FuzzyMoqpInstance, intervals) -> MembershipSystem:
    intervals = list(intervals)
    if len(intervals) != instance.k:
        raise ValueError(f"expected {instance.k} aspiration intervals, got {len(intervals)}")
    bd = instance.bounds
    return MembershipSystem(
        objectives=tuple(instance.objectives),
        objective_mfs=tuple(TrigObjectiveMf(iv.lo, iv.hi) for iv in intervals),
        constraint_mfs=tuple(TrigConstraintMf(r.a, r.d, r.b, r.p) for r in instance.rows),
        upper_mfs=tuple(LinearBoundMf(UPPER, float(bd.u[j]), float(bd.t[j])) for j in range(instance.n)),
        lower_mfs=tuple(LinearBoundMf(LOWER, float(bd.l[j]), float(bd.r[j])) for j in range(instance.n)),
    )


def memberships(system: MembershipSystem, X, backend=None):
    """Membership matrix, one row per point; single point in, 1-D out."""
    X = np.asarray(X, dtype=float)
    M = _kernels.membership_matrix(X, system.arrays(), backend=backend)
    return M[0] if X.ndim == 1 else M


def mu_D(system: MembershipSystem, x, backend=None):
    """Smallest membership at ``x`` (vectorised over rows)."""
    M = memberships(system, x, backend=backend)
    return M.min(axis=-1)


def objective_values(system: MembershipSystem, x):
    return np.array([o.value(x) for o in system.objectives])


# --------------------------------------------------------------------------
# results
# --------------------------------------------------------------------------

@dataclass
class Phase1Result:
    lambda_star: float
    x_star: np.ndarray
    binding: tuple
    oracle_lambda: float
    oracle_x: np.ndarray | None
    certified: bool
    method: str
    bisection_lambda: float | None = None
    direct_lambda: float | None = None
    oracle_evaluations: int = 0


@dataclass
class Phase2Result:
    x_eff: np.ndarray
    mu_objectives: np.ndarray
    mu_constraints: np.ndarray
    mu_upper: np.ndarray
    mu_lower: np.ndarray
    objective_values: np.ndarray
    sum_memberships: float
    lambda_star: float
    certified: bool
    oracle_sum: float | None
    oracle_x: np.ndarray | None
    oracle_points: int
    discrepancy: bool
    starts_used: int = 0

    @property
    def membership_vector(self):
        return np.concatenate([self.mu_objectives, self.mu_constraints, self.mu_upper, self.mu_lower])


@dataclass
class EfficiencyVerdict:
    status: str
    dominator: np.ndarray | None = None
    gains: np.ndarray | None = None
    note: str = ""
    evaluations: int = 0

    @property
    def efficient(self):
        return self.status == "efficient"


# --------------------------------------------------------------------------
# local search helpers
# --------------------------------------------------------------------------

def _slsqp(f, y0, jac, constraints, bounds, maxiter, ftol):
    with warnings.catch_warnings():
        # SLSQP clips its own line-search iterates to the bounds and says so
        warnings.simplefilter("ignore", RuntimeWarning)
        return minimize(f, y0, jac=jac, constraints=constraints, method="SLSQP", bounds=bounds,
                        options={"maxiter": maxiter, "ftol": ftol})


def _level_polytope(system: MembershipSystem, lam):
    """Linear part of ``{x >= 0 : every non-objective membership >= lam}``.

    Returns ``None`` when the bound cuts cross.
    """
    s = float(level_to_ratio(lam))
    n = system.n
    rows = [mf.a + s * mf.d for mf in system.constraint_mfs]
    rhs = [mf.b - s * mf.p for mf in system.constraint_mfs]
    hi = np.array([mf.anchor + mf.tol * (1.0 - lam) for mf in system.upper_mfs])
    lo = np.maximum(0.0, [mf.anchor - mf.tol * (1.0 - lam) for mf in system.lower_mfs])
    if np.any(lo > hi):
        return None
    return Polyhedron.from_box(np.array(rows).reshape(len(rows), n), np.array(rhs), lo, hi)


def _objective_thresholds(system: MembershipSystem, lam):
    s = float(level_to_ratio(lam))
    thr, scale = [], []
    for mf in system.objective_mfs:
        if mf.degenerate:
            thr.append(mf.lo)
            scale.append(1.0)
        else:
            thr.append(mf.lo + s * (mf.hi - mf.lo))
            scale.append(mf.hi - mf.lo)
    return np.array(thr), np.array(scale)


def _interior_points(V, count, rng):
    """Random convex combinations of the vertex rows of ``V``."""
    if count <= 0 or len(V) == 0:
        return np.empty((0, V.shape[1] if V.ndim == 2 else 0))
    W = rng.dirichlet(np.ones(len(V)), size=count)
    return W @ V


def _lex_better(val, x, best_val, best_x, tol=0.0):
    if best_x is None or val > best_val + tol:
        return True
    if val >= best_val - tol and tuple(x) < tuple(best_x):
        return val >= best_val
    return False


def _objective_margin(system, X, thr, scale):
    """min_q (Z_q(x) - thr_q) / scale_q over rows of X."""
    X = np.atleast_2d(X)
    Z = np.column_stack([o.values(X) for o in system.objectives])
    return ((Z - thr) / scale).min(axis=1)


def _max_margin_local(system, P, thr, scale, x0):
    """SLSQP on ``max t  s.t.  (Z_q - thr_q)/scale_q >= t,  P`` from ``x0``."""
    n = system.n
    objs = system.objectives
    G, h = P.A, P.rhs

    def f(y):
        return -y[n]

    def fgrad(y):
        g = np.zeros(n + 1)
        g[n] = -1.0
        return g

    cons = [{"type": "ineq", "fun": lambda y: h - G @ y[:n],
             "jac": lambda y: np.hstack([-G, np.zeros((len(h), 1))])}]
    for q, o in enumerate(objs):
        def c(y, o=o, q=q):
            return (o.value(y[:n]) - thr[q]) / scale[q] - y[n]

        def cj(y, o=o, q=q):
            return np.append((o.c + o.Q @ y[:n]) / scale[q], -1.0)

        cons.append({"type": "ineq", "fun": c, "jac": cj})
    t0 = float(_objective_margin(system, x0, thr, scale)[0])
    res = _slsqp(f, np.append(x0, t0), fgrad, cons, [(0.0, None)] * n + [(None, None)], 200, 1e-12)
    x = np.maximum(res.x[:n], 0.0)
    if not np.all(G @ x <= h + 1e-9):
        return x0, float(_objective_margin(system, x0, thr, scale)[0])
    return x, float(_objective_margin(system, x, thr, scale)[0])


def level_feasible(system: MembershipSystem, lam, starts=8, rng=None):
    """Search for ``x`` with every membership ``>= lam``.

    Returns ``(feasible, x, margin)`` where ``margin`` is the best normalised
    objective slack found over the linearized polytope.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    P = _level_polytope(system, lam)
    if P is None:
        return False, None, -np.inf
    V = vertex_array(P)
    if len(V) == 0:
        return False, None, -np.inf
    thr, scale = _objective_thresholds(system, lam)
    margins = _objective_margin(system, V, thr, scale)
    best = int(np.argmax(margins))
    best_x, best_m = V[best], float(margins[best])
    if best_m >= 0.0:
        return True, best_x, best_m
    # min of convex functions: the max need not be at a vertex
    seeds = np.vstack([V, _interior_points(V, starts, rng)])
    for x0 in seeds:
        x, mval = _max_margin_local(system, P, thr, scale, x0)
        if _lex_better(mval, x, best_m, best_x):
            best_x, best_m = x, mval
        if best_m >= 0.0:
            break
    return best_m >= 0.0, best_x, best_m


def _bisection(system, tol, starts, rng):
    lo, hi = 0.0, 1.0
    x_lo = None
    ok, x, _ = level_feasible(system, 1.0, starts, rng)
    if ok:
        return 1.0, x
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok, x, _ = level_feasible(system, mid, starts, rng)
        if ok:
            lo, x_lo = mid, x
        else:
            hi = mid
    return lo, x_lo


def _direct_local(system, x0):
    """SLSQP on the smooth epigraph form of ``max mu_D``.

    Variables ``(x, s)`` with level ``sin(s pi/2)``; trigonometric memberships
    become ``ratio >= s`` and linear ones ``value >= sin(s pi/2)``.
    """
    n = system.n
    cons = []
    for mf, o in zip(system.objective_mfs, system.objectives):
        if mf.degenerate:
            cons.append({"type": "ineq", "fun": lambda y, o=o, mf=mf: o.value(y[:n]) - mf.lo,
                         "jac": lambda y, o=o: np.append(o.c + o.Q @ y[:n], 0.0)})
            continue
        w = mf.hi - mf.lo
        cons.append({"type": "ineq",
                     "fun": lambda y, o=o, mf=mf, w=w: (o.value(y[:n]) - mf.lo) / w - y[n],
                     "jac": lambda y, o=o, w=w: np.append((o.c + o.Q @ y[:n]) / w, -1.0)})
    for mf in system.constraint_mfs:
        cons.append({"type": "ineq",
                     "fun": lambda y, mf=mf: mf.b - mf.a @ y[:n] - y[n] * (mf.d @ y[:n] + mf.p),
                     "jac": lambda y, mf=mf: np.append(-mf.a - y[n] * mf.d, -(mf.d @ y[:n] + mf.p))})
    for j, mf in enumerate(system.upper_mfs):
        def cu(y, j=j, mf=mf):
            return (mf.anchor + mf.tol - y[j]) / mf.tol - np.sin(y[n] * HALF_PI)

        def cuj(y, j=j, mf=mf):
            g = np.zeros(n + 1)
            g[j] = -1.0 / mf.tol
            g[n] = -HALF_PI * np.cos(y[n] * HALF_PI)
            return g

        cons.append({"type": "ineq", "fun": cu, "jac": cuj})
    for j, mf in enumerate(system.lower_mfs):
        def cl(y, j=j, mf=mf):
            return (y[j] - mf.anchor + mf.tol) / mf.tol - np.sin(y[n] * HALF_PI)

        def clj(y, j=j, mf=mf):
            g = np.zeros(n + 1)
            g[j] = 1.0 / mf.tol
            g[n] = -HALF_PI * np.cos(y[n] * HALF_PI)
            return g

        cons.append({"type": "ineq", "fun": cl, "jac": clj})

    def f(y):
        return -y[n]

    def fgrad(y):
        g = np.zeros(n + 1)
        g[n] = -1.0
        return g

    s0 = float(level_to_ratio(mu_D(system, x0)))
    res = _slsqp(f, np.append(x0, s0), fgrad, cons, [(0.0, None)] * n + [(0.0, 1.0)], 300, 1e-13)
    x = np.maximum(res.x[:n], 0.0)
    return x, float(mu_D(system, x))


def pattern_polish(fun, x, step=1e-3, min_step=1e-7, max_iter=10_000):
    """Compass search: stop once no ``+-e_j`` step of ``min_step`` improves ``fun``."""
    x = np.array(x, dtype=float)
    fx = fun(x)
    n = x.size
    it = 0
    while step >= min_step and it < max_iter:
        improved = False
        for j in range(n):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[j] = max(0.0, y[j] + sgn * step)
                fy = fun(y)
                if fy > fx:
                    x, fx, improved = y, fy, True
                    break
        it += 1
        if not improved:
            step *= 0.5
    return x, fx


# --------------------------------------------------------------------------
# phase 1
# --------------------------------------------------------------------------

def oracle_phase1(system, config: GridOracleConfig):
    box = config.box_array(system.default_box)
    arrays = system.arrays()
    res = grid_maximize(lambda X: _kernels.membership_matrix(X, arrays).min(axis=1),
                        box, config.resolution, config.refine_rounds)
    return res


def _binding(system, x, lam):
    M = memberships(system, x)
    return tuple(lbl for lbl, v in zip(system.labels, M) if v - lam <= BINDING_TOL)


def solve_phase1(system: MembershipSystem, config: GridOracleConfig | None = None, starts: int = 8,
                 seed: int = 0, tol_lambda: float = 1e-6, oracle_only: bool = False) -> Phase1Result:
    config = config or GridOracleConfig()
    oracle = oracle_phase1(system, config)
    if oracle_only:
        if oracle.x is None or oracle.value <= 0.0:
            raise InfeasibleError("max-min membership is 0 everywhere on the oracle grid")
        lam = float(oracle.value)
        return Phase1Result(lam, oracle.x, _binding(system, oracle.x, lam), lam, oracle.x,
                            True, "oracle", oracle_evaluations=oracle.evaluations)

    rng = np.random.default_rng(seed)
    lam_b, x_b = _bisection(system, tol_lambda, starts, rng)
    candidates = []
    bis_val = None
    if x_b is not None:
        bis_val = float(mu_D(system, x_b))
        candidates.append((bis_val, x_b, "bisection"))

    box = config.box_array(system.default_box)
    seeds = [0.5 * (box[:, 0] + box[:, 1])]
    seeds += list(box[:, 0] + rng.random((starts, system.n)) * (box[:, 1] - box[:, 0]))
    if x_b is not None:
        seeds.append(x_b)
    best_direct = None
    for x0 in seeds:
        x, val = _direct_local(system, np.asarray(x0, dtype=float))
        if best_direct is None or _lex_better(val, x, best_direct[0], best_direct[1]):
            best_direct = (val, x)
    direct_val = best_direct[0]
    candidates.append((best_direct[0], best_direct[1], "direct"))

    best_val, best_x, method = candidates[0]
    for val, x, name in candidates[1:]:
        if _lex_better(val, x, best_val, best_x):
            best_val, best_x, method = val, x, name

    fun = lambda y: float(mu_D(system, y))
    px, pval = pattern_polish(fun, best_x)
    if pval > best_val:
        best_x, best_val = px, pval

    if best_val <= 0.0 and (oracle.x is None or oracle.value <= 0.0):
        raise InfeasibleError("max-min membership is 0 everywhere on the oracle grid")

    oracle_val = float(oracle.value) if oracle.x is not None else 0.0
    certified = best_val >= oracle_val - CERT_TOL
    if not certified:
        logger.warning("phase 1 uncertified: local %.8g < oracle %.8g", best_val, oracle_val)
        best_x, best_val, method = oracle.x, oracle_val, "oracle"
    best_x = np.asarray(best_x, dtype=float)
    lam = float(mu_D(system, best_x))
    return Phase1Result(lam, best_x, _binding(system, best_x, lam), oracle_val,
                        None if oracle.x is None else np.asarray(oracle.x),
                        certified, method, bisection_lambda=bis_val, direct_lambda=direct_val,
                        oracle_evaluations=oracle.evaluations)


# --------------------------------------------------------------------------
# phase 2
# --------------------------------------------------------------------------

def _phase2_local(system, x0, lam_floor):
    """SLSQP on the auxiliary-variable two-phase problem.

    Trigonometric memberships carry a ratio variable ``s`` with
    ``ratio(x) >= s``, ``s_floor <= s <= 1`` and contribute ``sin(s pi/2)``;
    bound memberships carry ``v`` with ``ramp(x) >= v``,
    ``lam_floor <= v <= 1``. At an optimum each auxiliary equals its clipped
    membership since all objective coefficients are positive.
    """
    n, k, m = system.n, system.k, system.m
    s_floor = float(level_to_ratio(lam_floor))
    nv = n + k + m + 2 * n
    trig = slice(n, n + k + m)
    lin = slice(n + k + m, nv)

    def f(y):
        return -(np.sin(y[trig] * HALF_PI).sum() + y[lin].sum())

    def fgrad(y):
        g = np.zeros(nv)
        g[trig] = -HALF_PI * np.cos(y[trig] * HALF_PI)
        g[lin] = -1.0
        return g

    cons = []
    for q, (mf, o) in enumerate(zip(system.objective_mfs, system.objectives)):
        idx = n + q
        if mf.degenerate:
            def c(y, o=o, mf=mf):
                return o.value(y[:n]) - mf.lo

            def cj(y, o=o):
                g = np.zeros(nv)
                g[:n] = o.c + o.Q @ y[:n]
                return g
        else:
            w = mf.hi - mf.lo

            def c(y, o=o, mf=mf, w=w, idx=idx):
                return (o.value(y[:n]) - mf.lo) / w - y[idx]

            def cj(y, o=o, w=w, idx=idx):
                g = np.zeros(nv)
                g[:n] = (o.c + o.Q @ y[:n]) / w
                g[idx] = -1.0
                return g
        cons.append({"type": "ineq", "fun": c, "jac": cj})
    for i, mf in enumerate(system.constraint_mfs):
        idx = n + k + i

        def c(y, mf=mf, idx=idx):
            return mf.b - mf.a @ y[:n] - y[idx] * (mf.d @ y[:n] + mf.p)

        def cj(y, mf=mf, idx=idx):
            g = np.zeros(nv)
            g[:n] = -mf.a - y[idx] * mf.d
            g[idx] = -(mf.d @ y[:n] + mf.p)
            return g
        cons.append({"type": "ineq", "fun": c, "jac": cj})
    for j, mf in enumerate(system.upper_mfs):
        idx = n + k + m + j

        def c(y, j=j, mf=mf, idx=idx):
            return (mf.anchor + mf.tol - y[j]) / mf.tol - y[idx]

        def cj(y, j=j, mf=mf, idx=idx):
            g = np.zeros(nv)
            g[j] = -1.0 / mf.tol
            g[idx] = -1.0
            return g
        cons.append({"type": "ineq", "fun": c, "jac": cj})
    for j, mf in enumerate(system.lower_mfs):
        idx = n + k + m + n + j

        def c(y, j=j, mf=mf, idx=idx):
            return (y[j] - mf.anchor + mf.tol) / mf.tol - y[idx]

        def cj(y, j=j, mf=mf, idx=idx):
            g = np.zeros(nv)
            g[j] = 1.0 / mf.tol
            g[idx] = -1.0
            return g
        cons.append({"type": "ineq", "fun": c, "jac": cj})

    M0 = memberships(system, x0)
    aux0 = np.concatenate([level_to_ratio(M0[:k + m]), M0[k + m:]])
    bounds = [(0.0, None)] * n
    for mf in system.objective_mfs:
        bounds.append((1.0, 1.0) if mf.degenerate else (s_floor, 1.0))
    bounds += [(s_floor, 1.0)] * m + [(lam_floor, 1.0)] * (2 * n)
    lo_b = np.array([b[0] for b in bounds[n:]])
    aux0 = np.clip(aux0, lo_b, 1.0)
    res = _slsqp(f, np.concatenate([x0, aux0]), fgrad, cons, bounds, 300, 1e-13)
    return np.maximum(res.x[:n], 0.0)


def _phase2_candidates(system, phase1, starts, rng):
    lam = phase1.lambda_star
    seeds = [phase1.x_star]
    P = _level_polytope(system, lam) if lam > 0 else None
    if P is not None:
        V = vertex_array(P)
        if len(V):
            seeds += list(V)
            pts = _interior_points(V, 4 * max(starts, 1), rng)
            if len(pts):
                ok = mu_D(system, pts) >= lam - LEVEL_SLACK
                seeds += list(pts[ok][:starts])
    # small jitter around the phase-1 point reaches level sets that are thin
    span = 1e-3 * np.maximum(1.0, np.abs(phase1.x_star))
    jit = phase1.x_star + rng.uniform(-1.0, 1.0, (starts, system.n)) * span
    seeds += list(np.maximum(jit, 0.0))
    return seeds


def _phase2_result(system, x, lam, **kw):
    M = memberships(system, x)
    k, m, n = system.k, system.m, system.n
    return Phase2Result(
        x_eff=np.asarray(x, dtype=float),
        mu_objectives=M[:k], mu_constraints=M[k:k + m],
        mu_upper=M[k + m:k + m + n], mu_lower=M[k + m + n:],
        objective_values=objective_values(system, x),
        sum_memberships=float(M.sum()), lambda_star=lam, **kw)


def oracle_phase2(system, lam_floor, config: GridOracleConfig, center):
    box = config.box_array(system.default_box)
    arrays = system.arrays()
    admitted = [0]

    def score(X):
        M = _kernels.membership_matrix(X, arrays)
        ok = M.min(axis=1) >= lam_floor
        admitted[0] += int(ok.sum())
        return np.where(ok, M.sum(axis=1), -np.inf)

    res = grid_maximize(score, box, config.resolution, config.refine_rounds, fallback_center=center)
    return res, admitted[0]


def solve_phase2(system: MembershipSystem, phase1: Phase1Result, config: GridOracleConfig | None = None,
                 starts: int = 8, seed: int = 0, oracle_only: bool = False) -> Phase2Result:
    config = config or GridOracleConfig()
    lam = phase1.lambda_star
    floor = lam - LEVEL_SLACK
    rng = np.random.default_rng(seed + 1)
    if mu_D(system, phase1.x_star) < floor:
        raise LevelSetEmptyError("phase-1 point is not in its own level set")

    if oracle_only:
        oracle, admitted = oracle_phase2(system, floor, config, center=phase1.x_star)
        x_out = phase1.x_star if oracle.x is None else oracle.x
        o_sum = float(oracle.value) if oracle.x is not None else None
        return _phase2_result(system, x_out, lam, certified=True, oracle_sum=o_sum,
                              oracle_x=None if oracle.x is None else np.asarray(oracle.x),
                              oracle_points=admitted, discrepancy=False)

    best_x = np.asarray(phase1.x_star, dtype=float)
    best_s = float(memberships(system, best_x).sum())
    seeds = _phase2_candidates(system, phase1, starts, rng)
    for x0 in seeds:
        x = _phase2_local(system, np.asarray(x0, dtype=float), max(floor, 0.0))
        M = memberships(system, x)
        if M.min() < floor:
            continue
        s = float(M.sum())
        if s > best_s + 1e-12 or (s >= best_s - 1e-12 and tuple(x) < tuple(best_x) and s >= best_s):
            best_x, best_s = x, s

    oracle, admitted = oracle_phase2(system, floor, config, center=best_x)
    o_sum = float(oracle.value) if oracle.x is not None else None
    discrepancy = o_sum is not None and o_sum > best_s + PHASE2_FLAG_TOL
    certified = not (o_sum is not None and o_sum > best_s + CERT_TOL)
    if discrepancy:
        logger.warning("phase 2: oracle sum %.8g exceeds local %.8g", o_sum, best_s)
    x_out = best_x if certified else np.asarray(oracle.x)
    return _phase2_result(system, x_out, lam, certified=certified, oracle_sum=o_sum,
                          oracle_x=None if oracle.x is None else np.asarray(oracle.x),
                          oracle_points=admitted,
                          discrepancy=discrepancy, starts_used=len(seeds))


# --------------------------------------------------------------------------
# efficiency checks
# --------------------------------------------------------------------------

def _dominance_scan(criteria, x_cand, box, config, weak_tol=1e-9, strict_tol=1e-6, extra=None):
    """Grid search for ``y`` with ``criteria(y) >= criteria(x) - weak_tol`` everywhere
    and ``> criteria(x) + strict_tol`` somewhere.

    ``criteria`` maps ``(N, n)`` points to ``(N, c)`` values, ``-inf`` rows
    marking inadmissible points.
    """
    f0 = criteria(np.atleast_2d(x_cand))[0]
    scale = np.maximum(1.0, np.abs(f0))
    found = {}

    def score(X):
        F = criteria(X)
        diff = F - f0
        worst = (diff / scale).min(axis=1)
        dom = np.all(diff >= -weak_tol, axis=1) & np.any(diff > strict_tol, axis=1)
        if dom.any() and "y" not in found:
            i = int(np.flatnonzero(dom)[0])
            found["y"] = X[i].copy()
            found["gain"] = diff[i]
        # near-dominators steer refinement; dominators rank first
        return np.where(dom, 1.0 + diff.max(axis=1) / scale.max(), np.minimum(worst, 0.0))

    evals = 0
    if extra is not None and len(extra):
        score(np.asarray(extra, dtype=float))
        evals += len(extra)
    res = grid_maximize(score, box, config.resolution, config.refine_rounds,
                        fallback_center=np.asarray(x_cand, dtype=float))
    evals += res.evaluations
    if "y" in found:
        return EfficiencyVerdict("dominated", found["y"], found["gain"], evaluations=evals)
    return EfficiencyVerdict("efficient", note="at grid resolution", evaluations=evals)


def check_fuzzy_efficiency(system: MembershipSystem, objectives=None, x_cand=None,
                           config: GridOracleConfig | None = None) -> EfficiencyVerdict:
    """Search for a point that weakly improves every objective value and every
    constraint/bound membership and strictly improves one of them."""
    config = config or GridOracleConfig()
    objectives = tuple(objectives) if objectives is not None else system.objectives
    x_cand = np.asarray(x_cand, dtype=float)
    if np.any(x_cand < 0):
        return EfficiencyVerdict("inconclusive", note="candidate violates x >= 0")
    arrays = system.arrays()
    k = system.k

    def criteria(X):
        X = np.atleast_2d(X)
        Z = np.column_stack([o.values(X) for o in objectives])
        M = _kernels.membership_matrix(X, arrays)
        return np.hstack([Z, M[:, k:]])

    box = config.box_array(system.default_box)
    return _dominance_scan(criteria, x_cand, box, config, extra=[x_cand])


def check_pareto(objectives, polyhedron: Polyhedron, x_cand, config: GridOracleConfig | None = None
                 ) -> EfficiencyVerdict:
    """Crisp Pareto check of ``x_cand`` over ``polyhedron`` by grid dominance scan."""
    from .polytope import contains

    config = config or GridOracleConfig()
    objectives = tuple(objectives)
    x_cand = np.asarray(x_cand, dtype=float)
    if not contains(polyhedron, x_cand):
        return EfficiencyVerdict("inconclusive", note="candidate is infeasible")
    G, h = polyhedron.A, polyhedron.rhs

    def criteria(X):
        X = np.atleast_2d(X)
        Z = np.column_stack([o.values(X) for o in objectives])
        feas = np.all(X @ G.T <= h + 1e-9, axis=1)
        Z[~feas] = -np.inf
        return Z

    V = vertex_array(polyhedron)
    box = np.column_stack([V.min(axis=0), V.max(axis=0)])
    return _dominance_scan(criteria, x_cand, box, config, extra=V)

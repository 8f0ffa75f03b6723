"""Hot numeric kernels.

Two implementations of every kernel live here: a numba ``@njit`` version and a
pure-numpy version. The public names (``membership_matrix``,
``active_set_solutions``) are bound at import time according to the
``FUZZYQP_BACKEND`` environment variable (``numba`` or ``numpy``). When the
variable is unset, numba is used if it can be imported.

Set ``FUZZYQP_BACKEND=numpy`` to force the fallback, e.g. for debugging or on
platforms without an LLVM toolchain.
"""
import itertools
import os

import numpy as np

HALF_PI = 0.5 * np.pi

try:
    import numba as nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    HAVE_NUMBA = False


def _requested_backend():
    name = os.environ.get("FUZZYQP_BACKEND", "").strip().lower()
    if name in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"FUZZYQP_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("FUZZYQP_BACKEND=numba but numba is not importable")
    return name


BACKEND = _requested_backend()


# --------------------------------------------------------------------------
# membership matrix
#
# Column layout for a system with k objectives, m rows and n variables:
#   [0, k)            objective memberships
#   [k, k+m)          constraint memberships
#   [k+m, k+m+n)      upper-bound memberships
#   [k+m+n, k+m+2n)   lower-bound memberships
# A degenerate objective interval (zhi <= zlo) is evaluated as a step at zlo.
# --------------------------------------------------------------------------

def membership_matrix_numpy(X, C, Q, zlo, zhi, A, D, b, p, u, t, l, r):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    k = C.shape[0]
    m = A.shape[0]
    n = X.shape[1]
    out = np.empty((X.shape[0], k + m + 2 * n))

    # 0.5 * x^T Q x for every point and objective
    quad = 0.5 * np.einsum("ni,qij,nj->nq", X, Q, X)
    z = X @ C.T + quad
    width = zhi - zlo
    degenerate = width <= 0.0
    safe = np.where(degenerate, 1.0, width)
    rho = np.clip((z - zlo) / safe, 0.0, 1.0)
    mz = np.sin(rho * HALF_PI)
    mz = np.where(degenerate, (z >= zlo).astype(np.float64), mz)
    out[:, :k] = mz

    if m:
        slack = b - X @ A.T
        denom = X @ D.T + p
        ratio = np.clip(slack / denom, 0.0, 1.0)
        out[:, k:k + m] = np.sin(ratio * HALF_PI)

    out[:, k + m:k + m + n] = np.clip((u + t - X) / t, 0.0, 1.0)
    out[:, k + m + n:] = np.clip((X - l + r) / r, 0.0, 1.0)
    return out


def active_set_solutions_numpy(G, h, n, sing_tol):
    """Solve every n-row subsystem of ``G x = h``.

    Returns ``(points, ok)``: points has one row per n-subset (in
    ``itertools.combinations`` order), ``ok`` flags subsets whose matrix is
    well conditioned and whose solution reproduces its right-hand side.
    """
    rows = G.shape[0]
    combos = np.array(list(itertools.combinations(range(rows), n)), dtype=np.int64)
    if combos.size == 0:
        return np.empty((0, n)), np.zeros(0, dtype=np.bool_)
    out = np.zeros((combos.shape[0], n))
    ok = np.zeros(combos.shape[0], dtype=np.bool_)
    chunk = 65536
    for start in range(0, combos.shape[0], chunk):
        idx = combos[start:start + chunk]
        M = G[idx]
        rhs = h[idx]
        cond = np.linalg.cond(M)
        good = np.isfinite(cond) & (cond < 1.0 / sing_tol)
        if not good.any():
            continue
        sol = np.linalg.solve(M[good], rhs[good][..., None])[..., 0]
        resid = np.abs(np.einsum("sij,sj->si", M[good], sol) - rhs[good]).max(axis=1)
        scale = np.maximum(1.0, np.abs(rhs[good]).max(axis=1))
        accept = resid <= 1e-9 * scale
        pos = np.flatnonzero(good)
        out[start + pos] = sol
        ok[start + pos[accept]] = True
    return out, ok


if HAVE_NUMBA:

    @nb.njit(cache=True)
    def _sin_clip(v):
        if v <= 0.0:
            return 0.0
        if v >= 1.0:
            return 1.0
        return np.sin(v * HALF_PI)

    @nb.njit(cache=True)
    def _clip01(v):
        if v <= 0.0:
            return 0.0
        if v >= 1.0:
            return 1.0
        return v

    @nb.njit(cache=True)
    def membership_matrix_numba(X, C, Q, zlo, zhi, A, D, b, p, u, t, l, r):
        N, n = X.shape
        k = C.shape[0]
        m = A.shape[0]
        out = np.empty((N, k + m + 2 * n))
        for s in range(N):
            for q in range(k):
                z = 0.0
                for i in range(n):
                    xi = X[s, i]
                    z += C[q, i] * xi
                    acc = 0.0
                    for j in range(n):
                        acc += Q[q, i, j] * X[s, j]
                    z += 0.5 * xi * acc
                w = zhi[q] - zlo[q]
                if w <= 0.0:
                    out[s, q] = 1.0 if z >= zlo[q] else 0.0
                else:
                    out[s, q] = _sin_clip((z - zlo[q]) / w)
            for i in range(m):
                ax = 0.0
                dx = 0.0
                for j in range(n):
                    ax += A[i, j] * X[s, j]
                    dx += D[i, j] * X[s, j]
                out[s, k + i] = _sin_clip((b[i] - ax) / (dx + p[i]))
            for j in range(n):
                xj = X[s, j]
                out[s, k + m + j] = _clip01((u[j] + t[j] - xj) / t[j])
                out[s, k + m + n + j] = _clip01((xj - l[j] + r[j]) / r[j])
        return out

    @nb.njit(cache=True)
    def _next_combination(idx, rows):
        n = idx.shape[0]
        i = n - 1
        while i >= 0 and idx[i] == rows - n + i:
            i -= 1
        if i < 0:
            return False
        idx[i] += 1
        for j in range(i + 1, n):
            idx[j] = idx[j - 1] + 1
        return True

    @nb.njit(cache=True)
    def _n_choose_k(a, c):
        if c < 0 or c > a:
            return 0
        res = 1
        for i in range(c):
            res = res * (a - i) // (i + 1)
        return res

    @nb.njit(cache=True)
    def _condition_class(M, W, piv, inv, sing_tol):
        """0: certainly cond > 1/sing_tol, 1: certainly below, 2: undecided.

        Partial-pivot LU gives sigma_min <= n * min|u_kk| and sigma_max >=
        max|m_ij|, so a tiny pivot proves near-singularity. Otherwise the
        Frobenius product F = |M|_F |M^-1|_F brackets cond_2 in [F/n, F];
        the factor 10 margins absorb the rounding error of the computed
        inverse. Only undecided subsets pay for the SVD in np.linalg.cond.
        """
        n = M.shape[0]
        big = 0.0
        fro = 0.0
        for a in range(n):
            piv[a] = a
            for c in range(n):
                W[a, c] = M[a, c]
                big = max(big, abs(M[a, c]))
                fro += M[a, c] * M[a, c]
        if big == 0.0:
            return 0
        cut = big * sing_tol / n
        for c in range(n):
            p = c
            for a in range(c + 1, n):
                if abs(W[a, c]) > abs(W[p, c]):
                    p = a
            if abs(W[p, c]) < cut:
                return 0
            if p != c:
                for e in range(n):
                    tmp = W[c, e]
                    W[c, e] = W[p, e]
                    W[p, e] = tmp
                tmp_i = piv[c]
                piv[c] = piv[p]
                piv[p] = tmp_i
            for a in range(c + 1, n):
                f = W[a, c] / W[c, c]
                W[a, c] = f
                for e in range(c + 1, n):
                    W[a, e] -= f * W[c, e]
        # inverse column by column from P M = L U
        ifro = 0.0
        for col in range(n):
            for a in range(n):
                v = 1.0 if piv[a] == col else 0.0
                for e in range(a):
                    v -= W[a, e] * inv[e]
                inv[a] = v
            for a in range(n - 1, -1, -1):
                v = inv[a]
                for e in range(a + 1, n):
                    v -= W[a, e] * inv[e]
                inv[a] = v / W[a, a]
            for a in range(n):
                ifro += inv[a] * inv[a]
        F = np.sqrt(fro * ifro)
        limit = 1.0 / sing_tol
        if not np.isfinite(F) or F > 10.0 * n * limit:
            return 0
        if F < 0.1 * limit:
            return 1
        return 2

    @nb.njit(cache=True)
    def active_set_solutions_numba(G, h, n, sing_tol):
        rows = G.shape[0]
        total = _n_choose_k(rows, n)
        out = np.zeros((total, n))
        ok = np.zeros(total, dtype=np.bool_)
        if total == 0:
            return out, ok
        idx = np.arange(n)
        M = np.empty((n, n))
        W = np.empty((n, n))
        piv = np.empty(n, dtype=np.int64)
        inv = np.empty(n)
        rhs = np.empty(n)
        for s in range(total):
            for a in range(n):
                rhs[a] = h[idx[a]]
                for c in range(n):
                    M[a, c] = G[idx[a], c]
            cls = _condition_class(M, W, piv, inv, sing_tol)
            if cls == 2:
                cond = np.linalg.cond(M)
                cls = 1 if np.isfinite(cond) and cond < 1.0 / sing_tol else 0
            if cls == 1:
                sol = np.linalg.solve(M, rhs)
                resid = 0.0
                scale = 1.0
                for a in range(n):
                    acc = 0.0
                    for c in range(n):
                        acc += M[a, c] * sol[c]
                    resid = max(resid, abs(acc - rhs[a]))
                    scale = max(scale, abs(rhs[a]))
                out[s] = sol
                if resid <= 1e-9 * scale:
                    ok[s] = True
            _next_combination(idx, rows)
        return out, ok

else:  # pragma: no cover
    membership_matrix_numba = None
    active_set_solutions_numba = None


def _prep_membership_args(X, arrays):
    X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    return (X,) + tuple(np.ascontiguousarray(a, dtype=np.float64) for a in arrays)


def membership_matrix(X, arrays, backend=None):
    """Evaluate all memberships at every row of ``X``.

    ``arrays`` is the tuple ``(C, Q, zlo, zhi, A, D, b, p, u, t, l, r)``.
    """
    args = _prep_membership_args(X, arrays)
    if (backend or BACKEND) == "numba":
        return membership_matrix_numba(*args)
    return membership_matrix_numpy(*args)


def active_set_solutions(G, h, n, sing_tol=1e-12, backend=None):
    G = np.ascontiguousarray(G, dtype=np.float64)
    h = np.ascontiguousarray(h, dtype=np.float64)
    if (backend or BACKEND) == "numba":
        return active_set_solutions_numba(G, h, int(n), float(sing_tol))
    return active_set_solutions_numpy(G, h, int(n), float(sing_tol))

"""Exact vertex enumeration for small bounded polyhedra ``{x : G x <= h}``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import TooLargeError, UnboundedError

FEAS_TOL = 1e-8
DEDUP_TOL = 1e-7
SING_TOL = 1e-12
MAX_N = 12
MAX_ROWS = 24


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """All-inequality H-representation; bounds are folded in as rows."""

    A: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        if A.shape[0] != rhs.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but rhs has {rhs.shape[0]} entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "rhs", rhs)
        self._check_bounded()

    @property
    def n(self):
        return self.A.shape[1]

    @classmethod
    def from_box(cls, A, rhs, lo, hi):
        """``{A x <= rhs, lo <= x <= hi}``; rows ordered general, upper, lower."""
        lo = np.asarray(lo, dtype=float).reshape(-1)
        hi = np.asarray(hi, dtype=float).reshape(-1)
        n = lo.size
        A = np.asarray(A, dtype=float).reshape(-1, n)
        eye = np.eye(n)
        G = np.vstack([A, eye, -eye])
        h = np.concatenate([np.asarray(rhs, dtype=float).reshape(-1), hi, -lo])
        return cls(G, h)

    def _check_bounded(self):
        # Recession test restricted to axis-aligned rows: every coordinate
        # needs a row that is a positive multiple of +e_j and one of -e_j.
        A = self.A
        n = A.shape[1]
        for j in range(n):
            others = np.delete(A, j, axis=1)
            axis_rows = np.all(others == 0.0, axis=1)
            if not np.any(axis_rows & (A[:, j] > 0)):
                raise UnboundedError(f"coordinate {j} has no upper-bounding row")
            if not np.any(axis_rows & (A[:, j] < 0)):
                raise UnboundedError(f"coordinate {j} has no lower-bounding row")


@dataclass(frozen=True, eq=False)
class Vertex:
    x: np.ndarray
    active: frozenset


def contains(P: Polyhedron, x, tol: float = FEAS_TOL) -> bool:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (P.n,):
        raise ValueError(f"point has dimension {x.size}, polyhedron has {P.n}")
    return bool(np.all(P.A @ x <= P.rhs + tol))


def _dedup_sorted(points):
    """Lexicographically sort and drop points within DEDUP_TOL (inf-norm)."""
    if len(points) == 0:
        return points
    order = np.lexsort(points.T[::-1])
    points = points[order]
    keep = []
    for x in points:
        if any(np.max(np.abs(x - y)) <= DEDUP_TOL for y in keep):
            continue
        keep.append(x)
    return np.array(keep)


def enumerate_vertices(P: Polyhedron, backend=None) -> list[Vertex]:
    """Every extreme point of ``P`` once, ordered lexicographically by coordinates."""
    rows, n = P.A.shape
    if n > MAX_N or rows > MAX_ROWS:
        raise TooLargeError(f"vertex enumeration limited to n <= {MAX_N}, rows <= {MAX_ROWS}; "
                            f"got n={n}, rows={rows}")
    pts, ok = _kernels.active_set_solutions(P.A, P.rhs, n, SING_TOL, backend=backend)
    pts = pts[ok]
    if len(pts):
        feas = np.all(pts @ P.A.T <= P.rhs + FEAS_TOL, axis=1)
        pts = pts[feas]
    pts = _dedup_sorted(pts)
    axis_j, axis_coef = _axis_rows(P.A)
    out = []
    for x in pts:
        active = np.flatnonzero(np.abs(P.A @ x - P.rhs) <= FEAS_TOL)
        # snap coordinates pinned by an active bound row to the exact bound
        for i in active:
            if axis_j[i] >= 0:
                x[axis_j[i]] = P.rhs[i] / axis_coef[i]
        out.append(Vertex(x, frozenset(int(i) for i in active)))
    return out


def _axis_rows(A):
    """For each row, the coordinate it bounds (or -1) and its coefficient."""
    nz = A != 0.0
    single = nz.sum(axis=1) == 1
    j = np.where(single, np.argmax(nz, axis=1), -1)
    coef = np.where(single, A[np.arange(len(A)), np.maximum(j, 0)], 0.0)
    return j, coef


def vertex_array(P: Polyhedron, backend=None) -> np.ndarray:
    verts = enumerate_vertices(P, backend=backend)
    if not verts:
        return np.empty((0, P.n))
    return np.array([v.x for v in verts])

"""Problem instances, validation, crisp variants and the instance file format."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InstanceFormatError
from .jsonfmt import dumps

MAX_N = 12
MAX_ROWS = 24


@dataclass(frozen=True, eq=False)
class QuadraticObjective:
    """Objective ``c^T x + 0.5 x^T Q x`` to be maximized."""

    c: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(-1))
        object.__setattr__(self, "Q", np.atleast_2d(np.asarray(self.Q, dtype=float)))

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return float(self.c @ x + 0.5 * x @ self.Q @ x)

    def values(self, X):
        """Vectorised value over the rows of ``X``."""
        X = np.atleast_2d(X)
        return X @ self.c + 0.5 * np.einsum("ni,ij,nj->n", X, self.Q, X)


@dataclass(frozen=True, eq=False)
class FuzzyRow:
    """One fuzzy constraint ``sum_j a~_j x_j <= b~``."""

    a: np.ndarray
    d: np.ndarray
    b: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(-1))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float).reshape(-1))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "p", float(self.p))


@dataclass(frozen=True, eq=False)
class FuzzyBounds:
    l: np.ndarray
    r: np.ndarray
    u: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        for name in ("l", "r", "u", "t"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(-1))


@dataclass(frozen=True, eq=False)
class FuzzyMoqpInstance:
    objectives: tuple
    rows: tuple
    bounds: FuzzyBounds
    n: int

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "n", int(self.n))

    @property
    def k(self):
        return len(self.objectives)

    @property
    def m(self):
        return len(self.rows)

    @property
    def A(self):
        return np.array([row.a for row in self.rows]).reshape(self.m, self.n)

    @property
    def D(self):
        return np.array([row.d for row in self.rows]).reshape(self.m, self.n)

    @property
    def b(self):
        return np.array([row.b for row in self.rows], dtype=float)

    @property
    def p(self):
        return np.array([row.p for row in self.rows], dtype=float)


@dataclass(frozen=True, eq=False)
class CrispQp:
    """Maximize ``objective`` over ``{A x <= rhs, lo <= x <= hi}`` (``lo >= 0``)."""

    objective: QuadraticObjective
    A: np.ndarray
    rhs: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def polyhedron(self):
        from .polytope import Polyhedron

        return Polyhedron.from_box(self.A, self.rhs, self.lo, self.hi)


@dataclass(frozen=True)
class Violation:
    field: str
    message: str
    magnitude: float = 0.0

    def __str__(self):
        return f"{self.field}: {self.message} (magnitude {self.magnitude:.3g})"


def _check_vector(out, field, v, n):
    if v.shape != (n,):
        out.append(Violation(field, f"expected length {n}, got shape {v.shape}", abs(v.size - n)))
        return False
    if not np.all(np.isfinite(v)):
        out.append(Violation(field, "non-finite entry", float("inf")))
        return False
    return True


def _check_positive(out, field, v):
    for j, val in enumerate(np.atleast_1d(v)):
        if not val > 0:
            out.append(Violation(f"{field}[{j}]" if np.ndim(v) else field,
                                 "tolerance must be strictly positive", float(val)))


def validate(instance: FuzzyMoqpInstance) -> list[Violation]:
    """Return every violated instance invariant; an empty list means valid."""
    out: list[Violation] = []
    n = instance.n
    if n < 1:
        out.append(Violation("n", "n >= 1 required", n))
        return out
    if instance.k < 1:
        out.append(Violation("objectives", "k >= 1 required", instance.k))

    for q, obj in enumerate(instance.objectives):
        _check_vector(out, f"objectives[{q}].c", obj.c, n)
        Q = obj.Q
        if Q.shape != (n, n):
            out.append(Violation(f"objectives[{q}].Q", f"expected {n}x{n}, got {Q.shape}", 1.0))
            continue
        if not np.all(np.isfinite(Q)):
            out.append(Violation(f"objectives[{q}].Q", "non-finite entry", float("inf")))
            continue
        asym = np.abs(Q - Q.T)
        limit = 1e-12 * np.maximum(1.0, np.abs(Q))
        if np.any(asym > limit):
            out.append(Violation(f"objectives[{q}].Q", "Q not symmetric", float(asym.max())))
            continue
        scale = max(1.0, float(np.abs(Q).max()))
        lam_min = float(np.linalg.eigvalsh(Q).min())
        if lam_min < -1e-8 * scale:
            out.append(Violation(f"objectives[{q}].Q", "Q not positive semi-definite", -lam_min))

    for i, row in enumerate(instance.rows):
        ok_a = _check_vector(out, f"rows[{i}].a", row.a, n)
        ok_d = _check_vector(out, f"rows[{i}].d", row.d, n)
        if ok_a:
            for j in np.flatnonzero(row.a < 0):
                out.append(Violation(f"rows[{i}].a[{j}]", "coefficient must be nonnegative", float(row.a[j])))
        if ok_d:
            _check_positive(out, f"rows[{i}].d", row.d)
        if not np.isfinite(row.b):
            out.append(Violation(f"rows[{i}].b", "non-finite resource", float("inf")))
        _check_positive(out, f"rows[{i}].p", row.p)

    bd = instance.bounds
    oks = [_check_vector(out, f"bounds.{name}", getattr(bd, name), n) for name in ("l", "r", "u", "t")]
    if oks[1]:
        _check_positive(out, "bounds.r", bd.r)
    if oks[3]:
        _check_positive(out, "bounds.t", bd.t)
    if oks[0] and oks[2]:
        for j in np.flatnonzero(bd.l > bd.u):
            out.append(Violation(f"bounds.l[{j}]", "nominal box empty: l > u", float(bd.l[j] - bd.u[j])))
        for j in np.flatnonzero(bd.u + bd.t < 0):
            out.append(Violation(f"bounds.u[{j}]", "widest box excludes x >= 0", float(-(bd.u[j] + bd.t[j]))))
    return out


def check_size(n, rows):
    """Raise ``TooLargeError`` when vertex enumeration would be out of scope."""
    from .errors import TooLargeError

    if n > MAX_N or rows > MAX_ROWS:
        raise TooLargeError(f"instance too large for exact vertex enumeration: n={n}, rows={rows} "
                            f"(limits n <= {MAX_N}, rows <= {MAX_ROWS})")


def crisp_variants(instance: FuzzyMoqpInstance, q: int) -> tuple[CrispQp, CrispQp, CrispQp, CrispQp]:
    """The four defuzzified problems for objective ``q`` (0-based).

    Index 0..3 of the result are variants 1..4:

    1. nominal coefficients and resources, nominal box ``[l, u]``;
    2. pessimistic coefficients ``a + d``, nominal resources, box ``[l - r, u]``;
    3. pessimistic coefficients, relaxed resources ``b + p``, box ``[l - r, u + t]``;
    4. nominal coefficients, relaxed resources, box ``[l, u + t]``.

    Lower bounds are clipped at zero because ``x >= 0`` is always enforced.
    """
    if not 0 <= q < instance.k:
        raise IndexError(f"objective index {q} out of range for k={instance.k}")
    obj = instance.objectives[q]
    A, D, b, p = instance.A, instance.D, instance.b, instance.p
    bd = instance.bounds
    lo_nom = np.maximum(0.0, bd.l)
    lo_rel = np.maximum(0.0, bd.l - bd.r)
    hi_rel = bd.u + bd.t
    return (
        CrispQp(obj, A, b, lo_nom, bd.u.copy()),
        CrispQp(obj, A + D, b, lo_rel, bd.u.copy()),
        CrispQp(obj, A + D, b + p, lo_rel, hi_rel),
        CrispQp(obj, A, b + p, lo_nom, hi_rel),
    )


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def instance_to_dict(instance: FuzzyMoqpInstance) -> dict:
    bd = instance.bounds
    return {
        "n": instance.n,
        "k": instance.k,
        "m": instance.m,
        "objectives": [{"c": o.c.tolist(), "Q": o.Q.tolist()} for o in instance.objectives],
        "rows": [{"a": r.a.tolist(), "d": r.d.tolist(), "b": r.b, "p": r.p} for r in instance.rows],
        "bounds": {"l": bd.l.tolist(), "r": bd.r.tolist(), "u": bd.u.tolist(), "t": bd.t.tolist()},
    }


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InstanceFormatError(f"missing field '{where}{key}'")
    return obj[key]


def instance_from_dict(data: dict) -> FuzzyMoqpInstance:
    """Build an instance from its dict form.

    Structural problems (missing fields, declared counts that disagree with
    the lists) raise ``InstanceFormatError``; numeric invariants are left to
    ``validate``.
    """
    n = _require(data, "n", "")
    objectives = _require(data, "objectives", "")
    rows = _require(data, "rows", "")
    bounds = _require(data, "bounds", "")
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceFormatError(f"field 'n' must be an integer, got {n!r}")
    for key, seq in (("k", objectives), ("m", rows)):
        if key in data and data[key] != len(seq):
            raise InstanceFormatError(f"field '{key}' = {data[key]} but {len(seq)} entries listed")
    try:
        objs = [QuadraticObjective(_require(o, "c", f"objectives[{q}]."), _require(o, "Q", f"objectives[{q}]."))
                for q, o in enumerate(objectives)]
        frows = [FuzzyRow(_require(r, "a", f"rows[{i}]."), _require(r, "d", f"rows[{i}]."),
                          _require(r, "b", f"rows[{i}]."), _require(r, "p", f"rows[{i}]."))
                 for i, r in enumerate(rows)]
        fb = FuzzyBounds(*(_require(bounds, key, "bounds.") for key in ("l", "r", "u", "t")))
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"non-numeric or ragged data: {exc}") from exc
    return FuzzyMoqpInstance(objs, frows, fb, n)


def dumps_instance(instance: FuzzyMoqpInstance) -> str:
    """Canonical text form: fixed key order, shortest round-trip floats."""
    return dumps(instance_to_dict(instance), float_format=repr) + "\n"


def parse_instance(text: str) -> FuzzyMoqpInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_dict(data)


def load_instance(path) -> FuzzyMoqpInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def instance_digest(instance: FuzzyMoqpInstance) -> str:
    return hashlib.sha256(dumps_instance(instance).encode()).hexdigest()


def example_instance() -> FuzzyMoqpInstance:
    """The two-objective, two-row, two-variable worked example."""
    return FuzzyMoqpInstance(
        objectives=[
            QuadraticObjective([1.0, 2.0], [[2.0, 0.0], [0.0, 4.0]]),
            QuadraticObjective([4.0, 7.0], [[4.0, 0.0], [0.0, 6.0]]),
        ],
        rows=[
            FuzzyRow([1.0, 1.0], [1.0, 1.0], 10.0, 5.0),
            FuzzyRow([2.0, 3.0], [1.0, 2.0], 25.0, 10.0),
        ],
        bounds=FuzzyBounds(l=[2.0, 2.0], r=[1.0, 1.0], u=[9.0, 8.0], t=[3.0, 2.0]),
        n=2,
    )


def make_instance(C: Sequence, Qs: Sequence, A, D, b, p, l, r, u, t) -> FuzzyMoqpInstance:
    """Convenience constructor from stacked arrays."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = np.asarray(l).size
    A = A.reshape(-1, n)
    D = np.asarray(D, dtype=float).reshape(-1, n)
    b = np.atleast_1d(np.asarray(b, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    objs = [QuadraticObjective(c, Q) for c, Q in zip(C, Qs)]
    rows = [FuzzyRow(A[i], D[i], b[i], p[i]) for i in range(A.shape[0])]
    return FuzzyMoqpInstance(objs, rows, FuzzyBounds(l, r, u, t), n)

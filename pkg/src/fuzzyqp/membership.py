"""Membership functions: trigonometric objective/constraint forms and linear bounds.

All evaluators accept scalars or arrays and return values in ``[0, 1]``.
``invert_level`` turns a membership level ``lam`` into the equivalent crisp
cut, which is how the max-min solver linearizes every non-objective
membership.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

HALF_PI = 0.5 * np.pi

UPPER = "upper"
LOWER = "lower"


def level_to_ratio(lam):
    """Inverse of ``rho -> sin(rho * pi / 2)`` on ``[0, 1]``."""
    return np.arcsin(np.clip(lam, 0.0, 1.0)) / HALF_PI


def _sin_clip(rho):
    return np.sin(np.clip(rho, 0.0, 1.0) * HALF_PI)


@dataclass(frozen=True, eq=False)
class TrigConstraintMf:
    """``sin(rho * pi/2)`` with ``rho = (b - a.x) / (d.x + p)`` clipped to [0, 1]."""

    a: np.ndarray
    d: np.ndarray
    b: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(-1))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float).reshape(-1))

    def ratio(self, x):
        x = np.asarray(x, dtype=float)
        return (self.b - x @ self.a) / (x @ self.d + self.p)

    def __call__(self, x):
        return _sin_clip(self.ratio(x))


@dataclass(frozen=True)
class LinearBoundMf:
    """Linear ramp on ``[anchor, anchor+tol]`` (upper) or ``[anchor-tol, anchor]`` (lower)."""

    kind: str
    anchor: float
    tol: float

    def __post_init__(self):
        if self.kind not in (UPPER, LOWER):
            raise ValueError(f"kind must be 'upper' or 'lower', got {self.kind!r}")

    def __call__(self, xj):
        xj = np.asarray(xj, dtype=float)
        if self.kind == UPPER:
            v = (self.anchor + self.tol - xj) / self.tol
        else:
            v = (xj - self.anchor + self.tol) / self.tol
        return np.clip(v, 0.0, 1.0)


@dataclass(frozen=True)
class TrigObjectiveMf:
    """``sin((z - lo)/(hi - lo) * pi/2)`` clipped; a step at ``lo`` when ``hi <= lo``."""

    lo: float
    hi: float

    @property
    def degenerate(self):
        return not self.hi > self.lo

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.degenerate:
            return (z >= self.lo).astype(float)
        return _sin_clip((z - self.lo) / (self.hi - self.lo))


FUZZY_PARAM_KINDS = ("resource", "coefficient", "upper_bound", "lower_bound")


@dataclass(frozen=True)
class FuzzyParamMf:
    """Membership of a fuzzy number itself (resource, coefficient or bound).

    Resources, coefficients and upper bounds decrease linearly from 1 at the
    nominal value to 0 at ``nominal + tol``; lower bounds increase from 0 at
    ``nominal - tol`` to 1 at the nominal value.
    """

    kind: str
    nominal: float
    tol: float

    def __post_init__(self):
        if self.kind not in FUZZY_PARAM_KINDS:
            raise ValueError(f"unknown fuzzy parameter kind {self.kind!r}")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "lower_bound":
            v = (y - self.nominal + self.tol) / self.tol
        else:
            v = (self.nominal + self.tol - y) / self.tol
        return np.clip(v, 0.0, 1.0)


# -- named evaluation helpers ----------------------------------------------

def eval_constraint(mf: TrigConstraintMf, x):
    return mf(x)


def eval_objective(mf: TrigObjectiveMf, z):
    return mf(z)


def eval_bound(mf: LinearBoundMf, xj):
    return mf(xj)


@dataclass(frozen=True)
class ObjectiveCut:
    """``Z(x) >= z_min``."""

    z_min: float


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """``coeffs . x <= rhs``."""

    coeffs: np.ndarray
    rhs: float

    def holds(self, x, tol=0.0):
        return np.asarray(x, dtype=float) @ self.coeffs <= self.rhs + tol


@dataclass(frozen=True)
class BoundCut:
    """``x_j <= value`` (upper) or ``x_j >= value`` (lower)."""

    kind: str
    value: float

    def holds(self, xj, tol=0.0):
        if self.kind == UPPER:
            return np.asarray(xj) <= self.value + tol
        return np.asarray(xj) >= self.value - tol


def invert_level(mf, lam: float):
    """The crisp cut ``{mf >= lam}`` for ``0 < lam <= 1``."""
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"level must lie in (0, 1], got {lam}")
    if isinstance(mf, TrigObjectiveMf):
        if mf.degenerate:
            return ObjectiveCut(mf.lo)
        return ObjectiveCut(mf.lo + float(level_to_ratio(lam)) * (mf.hi - mf.lo))
    if isinstance(mf, TrigConstraintMf):
        # b - a.x >= s (d.x + p)  <=>  (a + s d).x <= b - s p
        s = float(level_to_ratio(lam))
        return HalfSpace(mf.a + s * mf.d, mf.b - s * mf.p)
    if isinstance(mf, LinearBoundMf):
        if mf.kind == UPPER:
            return BoundCut(UPPER, mf.anchor + mf.tol * (1.0 - lam))
        return BoundCut(LOWER, mf.anchor - mf.tol * (1.0 - lam))
    if isinstance(mf, FuzzyParamMf):
        if mf.kind == "lower_bound":
            return BoundCut(LOWER, mf.nominal - mf.tol * (1.0 - lam))
        return BoundCut(UPPER, mf.nominal + mf.tol * (1.0 - lam))
    raise TypeError(f"cannot invert {type(mf).__name__}")


def sample_curve(mf, domain, count: int, direction=None, origin=None):
    """``count`` uniform samples ``(input, value)`` of ``mf`` over ``domain``.

    For a ``TrigConstraintMf`` the input is the ray parameter ``tau`` and the
    membership is evaluated at ``origin + tau * direction`` (defaults: the
    origin and the all-ones diagonal).
    """
    lo, hi = (float(v) for v in domain)
    if count < 2:
        raise ValueError("count must be at least 2")
    if not hi > lo:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    s = np.linspace(lo, hi, count)
    if isinstance(mf, TrigConstraintMf):
        n = mf.a.size
        direction = np.ones(n) if direction is None else np.asarray(direction, dtype=float)
        origin = np.zeros(n) if origin is None else np.asarray(origin, dtype=float)
        values = mf(origin + s[:, None] * direction)
    else:
        values = mf(s)
    return np.column_stack([s, values])


def write_curve_csv(path, samples):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["input", "value"])
        for x, v in samples:
            w.writerow([format(float(x), ".17g"), format(float(v), ".17g")])

"""Brute-force grid search used to certify the local solvers.

The grid is a tensor product of ``resolution`` points per axis. After the
full sweep, each refinement round re-grids a box ten times narrower centred
on the incumbent (clipped to the original box). Points are visited in
lexicographic order, so ties resolve to the lexicographically smallest point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CHUNK = 1 << 18


@dataclass(frozen=True)
class GridOracleConfig:
    box: tuple | None = None
    resolution: int = 401
    refine_rounds: int = 3

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        if self.box is not None:
            box = tuple((float(a), float(b)) for a, b in self.box)
            if any(not b >= a for a, b in box):
                raise ValueError(f"empty oracle box {box}")
            object.__setattr__(self, "box", box)

    def box_array(self, default):
        """``(n, 2)`` array: the configured box, else ``default``."""
        return np.array(self.box if self.box is not None else default, dtype=float)


@dataclass
class GridResult:
    x: np.ndarray | None
    value: float
    evaluations: int = 0
    rounds: list = field(default_factory=list)


def iter_grid(box, resolution, chunk=CHUNK):
    """Yield chunks of grid points over ``box`` (shape ``(n, 2)``) in lexicographic order."""
    box = np.asarray(box, dtype=float)
    n = box.shape[0]
    axes = [np.linspace(lo, hi, resolution) if hi > lo else np.array([lo]) for lo, hi in box]
    shape = tuple(len(a) for a in axes)
    total = int(np.prod(shape))
    for start in range(0, total, chunk):
        idx = np.unravel_index(np.arange(start, min(start + chunk, total)), shape)
        yield np.column_stack([axes[j][idx[j]] for j in range(n)])


def _sweep(score, box, resolution):
    best_v = -np.inf
    best_x = None
    count = 0
    for X in iter_grid(box, resolution):
        v = score(X)
        count += len(X)
        i = int(np.argmax(v))
        if v[i] > best_v:
            best_v = float(v[i])
            best_x = X[i].copy()
    return best_x, best_v, count


def refine_box(outer, center, shrink):
    """Box of width ``outer_width / shrink`` centred at ``center``, clipped to ``outer``."""
    outer = np.asarray(outer, dtype=float)
    half = 0.5 * (outer[:, 1] - outer[:, 0]) / shrink
    lo = np.maximum(outer[:, 0], center - half)
    hi = np.minimum(outer[:, 1], center + half)
    return np.column_stack([lo, hi])


def grid_maximize(score, box, resolution=401, refine_rounds=3, fallback_center=None):
    """Maximize ``score`` (vectorised over rows, ``-inf`` = excluded) on a refined grid.

    When the full sweep finds no admissible point, refinement is centred on
    ``fallback_center`` if given.
    """
    box = np.asarray(box, dtype=float)
    x, v, count = _sweep(score, box, resolution)
    result = GridResult(x if np.isfinite(v) else None, v, count, [v])
    center = result.x if result.x is not None else fallback_center
    shrink = 1.0
    for _ in range(refine_rounds):
        if center is None:
            break
        shrink *= 10.0
        sub = refine_box(box, np.asarray(center, dtype=float), shrink)
        x, v, count = _sweep(score, sub, resolution)
        result.evaluations += count
        result.rounds.append(v)
        if v > result.value:
            result.x, result.value = x, v
        if result.x is not None:
            center = result.x
    return result

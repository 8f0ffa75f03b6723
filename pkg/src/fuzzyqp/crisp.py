"""Global maximization of convex quadratics over polytopes.

A convex function attains its maximum over a compact polyhedron at an
extreme point, so enumerating vertices and evaluating the objective there is
an exact global method at the sizes handled here.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .instance import CrispQp, FuzzyMoqpInstance, crisp_variants
from .polytope import vertex_array

logger = logging.getLogger(__name__)

DEGENERATE_WIDTH = 1e-9


class DegenerateIntervalWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class CrispOptimum:
    value: float
    argmax: np.ndarray
    vertex_rank: int


@dataclass(frozen=True)
class AspirationInterval:
    lo: float
    hi: float

    @property
    def degenerate(self):
        return self.hi - self.lo < DEGENERATE_WIDTH


def solve_crisp(qp: CrispQp, backend=None) -> CrispOptimum:
    V = vertex_array(qp.polyhedron(), backend=backend)
    if len(V) == 0:
        raise InfeasibleError("crisp problem has no feasible vertex")
    vals = qp.objective.values(V)
    # vertices come sorted lexicographically, so argmax picks the smallest tie
    best = float(vals.max())
    rank = int(np.flatnonzero(vals == best)[0])
    return CrispOptimum(best, V[rank].copy(), rank)


def crisp_table(instance: FuzzyMoqpInstance, backend=None) -> list[list[CrispOptimum]]:
    """``table[q][v]`` is the optimum of variant ``v+1`` for objective ``q``."""
    return [[solve_crisp(qp, backend=backend) for qp in crisp_variants(instance, q)]
            for q in range(instance.k)]


def interval_from_values(values) -> AspirationInterval:
    iv = AspirationInterval(float(min(values)), float(max(values)))
    if iv.degenerate:
        warnings.warn(f"degenerate aspiration interval [{iv.lo}, {iv.hi}]; "
                      "objective membership becomes a step function", DegenerateIntervalWarning,
                      stacklevel=3)
    return iv


def aspiration_interval(instance: FuzzyMoqpInstance, q: int, backend=None) -> AspirationInterval:
    values = [solve_crisp(qp, backend=backend).value for qp in crisp_variants(instance, q)]
    logger.debug("objective %d variant optima %s", q, values)
    return interval_from_values(values)

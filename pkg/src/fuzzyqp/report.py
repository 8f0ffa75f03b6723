"""End-to-end pipeline, solve report, membership curves and summary table."""
from __future__ import annotations

import logging
import os
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .crisp import DegenerateIntervalWarning, crisp_table, interval_from_values
from .errors import InvalidInstanceError
from .instance import FuzzyMoqpInstance, instance_digest, load_instance, validate
from .jsonfmt import dumps
from .membership import TrigConstraintMf, TrigObjectiveMf, sample_curve, write_curve_csv
from .oracle import GridOracleConfig
from .solver import (
    MembershipSystem,
    build_system,
    check_fuzzy_efficiency,
    solve_phase1,
    solve_phase2,
)

logger = logging.getLogger(__name__)

REPORT_FIELDS = ("crisp_optima", "aspiration", "phase1", "phase2", "efficiency", "timings", "warnings")
CURVE_SAMPLES = 401


@dataclass
class PipelineOptions:
    seed: int = 0
    starts: int = 8
    grid: int = 401
    refine: int = 3
    oracle_only: bool = False
    tol_lambda: float = 1e-6
    box: tuple | None = None
    timings: bool = True


@dataclass
class SolveReport:
    crisp_optima: list
    aspiration: list
    phase1: dict
    phase2: dict
    efficiency: dict
    timings: dict
    warnings: list
    instance: dict = field(default_factory=dict)
    certified: bool = True
    system: MembershipSystem | None = field(default=None, repr=False)

    def to_dict(self):
        return {name: getattr(self, name) for name in REPORT_FIELDS}

    def to_json(self):
        return dumps(self.to_dict()) + "\n"


def _vec(x):
    return None if x is None else [float(v) for v in np.asarray(x).reshape(-1)]


def _named(labels, values):
    return {lbl: float(v) for lbl, v in zip(labels, values)}


def solve_instance(instance: FuzzyMoqpInstance, options: PipelineOptions | None = None) -> SolveReport:
    options = options or PipelineOptions()
    violations = validate(instance)
    if violations:
        raise InvalidInstanceError(violations)
    timings = {}
    notes = []
    config = GridOracleConfig(box=options.box, resolution=options.grid, refine_rounds=options.refine)

    def tick(name, t0):
        if options.timings:
            timings[name] = time.perf_counter() - t0

    t0 = time.perf_counter()
    table = crisp_table(instance)
    tick("crisp_optima", t0)

    t0 = time.perf_counter()
    intervals = []
    for q, row in enumerate(table):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DegenerateIntervalWarning)
            intervals.append(interval_from_values([opt.value for opt in row]))
        notes += [f"objective {q + 1}: {w.message}" for w in caught]
    tick("aspiration", t0)

    t0 = time.perf_counter()
    system = build_system(instance, intervals)
    tick("build_system", t0)

    t0 = time.perf_counter()
    p1 = solve_phase1(system, config, starts=options.starts, seed=options.seed,
                      tol_lambda=options.tol_lambda, oracle_only=options.oracle_only)
    tick("phase1", t0)
    if not p1.certified:
        notes.append(f"phase 1 uncertified: local search below grid oracle "
                     f"({p1.oracle_lambda!r}); oracle point reported")

    t0 = time.perf_counter()
    p2 = solve_phase2(system, p1, config, starts=options.starts, seed=options.seed,
                      oracle_only=options.oracle_only)
    tick("phase2", t0)
    if p2.discrepancy:
        notes.append(f"phase 2: grid oracle found level-set point {_vec(p2.oracle_x)} with membership "
                     f"sum {p2.oracle_sum!r} > local {p2.sum_memberships!r}")

    t0 = time.perf_counter()
    verdict = check_fuzzy_efficiency(system, x_cand=p2.x_eff, config=config)
    tick("efficiency", t0)
    if verdict.status == "dominated":
        notes.append(f"phase-2 point dominated by {_vec(verdict.dominator)}")

    labels = system.labels
    box = config.box_array(system.default_box)
    return SolveReport(
        crisp_optima=[{"objective": q + 1,
                       "values": [opt.value for opt in row],
                       "argmax": [_vec(opt.argmax) for opt in row]} for q, row in enumerate(table)],
        aspiration=[{"objective": q + 1, "lo": iv.lo, "hi": iv.hi, "degenerate": iv.degenerate}
                    for q, iv in enumerate(intervals)],
        phase1={"lambda_star": p1.lambda_star, "x_star": _vec(p1.x_star), "binding": list(p1.binding),
                "method": p1.method, "certified": p1.certified, "oracle_lambda": p1.oracle_lambda,
                "oracle_x": _vec(p1.oracle_x), "bisection_lambda": p1.bisection_lambda,
                "direct_lambda": p1.direct_lambda,
                "oracle_config": {"box": box.tolist(), "resolution": config.resolution,
                                  "refine_rounds": config.refine_rounds, "seed": options.seed,
                                  "starts": options.starts, "tol_lambda": options.tol_lambda,
                                  "oracle_only": options.oracle_only}},
        phase2={"x_eff": _vec(p2.x_eff), "memberships": _named(labels, p2.membership_vector),
                "objective_values": _vec(p2.objective_values), "sum_memberships": p2.sum_memberships,
                "min_membership": float(p2.membership_vector.min()), "certified": p2.certified,
                "oracle_sum": p2.oracle_sum, "oracle_x": _vec(p2.oracle_x),
                "oracle_level_set_points": p2.oracle_points, "discrepancy": p2.discrepancy},
        efficiency={"status": verdict.status, "note": verdict.note, "dominator": _vec(verdict.dominator)},
        timings=timings,
        warnings=notes,
        instance={"n": instance.n, "k": instance.k, "m": instance.m, "sha256": instance_digest(instance)},
        certified=bool(p1.certified and p2.certified),
        system=system,
    )


def run_pipeline(instance_path, options: PipelineOptions | None = None, report_path=None) -> SolveReport:
    report = solve_instance(load_instance(instance_path), options)
    if report_path is not None:
        with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json())
    return report


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------

def _knots(mf, domain, direction):
    """Breakpoints of ``mf`` inside ``domain`` (merged into the uniform samples)."""
    lo, hi = domain
    if isinstance(mf, TrigObjectiveMf):
        pts = [mf.lo, mf.hi] if mf.degenerate else [mf.lo, 0.5 * (mf.lo + mf.hi), mf.hi]
    elif isinstance(mf, TrigConstraintMf):
        ad, add = mf.a @ direction, (mf.a + mf.d) @ direction
        pts = []
        if ad > 0:
            pts.append(mf.b / ad)
        if add > 0:
            pts.append((mf.b - mf.p) / add)
    else:
        pts = [mf.anchor - mf.tol, mf.anchor, mf.anchor + mf.tol]
    return [p for p in pts if lo < p < hi]


def curve_domains(system: MembershipSystem, direction=None, box=None):
    """``(label, mf, domain)`` for every membership, using the default slices."""
    n = system.n
    box = system.default_box if box is None else np.asarray(box, dtype=float)
    direction = np.ones(n) if direction is None else np.asarray(direction, dtype=float)
    if direction.shape != (n,) or np.any(direction < 0) or not np.any(direction > 0):
        raise ValueError("slice direction must be a nonnegative, nonzero vector of length n")
    pos = direction > 0
    tau_max = float(np.min(box[pos, 1] / direction[pos]))
    out = []
    labels = iter(system.labels)
    for mf in system.objective_mfs:
        # a step function gets a window scaled to its threshold
        w = max(1.0, abs(mf.lo)) if mf.degenerate else mf.hi - mf.lo
        top = mf.lo if mf.degenerate else mf.hi
        out.append((next(labels), mf, (mf.lo - 0.1 * w, top + 0.1 * w)))
    for mf in system.constraint_mfs:
        out.append((next(labels), mf, (0.0, tau_max)))
    for mf in system.upper_mfs + system.lower_mfs:
        out.append((next(labels), mf, (mf.anchor - 2.0 * mf.tol, mf.anchor + 2.0 * mf.tol)))
    return out, direction


def curve_samples(mf, domain, direction, count=CURVE_SAMPLES):
    base = sample_curve(mf, domain, count, direction=direction)
    extra = _knots(mf, domain, direction)
    if not extra:
        return base
    s = np.union1d(base[:, 0], extra)
    if isinstance(mf, TrigConstraintMf):
        vals = mf(s[:, None] * direction)
    else:
        vals = mf(s)
    return np.column_stack([s, vals])


def emit_curves(system: MembershipSystem, out_dir, direction=None, box=None) -> list[str]:
    """Write one ``<label>.csv`` per membership function; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise PermissionError(f"curve directory {out_dir} is not writable")
    entries, direction = curve_domains(system, direction, box)
    paths = []
    for label, mf, domain in entries:
        path = os.path.join(out_dir, f"{label}.csv")
        write_curve_csv(path, curve_samples(mf, domain, direction))
        paths.append(path)
    return paths


# --------------------------------------------------------------------------
# human-readable summary
# --------------------------------------------------------------------------

def summary_table(report: SolveReport) -> str:
    lines = []
    inst = report.instance
    lines.append(f"instance n={inst['n']} k={inst['k']} m={inst['m']} sha256={inst['sha256'][:12]}")
    lines.append("")
    lines.append(f"{'objective':<10}{'Z^1':>12}{'Z^2':>12}{'Z^3':>12}{'Z^4':>12}{'Z^L':>12}{'Z^U':>12}")
    for row, asp in zip(report.crisp_optima, report.aspiration):
        vals = "".join(f"{v:12.6g}" for v in row["values"])
        lines.append(f"{'Z' + str(row['objective']):<10}{vals}{asp['lo']:12.6g}{asp['hi']:12.6g}")
    p1 = report.phase1
    lines.append("")
    lines.append(f"phase 1: lambda* = {p1['lambda_star']:.7f} at x* = "
                 f"({', '.join(f'{v:.6f}' for v in p1['x_star'])})  [{p1['method']}, "
                 f"{'certified' if p1['certified'] else 'UNCERTIFIED'}, oracle {p1['oracle_lambda']:.7f}]")
    lines.append(f"         binding: {', '.join(p1['binding'])}")
    p2 = report.phase2
    lines.append(f"phase 2: x = ({', '.join(f'{v:.6f}' for v in p2['x_eff'])})  "
                 f"sum = {p2['sum_memberships']:.7f}  "
                 f"[{'certified' if p2['certified'] else 'UNCERTIFIED'}]")
    for label, v in p2["memberships"].items():
        lines.append(f"  {label:<10}{v:12.7f}")
    zs = ", ".join(f"Z{q + 1} = {v:.6f}" for q, v in enumerate(p2["objective_values"]))
    lines.append(f"  {zs}")
    eff = report.efficiency
    lines.append(f"efficiency: {eff['status']}" + (f" ({eff['note']})" if eff["note"] else ""))
    for w in report.warnings:
        lines.append(f"warning: {w}")
    if report.timings:
        lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in report.timings.items()))
    lines.append(f"backend: {_kernels.BACKEND}")
    return "\n".join(lines)

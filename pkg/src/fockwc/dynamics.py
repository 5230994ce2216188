"""Orbit computation, hull-distance diagnostics, and the ratio experiment.

The three tools here probe dynamics that the decision procedures in
`classify` settle symbolically:

* `orbit` produces f, Wf, ..., W^{n-1}f two independent ways (repeated
  matrix application, or one application of the closed-form symbol of the
  n-th power) so the routes can be cross-checked.
* `hull_distance` measures how well convex combinations of orbit vectors
  approximate a target, via a conditional-gradient solve over the simplex
  warm-started across prefix lengths.  The curve is a diagnostic for
  convex-cyclicity; a shrinking error is evidence, never a proof.
* `ratio_experiment` realizes the two-point ratio bound that rules out
  projective-orbit density: on a forward-invariant disk K, the ratio
  |(W^n f)(z)| / |(W^n f)(psi(z))| stays below a constant M built from
  the extrema of |u| and |f| on K.

Orbit vectors whose norm passes 1e150 abort with TruncationOverflow well
before double-precision overflow corrupts the hull solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import classify, fock
from .errors import (BudgetExceeded, DimensionMismatch, RegionInvalid,
                     TruncationOverflow, Unbounded)
from .symbols import OperatorSymbol, iterate_map, iterated_multiplier

MATRIX_ITERATION = "MatrixIteration"
CLOSED_FORM = "ClosedForm"

ORBIT_NORM_CAP = 1e150
# crude work budget: orbit length times truncation size
ORBIT_WORK_CAP = 20_000_000

FIXED_POINT_DISK = "FixedPointDisk"
TRANSLATION_DISK = "TranslationDisk"


@dataclass(frozen=True)
class OrbitRecord:
    vectors: Tuple[fock.CoeffVector, ...]
    route: str

    def __len__(self) -> int:
        return len(self.vectors)

    def norms(self) -> np.ndarray:
        return np.array([v.norm() for v in self.vectors])


@dataclass(frozen=True)
class HullDistanceCurve:
    errors: Tuple[float, ...]
    target: fock.CoeffVector
    iterations: int
    gaps: Tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["n,error"]
        for i, e in enumerate(self.errors):
            lines.append(f"{i + 1},{e!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "errors": list(self.errors),
            "iterations": self.iterations,
            "gaps": list(self.gaps),
            "target_norm": self.target.norm(),
        }


@dataclass(frozen=True)
class RatioExperimentReport:
    region_kind: str
    center: complex
    radius: float
    M: float
    max_ratio_observed: float
    n_max: int
    samples: int
    invariance_defect: float

    def to_json(self) -> dict:
        return {
            "region": {"kind": self.region_kind,
                       "center": [self.center.real, self.center.imag],
                       "radius": self.radius},
            "M": self.M,
            "max_ratio_observed": self.max_ratio_observed,
            "n_max": self.n_max,
            "samples": self.samples,
            "invariance_defect": self.invariance_defect,
        }

    def to_csv(self) -> str:
        rows = [("region", self.region_kind),
                ("center_re", repr(self.center.real)),
                ("center_im", repr(self.center.imag)),
                ("radius", repr(self.radius)),
                ("M", repr(self.M)),
                ("max_ratio_observed", repr(self.max_ratio_observed)),
                ("n_max", str(self.n_max)),
                ("samples", str(self.samples)),
                ("invariance_defect", repr(self.invariance_defect))]
        return "\n".join(f"{k},{v}" for k, v in rows) + "\n"


def _require_bounded(op: OperatorSymbol) -> None:
    verdict = classify.check_bounded(op)
    if not verdict.is_yes:
        raise Unbounded(verdict.reason)


def orbit(op: OperatorSymbol, f: fock.CoeffVector, n: int,
          route: str = MATRIX_ITERATION) -> OrbitRecord:
    """f, Wf, ..., W^{n-1}f by repeated application or closed-form powers."""
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    if route not in (MATRIX_ITERATION, CLOSED_FORM):
        raise ValueError(f"unknown route {route!r}")
    _require_bounded(op)
    size = len(f)
    if n * size > ORBIT_WORK_CAP:
        raise BudgetExceeded(
            f"orbit of length {n} at truncation {size} exceeds the work cap")
    trunc = fock.TruncationParams(N=size)
    vectors = [f]
    if route == MATRIX_ITERATION:
        mat = fock.build_matrix(op, trunc)
        cur = f
        for _ in range(n - 1):
            cur = fock.apply(mat, cur)
            if cur.norm() > ORBIT_NORM_CAP:
                raise TruncationOverflow(
                    f"orbit norm passed {ORBIT_NORM_CAP:g} at step "
                    f"{len(vectors)}")
            vectors.append(cur)
    else:
        for k in range(1, n):
            symbol_k = OperatorSymbol(iterated_multiplier(op.u, op.psi, k),
                                      iterate_map(op.psi, k))
            cur = fock.apply(fock.build_matrix(symbol_k, trunc), f)
            if cur.norm() > ORBIT_NORM_CAP:
                raise TruncationOverflow(
                    f"orbit norm passed {ORBIT_NORM_CAP:g} at step {k}")
            vectors.append(cur)
    return OrbitRecord(vectors=tuple(vectors), route=route)


def hull_distance(orbit_record: OrbitRecord, target: fock.CoeffVector,
                  iterations: int = 200) -> HullDistanceCurve:
    """Distance from target to the hull of each orbit prefix.

    Conditional gradient over the simplex: the linear subproblem picks the
    best single vertex, and the step is the exact minimizer of the
    quadratic objective along the segment (clipped to [0, 1]).  Solves are
    warm-started from the previous prefix, so the error sequence is
    nonincreasing by construction.
    """
    if len(orbit_record) == 0:
        raise ValueError("orbit must be nonempty")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    verts = np.stack([v.values for v in orbit_record.vectors])
    y = target.values
    if verts.shape[1] != y.shape[0]:
        raise DimensionMismatch(
            f"target length {y.shape[0]} != orbit length {verts.shape[1]}")
    gap_floor = 1e-16 * max(1.0, float(np.vdot(y, y).real))
    x = verts[0].copy()
    errors, gaps = [], []
    for count in range(1, len(orbit_record) + 1):
        active = verts[:count]
        gap = 0.0
        for _ in range(iterations):
            g = x - y
            scores = (active @ np.conj(g)).real
            best = int(np.argmin(scores))
            s = active[best]
            gap = float(np.vdot(x, g).real - scores[best])
            if gap <= gap_floor:
                break
            step = s - x
            denom = float(np.vdot(step, step).real)
            if denom == 0.0:
                break
            gamma = float(np.vdot(step, y - x).real) / denom
            if gamma <= 0.0:
                break
            x = x + min(gamma, 1.0) * step
        errors.append(float(np.linalg.norm(x - y)))
        gaps.append(gap)
    return HullDistanceCurve(errors=tuple(errors), target=target,
                             iterations=iterations, gaps=tuple(gaps))


def _log_abs_multiplier(op: OperatorSymbol, z: np.ndarray) -> np.ndarray:
    pv = np.polyval(op.u.p_values[::-1], z)
    with np.errstate(divide="ignore"):
        return (math.log(abs(op.d.value)) + (op.c.value * z).real
                + np.log(np.abs(pv)))


def ratio_experiment(op: OperatorSymbol, sigma: complex, r: float,
                     n_max: int, grid: int = 64) -> RatioExperimentReport:
    """Two-point orbit ratio bound on a forward-invariant disk.

    The test function is e^{sigma z}, zero-free by construction.  The
    region follows the two map cases: a disk of radius r around the fixed
    point when a != 1, and the disk of radius 2|b| around b for a pure
    translation.  M is formed from grid extrema of |u| and |f| over the
    region; the ratio check runs on the sampled z that stay in the region
    for one step, which for the translation case is the proper subregion
    where |z| <= 2|b| as well.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if grid < 2:
        raise ValueError("grid must be >= 2")
    _require_bounded(op)
    av, bv = op.a.value, op.b.value
    if av == 1.0:
        if op.b.is_zero:
            raise RegionInvalid(
                "identity map: no invariant disk distinguishes two points")
        center = bv
        radius = 2.0 * abs(bv)
        kind = TRANSLATION_DISK
    else:
        if r <= 0:
            raise ValueError("radius must be positive")
        center = bv / (1.0 - av)
        radius = float(r)
        kind = FIXED_POINT_DISK
    xs = np.linspace(center.real - radius, center.real + radius, grid)
    ys = np.linspace(center.imag - radius, center.imag + radius, grid)
    zg = (xs[None, :] + 1j * ys[:, None]).ravel()
    region = zg[np.abs(zg - center) <= radius]
    logu = _log_abs_multiplier(op, region)
    logf = (sigma * region).real
    log_m = (float(np.max(logu)) + float(np.max(logf))
             - float(np.min(logu)) - float(np.min(logf)))
    bound_m = float(np.exp(log_m))
    stays = np.abs(av * region + bv - center) <= radius + 1e-12
    zs = region[stays]
    defect = float(np.max(np.abs(av * zs + bv - center)) - radius)
    pz = zs.copy()
    pw = av * zs + bv
    cz = np.zeros(zs.shape[0])
    cw = np.zeros(zs.shape[0])
    max_log_ratio = -math.inf
    for n in range(n_max + 1):
        lr = (cz + (sigma * pz).real) - (cw + (sigma * pw).real)
        max_log_ratio = max(max_log_ratio, float(np.max(lr)))
        if n == n_max:
            break
        cz += _log_abs_multiplier(op, pz)
        cw += _log_abs_multiplier(op, pw)
        pz = av * pz + bv
        pw = av * pw + bv
    return RatioExperimentReport(
        region_kind=kind, center=complex(center), radius=radius,
        M=bound_m, max_ratio_observed=float(np.exp(max_log_ratio)),
        n_max=n_max, samples=int(zs.shape[0]),
        invariance_defect=defect)

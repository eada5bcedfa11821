"""Lattice-point counting of dilates and Ehrhart quasi-polynomial recovery.

Counting compiles every convex piece to its integer facet system once and
scans the integer prefixes ``(x_1, ..., x_{n-1})`` of the dilated bounding
box with numpy.  For each prefix and piece the feasible values of the last
coordinate form an integer interval; a point is counted once if it lies in
any piece, so per prefix we measure the union of the pieces' intervals.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .errors import NotFullDimensionalError, PeriodViolationError, ValidationMismatchError
from .polygeom import bounding_box, contains, denominator, pieces_of
from .qpalg import interpolate

log = logging.getLogger(__name__)

_INT64_SAFE = 2**62
_CHUNK = 1 << 18  # prefixes per numpy batch


def default_jobs():
    env = os.environ.get("EHRLAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer EHRLAB_JOBS=%r", env)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class CountRequest:
    target: object
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("dilation must be a positive integer")


@dataclass(frozen=True)
class EhrhartResult:
    qp: object
    period_used: int
    samples_used: list = field(default_factory=list)
    validation_points: list = field(default_factory=list)

    def to_json(self):
        return {
            "qp": self.qp.to_json(),
            "period_used": self.period_used,
            "samples_used": [[k, c] for k, c in self.samples_used],
            "validation_points": [[k, c] for k, c in self.validation_points],
        }


def _compile(target):
    pieces = pieces_of(target)
    systems = []
    for piece in pieces:
        if not piece.is_full_dimensional:
            raise NotFullDimensionalError(
                f"cannot count a {piece.dimension}-dimensional polytope in R^{piece.ambient_dim}"
            )
        h = piece.hrep
        systems.append((np.array(h.normals, dtype=object).reshape(len(h), piece.ambient_dim), list(h.offsets)))
    return systems


def count(target, k, jobs=1):
    """Number of integer points in ``k * target`` (union semantics for balls)."""
    if k < 1:
        raise ValueError("dilation must be a positive integer")
    n = target.ambient_dim
    systems = _compile(target)
    if n == 0:
        return 1
    box = bounding_box(target, k)
    if any(lo > hi for lo, hi in box):
        return 0
    # overflow guard for int64 dot products
    reach = max(max(abs(lo), abs(hi)) for lo, hi in box) + 1
    worst = 0
    for normals, offsets in systems:
        for row, b in zip(normals.tolist(), offsets):
            worst = max(worst, sum(abs(a) for a in row) * reach + abs(k * b))
    dtype = np.int64 if worst < _INT64_SAFE else object
    compiled = [(np.array(a, dtype=dtype), np.array([k * b for b in off], dtype=dtype)) for a, off in systems]

    lead_lo, lead_hi = box[0]
    if n == 1:
        return _count_block(compiled, box, None, dtype)
    width = 1
    for lo, hi in box[1:-1]:
        width *= hi - lo + 1
    step = max(1, _CHUNK // max(width, 1))
    slices = [(s, min(s + step - 1, lead_hi)) for s in range(lead_lo, lead_hi + 1, step)]
    if jobs > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda sl: _count_block(compiled, box, sl, dtype), slices))
    else:
        parts = [_count_block(compiled, box, sl, dtype) for sl in slices]
    return int(sum(parts))


def _count_block(compiled, box, lead_slice, dtype):
    n = len(box)
    last_lo, last_hi = box[-1]
    if n == 1:
        prefix = np.zeros((0, 1), dtype=dtype)
    else:
        ranges = [np.arange(lead_slice[0], lead_slice[1] + 1)]
        ranges += [np.arange(lo, hi + 1) for lo, hi in box[1:-1]]
        grids = np.meshgrid(*ranges, indexing="ij")
        prefix = np.stack([g.ravel() for g in grids]).astype(dtype)
    npts = prefix.shape[1]
    empty_lo, empty_hi = last_hi + 1, last_lo - 1
    los, his = [], []
    for normals, rhs in compiled:
        lo = np.full(npts, last_lo, dtype=dtype)
        hi = np.full(npts, last_hi, dtype=dtype)
        ok = np.ones(npts, dtype=bool)
        for row, b in zip(normals, rhs):
            a_last = row[-1]
            r = b - row[:-1] @ prefix if n > 1 else np.full(npts, b, dtype=dtype)
            if a_last > 0:
                hi = np.minimum(hi, r // a_last)
            elif a_last < 0:
                lo = np.maximum(lo, -(r // -a_last))
            else:
                ok &= r >= 0
        ok &= lo <= hi
        los.append(np.where(ok, lo, empty_lo))
        his.append(np.where(ok, hi, empty_hi))
    if len(los) == 1:
        lo, hi = los[0], his[0]
        return int(np.maximum(hi - lo + 1, 0).sum())
    lo = np.stack(los)
    hi = np.stack(his)
    order = np.argsort(lo, axis=0, kind="stable")
    lo = np.take_along_axis(lo, order, axis=0)
    hi = np.take_along_axis(hi, order, axis=0)
    covered = np.full(npts, empty_hi, dtype=dtype)
    total = 0
    for j in range(lo.shape[0]):
        start = np.maximum(lo[j], covered + 1)
        total += int(np.maximum(hi[j] - start + 1, 0).sum())
        covered = np.maximum(covered, hi[j])
    return total


def count_brute(X, k):
    """Reference count by testing every box point with exact membership.

    Works for lower-dimensional polytopes too; slow, meant for small cases
    and as an independent check on ``count``.
    """
    box = bounding_box(X, k)
    pieces = pieces_of(X)
    total = 0
    for x in iproduct(*(range(lo, hi + 1) for lo, hi in box)):
        y = tuple(Fraction(c, k) for c in x)
        if any(contains(p, y) for p in pieces):
            total += 1
    return total


def ehrhart(target, jobs=1):
    """Ehrhart quasi-polynomial of a full-dimensional polytope or ball.

    Samples one full set of ``degree + 1`` dilations per residue class of the
    denominator, interpolates, and then checks one more residue round.
    """
    n = target.ambient_dim
    s = denominator(target)
    ks = list(range(1, s * (n + 1) + 1))
    checks = list(range(s * (n + 1) + 1, s * (n + 2) + 1))
    samples = [(k, count(target, k, jobs)) for k in ks]
    qp = interpolate(samples, n, s)
    validation = []
    for k in checks:
        c = count(target, k, jobs)
        validation.append((k, c))
        if qp(k) != c:
            raise ValidationMismatchError(
                f"interpolated quasi-polynomial gives {qp(k)} at k={k}, direct count is {c}"
            )
    log.debug("ehrhart: period %d, %d samples, qp=%s", s, len(samples), qp)
    return EhrhartResult(qp, s, samples, validation)


def leading_volume(target, jobs=1, result=None):
    """Leading Ehrhart coefficient, i.e. the volume of the target."""
    res = result if result is not None else ehrhart(target, jobs)
    qp = res.qp
    n = target.ambient_dim
    if qp.degree != n:
        raise PeriodViolationError(f"Ehrhart quasi-polynomial has degree {qp.degree}, expected {n}")
    lead = qp.coefficients[n]
    if lead.period != 1:
        raise PeriodViolationError(f"leading coefficient has period {lead.period}")
    return lead.values[0]

"""Exact convex rational polytopes and finite unions of them.

Polytopes are kept as vertex lists of ``Fraction`` coordinates.  Facet
inequalities are derived on demand by scanning hyperplanes through
affinely independent vertex subsets, which is plenty for the vertex counts
that show up here (a few dozen at most).  Lower-dimensional polytopes are
handled in a coordinate chart of their affine hull.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, factorial, floor, lcm

from .errors import NotFullDimensionalError
from .exact import det, dot, in_convex_hull, linprog, nullspace, primitive_integer, rref, to_fraction


@dataclass(frozen=True)
class HRep:
    """Facet system ``normal . x <= offset`` with integer entries.

    Each row ``(normal, offset)`` is scaled to a primitive integer vector
    as a whole, so dilating by ``k`` is just ``normal . x <= k * offset``.
    """

    normals: tuple
    offsets: tuple

    def __len__(self):
        return len(self.normals)

    def rows(self):
        return list(zip(self.normals, self.offsets))

    def satisfied_by(self, x, k=1):
        return all(dot(a, x) <= k * b for a, b in zip(self.normals, self.offsets))


class Chart:
    """Affine coordinates on the affine hull of a point set.

    ``pivots`` are ambient coordinate indices that restrict injectively to
    the hull; ``project`` keeps those coordinates and ``lift`` inverts it.
    """

    def __init__(self, points):
        self.base = points[0]
        n = len(self.base)
        diffs = [[a - b for a, b in zip(p, self.base)] for p in points[1:]]
        mat, pivots = rref(diffs, n) if diffs else ([], [])
        self.rows = mat[: len(pivots)]
        self.pivots = tuple(pivots)
        self.ambient_dim = n

    @property
    def dim(self):
        return len(self.pivots)

    def project(self, x):
        return tuple(x[p] for p in self.pivots)

    def lift(self, y):
        out = list(self.base)
        for yj, pj, row in zip(y, self.pivots, self.rows):
            step = yj - self.base[pj]
            if step:
                out = [o + step * r for o, r in zip(out, row)]
        return tuple(out)

    def contains_point(self, x):
        return self.lift(self.project(x)) == tuple(x)


def _hyperplane_through(pts):
    """Normal and offset of the hyperplane through ``d`` points in ``R^d``,
    or ``None`` if the points are affinely dependent."""
    d = len(pts[0])
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    ns = nullspace(diffs, d)
    if len(ns) != 1:
        return None
    a = primitive_integer(ns[0])
    return a, dot(a, pts[0])


def _facets(points):
    """Facets of a full-dimensional point set in ``R^d``.

    Returns a list of ``(normal, offset, tight_indices)`` with integer
    ``(normal, offset)`` rows, ``normal . x <= offset`` valid on all points.
    """
    d = len(points[0])
    if d == 0:
        return []
    found = {}
    for combo in combinations(range(len(points)), d):
        if any(set(combo) <= tight for tight in found.values()):
            continue
        hp = _hyperplane_through([points[i] for i in combo])
        if hp is None:
            continue
        a, b = hp
        vals = [dot(a, p) - b for p in points]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            a, b = [-x for x in a], -b
        else:
            continue
        row = primitive_integer(list(a) + [b])
        key = (tuple(row[:-1]), row[-1])
        if key not in found:
            found[key] = frozenset(i for i, v in enumerate(vals) if v == 0)
    return [(a, b, sorted(tight)) for (a, b), tight in found.items()]


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many rational points in ``R^ambient_dim``.

    Build through ``make_polytope`` unless the vertices are already known
    to be extreme.  Equality ignores vertex order.
    """

    ambient_dim: int
    vertices: tuple

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, frozenset(self.vertices)))

    @cached_property
    def chart(self):
        return Chart(self.vertices)

    @property
    def dimension(self):
        return self.chart.dim

    @property
    def is_full_dimensional(self):
        return self.dimension == self.ambient_dim

    @cached_property
    def hrep(self):
        return hrep(self)

    @cached_property
    def _projected(self):
        chart = self.chart
        return Polytope(chart.dim, tuple(chart.project(v) for v in self.vertices))

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "vertices": [[_fmt(c) for c in v] for v in self.vertices],
        }


@dataclass(frozen=True)
class PolytopalBall:
    """Finite union of full-dimensional convex pieces in a common ``R^n``."""

    ambient_dim: int
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a polytopal ball needs at least one piece")
        for i, piece in enumerate(pieces):
            if piece.ambient_dim != self.ambient_dim:
                raise ValueError(f"piece {i} lives in R^{piece.ambient_dim}, not R^{self.ambient_dim}")
            if not piece.is_full_dimensional:
                raise NotFullDimensionalError(
                    f"piece {i} has dimension {piece.dimension} in R^{self.ambient_dim}"
                )
        object.__setattr__(self, "pieces", pieces)

    @property
    def vertices(self):
        seen = {}
        for piece in self.pieces:
            for v in piece.vertices:
                seen.setdefault(v, None)
        return tuple(seen)

    def to_json(self):
        return {"ambient_dim": self.ambient_dim, "pieces": [p.to_json() for p in self.pieces]}


def _fmt(x):
    return f"{x.numerator}/{x.denominator}"


def _clean_points(ambient_dim, points):
    if ambient_dim < 0:
        raise ValueError("ambient dimension must be nonnegative")
    pts = [tuple(to_fraction(c) for c in p) for p in points]
    if not pts:
        raise ValueError("empty point list")
    for p in pts:
        if len(p) != ambient_dim:
            raise ValueError(f"point {p} does not have {ambient_dim} coordinates")
    return list(dict.fromkeys(pts))


def make_polytope(ambient_dim, points):
    """Convex hull of ``points``, keeping only its extreme points."""
    pts = _clean_points(ambient_dim, points)
    if len(pts) <= 2:
        return Polytope(ambient_dim, tuple(pts))
    keep = []
    for i, p in enumerate(pts):
        others = keep + pts[i + 1:]
        if not in_convex_hull(p, others):
            keep.append(p)
    return Polytope(ambient_dim, tuple(keep))


def point(ambient_dim=0):
    """The single point at the origin; in ``R^0`` this is the unit for ``product``."""
    return Polytope(ambient_dim, ((Fraction(0),) * ambient_dim,))


def _extreme(ambient_dim, points):
    # vertices already known to be extreme points; only dedupe
    return Polytope(ambient_dim, tuple(_clean_points(ambient_dim, points)))


def translate(P, v):
    v = tuple(to_fraction(c) for c in v)
    if len(v) != P.ambient_dim:
        raise ValueError(f"translation vector has length {len(v)}, expected {P.ambient_dim}")
    return _extreme(P.ambient_dim, [tuple(a + b for a, b in zip(p, v)) for p in P.vertices])


def unit_vector(n, i, scale=1):
    """``scale * e_i`` in ``R^n`` with 1-based ``i``."""
    v = [Fraction(0)] * n
    v[i - 1] = to_fraction(scale)
    return tuple(v)


def product(P, Q):
    """Cartesian product; ``P``'s coordinates come first."""
    return _extreme(P.ambient_dim + Q.ambient_dim, [u + w for u in P.vertices for w in Q.vertices])


def pyramid(P):
    d = P.ambient_dim
    base = [v + (Fraction(0),) for v in P.vertices]
    return _extreme(d + 1, base + [unit_vector(d + 1, d + 1)])


def pyr_power(P, i):
    for _ in range(i):
        P = pyramid(P)
    return P


def hrep(P):
    """Facet inequalities of a full-dimensional polytope."""
    if not P.is_full_dimensional:
        raise NotFullDimensionalError(
            f"polytope has dimension {P.dimension} in R^{P.ambient_dim}; work in its affine hull"
        )
    facets = _facets(list(P.vertices))
    facets.sort(key=lambda f: (f[0], f[1]))
    return HRep(tuple(tuple(a) for a, _, _ in facets), tuple(b for _, b, _ in facets))


def contains(P, x):
    x = tuple(to_fraction(c) for c in x)
    if len(x) != P.ambient_dim:
        raise ValueError(f"point has {len(x)} coordinates, polytope lives in R^{P.ambient_dim}")
    if P.is_full_dimensional:
        return P.hrep.satisfied_by(x)
    if not P.chart.contains_point(x):
        return False
    return P._projected.hrep.satisfied_by(P.chart.project(x))


def is_facet(F, P):
    """Whether ``F`` is exactly a facet of ``P`` (as a geometric set)."""
    if F.ambient_dim != P.ambient_dim or F.dimension != P.dimension - 1:
        return False
    chart = P.chart
    if not all(chart.contains_point(v) for v in F.vertices):
        return False
    fv = [chart.project(v) for v in F.vertices]
    pv = [chart.project(v) for v in P.vertices]
    Pp = P._projected
    if not all(Pp.hrep.satisfied_by(v) for v in fv):
        return False
    # hyperplane through F inside P's hull
    ns = nullspace(Chart(fv).rows, chart.dim)
    a = ns[0]
    b = dot(a, fv[0])
    vals = [dot(a, v) - b for v in pv]
    if not (all(t <= 0 for t in vals) or all(t >= 0 for t in vals)):
        return False
    Fp = Polytope(len(fv[0]), tuple(dict.fromkeys(fv)))
    return all(contains(Fp, v) for v, t in zip(pv, vals) if t == 0)


def interiors_disjoint(P, Q):
    """Whether the open interiors of two full-dimensional polytopes are disjoint.

    Maximizes a common slack ``t`` in ``a . x + t <= b`` over both facet
    systems; interiors meet exactly when the optimum is positive.
    """
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("polytopes live in different ambient spaces")
    n = P.ambient_dim
    rows = P.hrep.rows() + Q.hrep.rows()
    a_ub = [list(a) + [1] for a, _ in rows] + [[0] * n + [1]]
    b_ub = [b for _, b in rows] + [1]
    res = linprog([0] * n + [1], a_ub=a_ub, b_ub=b_ub, free=range(n + 1))
    return res.value <= 0


def _all_vertices(X):
    return X.vertices


def denominator(X):
    d = 1
    for v in _all_vertices(X):
        for c in v:
            d = lcm(d, c.denominator)
    return d


def bounding_box(X, k=1):
    """Integer ranges ``[(lo, hi), ...]`` covering ``kX`` per coordinate."""
    verts = _all_vertices(X)
    box = []
    for j in range(X.ambient_dim):
        coords = [v[j] for v in verts]
        box.append((ceil(k * min(coords)), floor(k * max(coords))))
    return box


def triangulate(P):
    """Pulling triangulation from the first vertex, as tuples of vertices."""
    return [tuple(P.vertices[i] for i in s) for s in _triangulate(list(P.vertices), list(range(len(P.vertices))))]


def _triangulate(points, idx):
    sub = [points[i] for i in idx]
    chart = Chart(sub)
    if chart.dim == 0:
        return [(idx[0],)]
    proj = [chart.project(p) for p in sub]
    apex = idx[0]
    out = []
    for _, _, tight in _facets(proj):
        if 0 in tight:
            continue
        for simplex in _triangulate(points, [idx[t] for t in tight]):
            out.append((apex,) + simplex)
    return out


def volume(P):
    """Euclidean volume of a full-dimensional polytope (1 for a point in ``R^0``)."""
    if not P.is_full_dimensional:
        raise NotFullDimensionalError("volume is only defined here for full-dimensional polytopes")
    d = P.ambient_dim
    if d == 0:
        return Fraction(1)
    total = Fraction(0)
    for s in triangulate(P):
        total += abs(det([[a - b for a, b in zip(v, s[0])] for v in s[1:]]))
    return total / factorial(d)


# --- JSON -------------------------------------------------------------------

def polytope_from_json(data, prune=True):
    try:
        n = int(data["ambient_dim"])
        verts = data["vertices"]
        if not isinstance(verts, list):
            raise TypeError("vertices must be a list")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polytope JSON: {exc}") from exc
    try:
        if prune:
            return make_polytope(n, verts)
        return _extreme(n, verts)
    except (TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed polytope JSON: {exc}") from exc


def ball_from_json(data):
    try:
        n = int(data["ambient_dim"])
        pieces = [polytope_from_json(p) for p in data["pieces"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ball JSON: {exc}") from exc
    return PolytopalBall(n, tuple(pieces))


def target_from_json(data):
    """Polytope or ball, depending on which keys are present."""
    if not isinstance(data, dict):
        raise ValueError("expected a JSON object")
    if "pieces" in data:
        return ball_from_json(data)
    return polytope_from_json(data)


def pieces_of(X):
    return X.pieces if isinstance(X, PolytopalBall) else (X,)

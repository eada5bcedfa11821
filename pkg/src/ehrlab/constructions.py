"""Builders for the segment, pentagon, cyclic polytopes and the glued balls.

Conventions used throughout: ``n`` is the ambient dimension, coordinates
and standard basis vectors are 1-based (``e_1, ..., e_n``), and the cyclic
polytope ``C_i`` is taken from a fixed parameter set ``T`` of ``n + 1``
integers (default ``0, 1, ..., n``).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import FacetValidationError, SearchBudgetExceeded
from .polygeom import (
    PolytopalBall,
    _extreme,
    is_facet,
    make_polytope,
    point,
    product,
    pyr_power,
    translate,
    unit_vector,
    volume,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicConfig:
    T: tuple

    def __post_init__(self):
        T = tuple(int(t) for t in self.T)
        if len(T) < 1 or any(a >= b for a, b in zip(T, T[1:])):
            raise ValueError("T must be a strictly increasing list of integers")
        object.__setattr__(self, "T", T)

    @classmethod
    def default(cls, n):
        return cls(tuple(range(n + 1)))

    @property
    def n(self):
        return len(self.T) - 1


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    periods: tuple
    cyclic: CyclicConfig = None
    shifts: tuple = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        periods = tuple(int(p) for p in self.periods)
        if len(periods) != self.n or any(p < 1 for p in periods):
            raise ValueError(f"need {self.n} positive periods, got {self.periods}")
        object.__setattr__(self, "periods", periods)
        cyc = self.cyclic if self.cyclic is not None else CyclicConfig.default(self.n)
        if cyc.n != self.n:
            raise ValueError(f"T must have {self.n + 1} entries")
        object.__setattr__(self, "cyclic", cyc)
        if self.shifts is not None:
            shifts = tuple(int(k) for k in self.shifts)
            if len(shifts) != self.n or any(k < 1 for k in shifts):
                raise ValueError(f"need {self.n} positive shifts, got {self.shifts}")
            object.__setattr__(self, "shifts", shifts)

    def q(self, i):
        return pentagon_q(self.periods[i])

    def with_shifts(self, shifts):
        return ConstructionParams(self.n, self.periods, self.cyclic, tuple(shifts))

    def provenance(self, name):
        return {
            "construction": name,
            "n": self.n,
            "periods": list(self.periods),
            "T": list(self.cyclic.T),
            "shifts": list(self.shifts) if self.shifts is not None else None,
        }


def _check_p(p):
    if int(p) != p or p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    return int(p)


def pentagon_q(p):
    return p * p - p + 1


def segment(p):
    """``[-1/p, 0]`` on the line."""
    p = _check_p(p)
    return _extreme(1, [(Fraction(-1, p),), (Fraction(0),)])


def pentagon(p):
    """Pentagon with vertices ``(+-q, 0)``, ``(+-(q-1), 1)``, ``(0, q/p)``; a triangle when ``p = 1``."""
    p = _check_p(p)
    q = pentagon_q(p)
    pts = [(q, 0), (-q, 0), (q - 1, 1), (-(q - 1), 1), (0, Fraction(q, p))]
    return make_polytope(2, pts)


def cyclic(config, i):
    """``C_i``: hull of the moment curve ``x -> (x, ..., x^i)`` over ``T``."""
    if not 0 <= i <= config.n:
        raise ValueError(f"cyclic index {i} outside 0..{config.n}")
    if i == 0:
        return point(0)
    return make_polytope(i, [tuple(Fraction(t) ** j for j in range(1, i + 1)) for t in config.T])


def cyclic_volume(config, i):
    """Volume of ``C_i`` from a triangulation; ``C_0`` has volume 1."""
    return volume(cyclic(config, i))


def _simplex_face(dim, first):
    """``conv{0, e_first, ..., e_dim}`` in ``R^dim``."""
    return _extreme(dim, [(Fraction(0),) * dim] + [unit_vector(dim, j) for j in range(first, dim + 1)])


def _check_index(n, i):
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"index i={i} must satisfy 1 <= i <= n-1 with n={n}")


def _check_shift(k):
    if int(k) != k or k < 1:
        raise ValueError(f"shift must be a positive integer, got {k}")


def _config(n, T):
    return CyclicConfig.default(n) if T is None else (T if isinstance(T, CyclicConfig) else CyclicConfig(T))


def left_summand(n, i, p, k=1, T=None):
    """``L_i = (C_i x Pyr^{n-i-1}(segment)) - k e_{i+1}``."""
    _check_index(n, i)
    _check_shift(k)
    base = product(cyclic(_config(n, T), i), pyr_power(segment(p), n - i - 1))
    return translate(base, unit_vector(n, i + 1, -k))


def left_facet(n, i, k=1, T=None):
    """``L'_i = (C_i x conv{0, e_2, ..., e_{n-i}}) - k e_{i+1}``."""
    _check_index(n, i)
    _check_shift(k)
    base = product(cyclic(_config(n, T), i), _simplex_face(n - i, 2))
    return translate(base, unit_vector(n, i + 1, -k))


def right_summand(n, i, p, k=1, T=None):
    """``R_i = (C_{i-1} x Pyr^{n-i-1}(pentagon)) + k e_{i+1}``."""
    _check_index(n, i)
    _check_shift(k)
    base = product(cyclic(_config(n, T), i - 1), pyr_power(pentagon(p), n - i - 1))
    return translate(base, unit_vector(n, i + 1, k))


def right_facet(n, i, p, k=1, T=None):
    """``R'_i = (C_{i-1} x conv{+-q e_1, e_3, ..., e_{n-i+1}}) + k e_{i+1}``."""
    _check_index(n, i)
    _check_shift(k)
    q = pentagon_q(_check_p(p))
    d = n - i + 1
    face = _extreme(d, [unit_vector(d, 1, q), unit_vector(d, 1, -q)] + [unit_vector(d, j) for j in range(3, d + 1)])
    base = product(cyclic(_config(n, T), i - 1), face)
    return translate(base, unit_vector(n, i + 1, k))


def middle_single(n, i, p, k=1, T=None):
    """``M_i``: hull of the two gluing facets ``L'_i`` and ``R'_i``."""
    left = left_facet(n, i, k, T)
    right = right_facet(n, i, p, k, T)
    return make_polytope(n, left.vertices + right.vertices)


def build_Qi(n, i, p, T=None):
    """Three-piece ball ``L_i, M_i, R_i`` (unit shifts), or ``Pyr^{n-1}(segment)`` for ``i = 0``."""
    if not 0 <= i <= n - 1:
        raise ValueError(f"index i={i} must satisfy 0 <= i <= n-1")
    if i == 0:
        return PolytopalBall(n, (pyr_power(segment(p), n - 1),))
    return PolytopalBall(
        n,
        (left_summand(n, i, p, 1, T), middle_single(n, i, p, 1, T), right_summand(n, i, p, 1, T)),
    )


def q0_piece(n, p, k):
    """``Pyr^{n-1}(segment) - k e_1``."""
    _check_shift(k)
    return translate(pyr_power(segment(p), n - 1), unit_vector(n, 1, -k))


def q0_facet(n, k):
    """``conv{0, e_2, ..., e_n} - k e_1``."""
    _check_shift(k)
    return translate(_simplex_face(n, 2), unit_vector(n, 1, -k))


def designated_facets(params):
    """The gluing facets ``Q'_0, L'_1, R'_1, ..., L'_{n-1}, R'_{n-1}`` with names."""
    n, T, ks = params.n, params.cyclic, params.shifts
    out = [("Q'_0", q0_facet(n, ks[0]))]
    for i in range(1, n):
        out.append((f"L'_{i}", left_facet(n, i, ks[i], T)))
        out.append((f"R'_{i}", right_facet(n, i, params.periods[i], ks[i], T)))
    return out


def middle(params):
    """``M``: hull of every designated facet."""
    verts = [v for _, f in designated_facets(params) for v in f.vertices]
    return make_polytope(params.n, verts)


def facet_report(params):
    """``[(name, passes)]`` for the designated facets against ``M``.

    In dimension 1 the only designated facet is a point and ``M`` is that
    point, so there is nothing to check.
    """
    if params.n == 1:
        return []
    M = middle(params)
    return [(name, is_facet(F, M)) for name, F in designated_facets(params)]


def _shifts_ok(params, shifts):
    return all(ok for _, ok in facet_report(params.with_shifts(shifts)))


def choose_shifts(params, budget=2**12):
    """Smallest shift tuple (under the search policy) making every designated
    facet a facet of ``M``.

    Doubles a uniform shift until it works, then lowers each coordinate in
    turn to the least passing value with the others fixed.
    """
    n = params.n
    K = 1
    while not _shifts_ok(params, (K,) * n):
        if K >= budget:
            raise SearchBudgetExceeded(f"no uniform shift up to {budget} works", (K,) * n)
        K = min(2 * K, budget)
    shifts = [K] * n
    for j in range(n):
        for cand in range(1, shifts[j]):
            trial = shifts[:j] + [cand] + shifts[j + 1:]
            if _shifts_ok(params, trial):
                shifts[j] = cand
                break
    log.debug("choose_shifts(%s) -> %s", params.periods, shifts)
    return tuple(shifts)


def qstar_pieces(params):
    """Named pieces ``Q_0, M, L_1, R_1, ..., L_{n-1}, R_{n-1}``."""
    n, T, ks, ps = params.n, params.cyclic, params.shifts, params.periods
    named = [("Q_0", q0_piece(n, ps[0], ks[0]))]
    if n > 1:
        named.append(("M", middle(params)))
    for i in range(1, n):
        named.append((f"L_{i}", left_summand(n, i, ps[i], ks[i], T)))
        named.append((f"R_{i}", right_summand(n, i, ps[i], ks[i], T)))
    return named


def build_qstar(params):
    """Ball whose Ehrhart coefficient of ``t^i`` has period ``periods[i]``."""
    if params.shifts is None:
        raise ValueError("shifts are required; call choose_shifts first")
    bad = [name for name, ok in facet_report(params) if not ok]
    if bad:
        raise FacetValidationError(f"shifts {params.shifts} fail the facet check for {', '.join(bad)}")
    return PolytopalBall(params.n, tuple(p for _, p in qstar_pieces(params)))

"""Exact Ehrhart quasi-polynomials of rational polytopes and polytopal balls."""

from .qpalg import PeriodicFunction, QuasiPolynomial, interpolate, minimal_period, period_sequence, qp_add, qp_equivalent, qp_mul
from .polygeom import HRep, PolytopalBall, Polytope, make_polytope
from .latcount import count, ehrhart, leading_volume

__version__ = "0.1.0"

"""Periodic functions and quasi-polynomials over the rationals.

A quasi-polynomial is stored as a list of periodic coefficient functions
``c_0, ..., c_n`` and evaluates at an integer ``k`` to ``sum c_i(k) * k**i``.
Values are always kept in canonical form (minimal periods, no identically
zero leading coefficient), so ``==`` is equality of functions on ``Z``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import InsufficientSamplesError, InconsistentSamplesError
from .exact import solve, to_fraction


def _divisors(s):
    small = [d for d in range(1, int(s**0.5) + 1) if s % d == 0]
    return sorted(set(small + [s // d for d in small]))


@dataclass(frozen=True)
class PeriodicFunction:
    """A function ``Z -> Q`` given by its values on one period."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("a periodic function needs at least one value")
        object.__setattr__(self, "values", tuple(to_fraction(v) for v in self.values))

    @property
    def period(self):
        return len(self.values)

    def __call__(self, k):
        return self.values[k % len(self.values)]

    @classmethod
    def constant(cls, c):
        return cls((c,))

    def reduced(self):
        d = minimal_period(self)
        return self if d == self.period else PeriodicFunction(self.values[:d])

    def is_constant(self):
        return minimal_period(self) == 1

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def resample(self, s):
        """Same function listed over ``s`` values; ``s`` must be a multiple of the period."""
        if s % self.period:
            raise ValueError(f"{s} is not a multiple of period {self.period}")
        return PeriodicFunction(tuple(self(j) for j in range(s)))

    def __add__(self, other):
        s = lcm(self.period, other.period)
        return PeriodicFunction(tuple(self(j) + other(j) for j in range(s))).reduced()

    def __mul__(self, other):
        s = lcm(self.period, other.period)
        return PeriodicFunction(tuple(self(j) * other(j) for j in range(s))).reduced()

    def __neg__(self):
        return PeriodicFunction(tuple(-v for v in self.values))

    def __sub__(self, other):
        return self + (-other)


def minimal_period(f):
    """Least divisor ``d`` of ``f.period`` such that ``f`` repeats every ``d`` steps."""
    s = f.period
    vals = f.values
    for d in _divisors(s):
        if all(vals[j] == vals[(j + d) % s] for j in range(s)):
            return d
    return s  # unreachable: d = s always works


_ZERO = PeriodicFunction((0,))


@dataclass(frozen=True)
class QuasiPolynomial:
    coefficients: tuple

    def __post_init__(self):
        coeffs = []
        for c in self.coefficients:
            if not isinstance(c, PeriodicFunction):
                c = PeriodicFunction.constant(c)
            coeffs.append(c.reduced())
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs or (len(coeffs) == 1 and coeffs[0].is_zero()):
            coeffs = [_ZERO]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def polynomial(cls, coeffs):
        """Build from plain rational coefficients, constant term first."""
        return cls(tuple(PeriodicFunction.constant(c) for c in coeffs))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, k):
        total = Fraction(0)
        power = Fraction(1)
        for c in self.coefficients:
            total += c(k) * power
            power *= k
        return total

    def __add__(self, other):
        return qp_add(self, other)

    def __sub__(self, other):
        return qp_add(self, -other)

    def __mul__(self, other):
        return qp_mul(self, other)

    def __neg__(self):
        return QuasiPolynomial(tuple(-c for c in self.coefficients))

    def is_polynomial(self):
        return all(c.period == 1 for c in self.coefficients)

    def period_sequence(self):
        return period_sequence(self)

    def to_json(self):
        return {
            "degree": self.degree,
            "coefficients": [
                {"period": c.period, "values": [format_rational(v) for v in c.values]}
                for c in self.coefficients
            ],
        }

    @classmethod
    def from_json(cls, data):
        try:
            coeffs = []
            for entry in data["coefficients"]:
                vals = tuple(to_fraction(v) for v in entry["values"])
                if int(entry.get("period", len(vals))) != len(vals):
                    raise ValueError("period does not match the number of values")
                coeffs.append(PeriodicFunction(vals))
            degree = int(data.get("degree", len(coeffs) - 1))
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed quasi-polynomial JSON: {exc}") from exc
        if degree != len(coeffs) - 1:
            raise ValueError("degree does not match the number of coefficients")
        return cls(tuple(coeffs))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            if c.period == 1:
                coef = str(c.values[0])
            else:
                coef = "[" + ", ".join(str(v) for v in c.values) + "]"
            terms.append(coef if i == 0 else f"{coef}*t" + (f"^{i}" if i > 1 else ""))
        return " + ".join(reversed(terms)) or "0"


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def qp_add(a, b):
    n = max(len(a.coefficients), len(b.coefficients))
    ca = a.coefficients + (_ZERO,) * (n - len(a.coefficients))
    cb = b.coefficients + (_ZERO,) * (n - len(b.coefficients))
    return QuasiPolynomial(tuple(x + y for x, y in zip(ca, cb)))


def qp_mul(a, b):
    out = [_ZERO] * (len(a.coefficients) + len(b.coefficients) - 1)
    for i, x in enumerate(a.coefficients):
        for j, y in enumerate(b.coefficients):
            out[i + j] = out[i + j] + x * y
    return QuasiPolynomial(tuple(out))


def qp_equivalent(a, b):
    """True iff ``a - b`` is an honest polynomial."""
    return (a - b).is_polynomial()


def period_sequence(a):
    return tuple(c.period for c in a.coefficients)


def interpolate(samples, degree, period):
    """Recover the quasi-polynomial of degree <= ``degree`` whose coefficients
    have period dividing ``period`` from exact samples ``(k, value)``.

    For each residue class the first ``degree + 1`` distinct abscissas fix
    the coefficient values; every remaining sample is then checked.
    """
    by_residue = {r: {} for r in range(period)}
    for k, v in samples:
        v = to_fraction(v)
        seen = by_residue[k % period]
        if k in seen and seen[k] != v:
            raise InconsistentSamplesError(f"two different values given at k={k}")
        seen[k] = v
    table = [[Fraction(0)] * period for _ in range(degree + 1)]
    for r in range(period):
        pts = sorted(by_residue[r].items())
        if len(pts) < degree + 1:
            raise InsufficientSamplesError(
                f"residue class {r} mod {period} has {len(pts)} samples, needs {degree + 1}"
            )
        basis = pts[: degree + 1]
        mat = [[Fraction(k) ** i for i in range(degree + 1)] for k, _ in basis]
        sol = solve(mat, [v for _, v in basis])
        for i in range(degree + 1):
            table[i][r] = sol[i]
    qp = QuasiPolynomial(tuple(PeriodicFunction(tuple(row)) for row in table))
    for k, v in samples:
        if qp(k) != to_fraction(v):
            raise InconsistentSamplesError(
                f"sample at k={k} is {v} but the interpolant gives {qp(k)}"
            )
    return qp

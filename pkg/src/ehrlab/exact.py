"""Exact rational linear algebra and a small two-phase simplex solver.

Everything here works on ``fractions.Fraction`` (or ``int``) entries.  The
matrices involved in polytope work are tiny, so dense row reduction is fine.
"""

from fractions import Fraction
from math import gcd


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rref(rows, ncols):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of ``{x : rows @ x = 0}`` as a list of vectors."""
    m, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve the square system ``a @ x = b``; raises ``ValueError`` if singular."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [m[i][n] for i in range(n)]


def det(a):
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def primitive_integer(vec):
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = [Fraction(v) for v in vec]
    lcm_den = 1
    for v in fr:
        lcm_den = lcm_den * v.denominator // gcd(lcm_den, v.denominator)
    ints = [int(v * lcm_den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    return [v // g for v in ints]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# --- linear programming ---------------------------------------------------

class LPResult:
    __slots__ = ("status", "value", "x")

    def __init__(self, status, value=None, x=None):
        self.status = status
        self.value = value
        self.x = x

    def __repr__(self):
        return f"LPResult({self.status!r}, value={self.value})"


def _simplex(tab, basis, ncols, cost_row):
    # Bland's rule keeps this cycle-free; exact entries mean no tolerances.
    m = len(tab)
    while True:
        enter = next((j for j in range(ncols) if cost_row[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, cost_row, best[1], enter)
        basis[best[1]] = enter


def _pivot(tab, cost_row, r, c):
    inv = 1 / tab[r][c]
    tab[r] = [v * inv for v in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
    if cost_row[c] != 0:
        f = cost_row[c]
        cost_row[:] = [a - f * b for a, b in zip(cost_row, tab[r])]


def linprog(c, a_ub=(), b_ub=(), a_eq=(), b_eq=(), free=None):
    """Maximize ``c @ x`` subject to ``a_ub @ x <= b_ub`` and ``a_eq @ x == b_eq``.

    Variables are nonnegative unless their index is in ``free``.  Returns an
    ``LPResult`` with status ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    """
    nvar = len(c)
    free = set(free or ())
    # column layout: x+ (nvar), x- for free vars, slacks (len(a_ub))
    free_idx = sorted(free)
    neg_col = {j: nvar + t for t, j in enumerate(free_idx)}
    nslack = len(a_ub)
    nstruct = nvar + len(free_idx) + nslack

    def expand(row):
        out = [Fraction(v) for v in row] + [Fraction(0)] * (len(free_idx) + nslack)
        for j, col in neg_col.items():
            out[col] = -Fraction(row[j])
        return out

    rows, rhs = [], []
    for s, (row, b) in enumerate(zip(a_ub, b_ub)):
        r = expand(row)
        r[nvar + len(free_idx) + s] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(b))
    for row, b in zip(a_eq, b_eq):
        rows.append(expand(row))
        rhs.append(Fraction(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    ncols = nstruct + m
    tab = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(rows[i] + art + [rhs[i]])
    basis = [nstruct + i for i in range(m)]

    # phase 1: minimise the sum of artificials
    cost = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        cost = [a - b for a, b in zip(cost, tab[i])]
    for i in range(m):
        cost[nstruct + i] = Fraction(0)
    _simplex(tab, basis, ncols, cost)
    if cost[-1] != 0:
        return LPResult("infeasible")

    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nstruct:
            col = next((j for j in range(nstruct) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, cost, i, col)
                basis[i] = col
    keep = [i for i in range(m) if basis[i] < nstruct]
    tab = [tab[i][:nstruct] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    obj = [Fraction(0)] * (nstruct + 1)
    full_c = expand(list(c))
    for j in range(nstruct):
        obj[j] = -full_c[j]
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [a - f * b for a, b in zip(obj, tab[i])]
    status = _simplex(tab, basis, nstruct, obj)
    if status == "unbounded":
        return LPResult("unbounded")
    sol = [Fraction(0)] * nstruct
    for i, bcol in enumerate(basis):
        sol[bcol] = tab[i][-1]
    x = sol[:nvar]
    for j, col in neg_col.items():
        x[j] -= sol[col]
    return LPResult("optimal", obj[-1], x)


def in_convex_hull(point, points):
    """Exact test whether ``point`` is a convex combination of ``points``."""
    if not points:
        return False
    n = len(point)
    a_eq = [[p[d] for p in points] for d in range(n)]
    a_eq.append([1] * len(points))
    b_eq = list(point) + [1]
    res = linprog([0] * len(points), a_eq=a_eq, b_eq=b_eq)
    return res.status == "optimal"

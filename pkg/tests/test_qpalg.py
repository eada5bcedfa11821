from fractions import Fraction as F
from math import lcm

import pytest
from hypothesis import given, strategies as st

from ehrlab.errors import InconsistentSamplesError, InsufficientSamplesError
from ehrlab.qpalg import (
    PeriodicFunction,
    QuasiPolynomial,
    interpolate,
    minimal_period,
    period_sequence,
    qp_add,
    qp_equivalent,
    qp_mul,
)

from oracles import segment_count

QP = QuasiPolynomial
PF = PeriodicFunction


def segment_qp(p):
    # k // p + 1 = k/p + (1 - (k mod p)/p)
    return QP((PF(tuple(1 - F(r, p) for r in range(p))), F(1, p)))


def t():
    return QP.polynomial([0, 1])


@pytest.mark.parametrize(
    "values, expected",
    [((1, F(1, 2), 1, F(1, 2)), 2), ((5, 5, 5), 1), ((1, 2, 3), 3), ((0, 1, 0, 0, 1, 0), 3)],
)
def test_minimal_period(values, expected):
    assert minimal_period(PF(values)) == expected


def test_periodic_function_negative_arguments():
    f = PF((1, 2, 3))
    assert f(-1) == 3
    assert f(-3) == 1
    assert f(7) == 2


def test_segment_qp_matches_floor_formula():
    for p in range(1, 6):
        q = segment_qp(p)
        assert all(q(k) == segment_count(p, k) for k in range(0, 30))


def test_add_examples():
    assert qp_add(t(), QP.polynomial([1])) == QP.polynomial([1, 1])
    a = QP((PF((1, F(1, 2))), F(1, 2)))
    b = QP((PF((0, F(1, 2))), F(-1, 2)))
    s = qp_add(a, b)
    assert s == QP.polynomial([1])
    assert s.degree == 0
    total = qp_add(segment_qp(2), segment_qp(3))
    assert total(6) == segment_count(2, 6) + segment_count(3, 6) == 7


def test_mul_examples():
    two_t_plus_one = QP.polynomial([1, 2])
    assert qp_mul(two_t_plus_one, two_t_plus_one) == QP.polynomial([1, 4, 4])
    a = QP((PF((1, F(1, 2))), F(1, 2)))
    assert qp_mul(a, QP.polynomial([1])) == a
    sq = qp_mul(segment_qp(2), segment_qp(2))
    # square [-k/2, 0]^2 counted directly
    for k in range(1, 9):
        direct = sum(1 for x in range(-k, 1) for y in range(-k, 1) if 2 * x >= -k and 2 * y >= -k)
        assert sq(k) == direct


def test_equivalence_examples():
    assert qp_equivalent(t(), t() + QP.polynomial([7]))
    periodic = QP((0, PF((1, F(1, 2)))))
    assert not qp_equivalent(periodic, t())


def test_period_sequence_examples():
    assert period_sequence(segment_qp(2)) == (2, 1)
    assert period_sequence(QP.polynomial([1, 2, 1])) == (1, 1, 1)


def test_zero_canonical_form():
    z = QP((PF((0, 0)), 0, PF((0, 0, 0))))
    assert z.degree == 0
    assert z.coefficients == (PF((0,)),)
    assert z == QP.polynomial([0])


def test_interpolate_examples():
    got = interpolate([(1, 1), (2, 2), (3, 2), (4, 3)], 1, 2)
    assert got == QP((PF((1, F(1, 2))), F(1, 2)))
    assert interpolate([(1, 1), (2, 1), (3, 1)], 0, 1) == QP.polynomial([1])
    assert interpolate([(1, 4), (2, 9), (3, 16)], 2, 1) == QP.polynomial([1, 2, 1])


def test_interpolate_insufficient_names_residue():
    with pytest.raises(InsufficientSamplesError, match="residue class 1"):
        interpolate([(2, 1), (4, 2), (1, 1)], 1, 2)


def test_interpolate_rejects_inconsistent_extra_sample():
    with pytest.raises(InconsistentSamplesError):
        interpolate([(1, 1), (2, 2), (3, 4)], 1, 1)


def test_json_round_trip():
    q = QP((PF((1, F(3, 4))), 1, F(1, 4)))
    data = q.to_json()
    assert data == {
        "degree": 2,
        "coefficients": [
            {"period": 2, "values": ["1/1", "3/4"]},
            {"period": 1, "values": ["1/1"]},
            {"period": 1, "values": ["1/4"]},
        ],
    }
    assert QP.from_json(data) == q
    assert QP.from_json({"degree": 0, "coefficients": [{"period": 1, "values": ["5"]}]}) == QP.polynomial([5])


def test_json_rejects_bad_period():
    with pytest.raises(ValueError):
        QP.from_json({"degree": 0, "coefficients": [{"period": 2, "values": ["1/1"]}]})


# --- properties -------------------------------------------------------------

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def periodic(draw, max_period=4):
    s = draw(st.integers(1, max_period))
    return PF(tuple(draw(st.lists(rationals, min_size=s, max_size=s))))


@st.composite
def quasi_polys(draw, max_degree=3, max_period=4):
    d = draw(st.integers(0, max_degree))
    return QP(tuple(draw(periodic(max_period)) for _ in range(d + 1)))


@st.composite
def polys(draw, max_degree=3):
    d = draw(st.integers(0, max_degree))
    return QP.polynomial(draw(st.lists(rationals, min_size=d + 1, max_size=d + 1)))


@given(periodic(max_period=12))
def test_minimal_period_divides_period(f):
    d = minimal_period(f)
    assert f.period % d == 0
    assert all(f(j) == f(j + d) for j in range(f.period))


@given(quasi_polys(), quasi_polys())
def test_add_and_mul_are_pointwise(a, b):
    for k in range(-10, 11):
        assert qp_add(a, b)(k) == a(k) + b(k)
        assert qp_mul(a, b)(k) == a(k) * b(k)


@given(quasi_polys(), quasi_polys())
def test_sum_periods_divide_lcm(a, b):
    s = qp_add(a, b)
    bound = lcm(*(c.period for c in a.coefficients + b.coefficients))
    assert all(bound % c.period == 0 for c in s.coefficients)


@given(quasi_polys(), quasi_polys(), quasi_polys(), polys())
def test_equivalence_is_an_equivalence_relation(a, b, c, f):
    assert qp_equivalent(a, a)
    assert qp_equivalent(a, b) == qp_equivalent(b, a)
    if qp_equivalent(a, b) and qp_equivalent(b, c):
        assert qp_equivalent(a, c)
    assert qp_equivalent(a + f, b) == qp_equivalent(a, b)
    assert qp_equivalent(a, b + f) == qp_equivalent(a, b)


@given(quasi_polys(), polys(), polys())
def test_substitution_by_polynomials(q, g, f):
    r = q + g  # r is equivalent to q
    assert qp_equivalent(q, r)
    assert qp_equivalent(qp_mul(f, q), qp_mul(f, r))


@given(quasi_polys(max_degree=3, max_period=4), st.integers(1, 3))
def test_interpolate_inverts_sampling(q, mult):
    s = lcm(*(c.period for c in q.coefficients)) * mult
    n = q.degree
    samples = [(k, q(k)) for k in range(1, s * (n + 1) + 1)]
    assert interpolate(samples, n, s) == q


@given(quasi_polys(), st.integers(1, 3))
def test_period_sequence_ignores_redundant_representation(q, m):
    padded = QP(tuple(c.resample(c.period * m) for c in q.coefficients))
    assert padded == q
    assert period_sequence(padded) == period_sequence(q)

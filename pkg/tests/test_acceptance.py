"""Acceptance criteria, one test per criterion, all at zero tolerance.

Each test is tagged with a ``criterion`` label; ``conftest.py`` prints one
PASS/FAIL line per label at the end of the run.
"""

import random
from fractions import Fraction as F
from itertools import combinations

from ehrlab.constructions import (
    ConstructionParams,
    CyclicConfig,
    build_Qi,
    build_qstar,
    choose_shifts,
    cyclic,
    cyclic_volume,
    designated_facets,
    left_facet,
    left_summand,
    middle,
    middle_single,
    pentagon,
    qstar_pieces,
    right_facet,
    right_summand,
    segment,
)
from ehrlab.latcount import count, count_brute, ehrhart, leading_volume
from ehrlab.polygeom import (
    PolytopalBall,
    denominator,
    interiors_disjoint,
    is_facet,
    make_polytope,
    product,
    pyr_power,
    pyramid,
    translate,
)
from ehrlab.qpalg import QuasiPolynomial, period_sequence, qp_equivalent

from oracles import segment_count, shoelace, vandermonde_simplex_volume


def criterion(label):
    def tag(fn):
        fn.criterion = label
        return fn

    return tag


def report(label, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} criterion {label} {detail}".rstrip())
    assert ok, detail


@criterion("1: pentagon/segment complement, p = 1..5")
def test_criterion_1_pentagon_complement():
    bad = []
    for p in range(1, 6):
        seg = ehrhart(segment(p)).qp
        # independent check of the segment side against the closed form
        assert all(seg(k) == segment_count(p, k) for k in range(1, 3 * p + 1))
        if not qp_equivalent(ehrhart(pentagon(p)).qp, -seg):
            bad.append(p)
    report("1", not bad, f"failing p: {bad}" if bad else "")


@criterion("2: complement survives pyramids, p in {2, 3}, i = 0..2")
def test_criterion_2_pyramid_complement():
    bad = []
    for p in (2, 3):
        for i in range(3):
            a = ehrhart(pyr_power(pentagon(p), i)).qp
            b = ehrhart(pyr_power(segment(p), i)).qp
            if not qp_equivalent(a, -b):
                bad.append((p, i))
    report("2", not bad, f"failing (p, i): {bad}" if bad else "")


@criterion("3: period sequence of Pyr^i(segment) is (p, 1, ..., 1), p = 1..4, i = 0..3")
def test_criterion_3_pyramid_periods():
    bad = []
    for p in range(1, 5):
        for i in range(4):
            got = period_sequence(ehrhart(pyr_power(segment(p), i)).qp)
            if got != (p,) + (1,) * (i + 1):
                bad.append((p, i, got))
    report("3", not bad, f"failing: {bad}" if bad else "")


@criterion("4: cyclic polytope recurrence and volumes, T = 0..3")
def test_criterion_4_cyclic_recurrence():
    config = CyclicConfig((0, 1, 2, 3))
    prev = ehrhart(cyclic(config, 0)).qp
    assert prev == QuasiPolynomial.polynomial([1])
    vols = []
    ok = True
    for i in range(1, 4):
        res = ehrhart(cyclic(config, i))
        vol = cyclic_volume(config, i)
        vols.append(vol)
        ok &= res.qp - prev == QuasiPolynomial.polynomial([0] * i + [vol])
        ok &= leading_volume(cyclic(config, i), result=res) == vol
        prev = res.qp
    # independent volumes: segment length, shoelace area of the moment-curve
    # polygon (its points are in convex position in order of t), and the
    # Vandermonde product over 3!
    T = config.T
    oracle = [T[-1] - T[0], shoelace([(t, t * t) for t in T]), vandermonde_simplex_volume(T)]
    ok &= vols == oracle == [3, 4, 2]
    report("4", ok, f"volumes {vols}")


@criterion("5: Q_i has period p at position i, n = 3, i in {1, 2}, p in {2, 3}")
def test_criterion_5_qi_periods():
    bad = []
    for i in (1, 2):
        for p in (2, 3):
            want = [1, 1, 1, 1]
            want[i] = p
            got = period_sequence(ehrhart(build_Qi(3, i, p)).qp)
            if got != tuple(want):
                bad.append((i, p, got))
    report("5", not bad, f"failing: {bad}" if bad else "")


QSTAR_CASES = ((2, 3), (2, 3, 2), (1, 1, 1))


def _qstar(periods):
    params = ConstructionParams(len(periods), periods)
    return params.with_shifts(choose_shifts(params))


@criterion("6: Q_* realises the prescribed period sequence")
def test_criterion_6_qstar_periods():
    bad = []
    for periods in QSTAR_CASES:
        params = _qstar(periods)
        got = period_sequence(ehrhart(build_qstar(params)).qp)
        if got != periods + (1,):
            bad.append((periods, got))
    report("6", not bad, f"failing: {bad}" if bad else "")


_UNIT = make_polytope(1, [(0,), (1,)])
_TRIANGLE = make_polytope(2, [(0, 0), (1, 0), (0, 1)])


def _random_instance(rng):
    blocks = [
        lambda: segment(rng.randint(1, 3)),
        lambda: _UNIT,
        lambda: translate(segment(rng.randint(1, 2)), (F(rng.randint(-2, 2), 2),)),
        lambda: pentagon(rng.randint(1, 2)),
        lambda: _TRIANGLE,
    ]
    P = rng.choice(blocks)()
    while P.ambient_dim < 3 and rng.random() < 0.7:
        if rng.random() < 0.5:
            P = pyramid(P)
        else:
            Q = segment(1) if P.ambient_dim == 2 else rng.choice([_UNIT, segment(2)])
            P = product(P, Q)
    if rng.random() < 0.5:
        P = translate(P, tuple(rng.randint(-2, 2) for _ in range(P.ambient_dim)))
    return P


@criterion("7: recovered quasi-polynomials predict held-out dilations")
def test_criterion_7_held_out_dilations():
    rng = random.Random(20240601)
    bad = []
    for _ in range(10):
        P = _random_instance(rng)
        res = ehrhart(P)
        last = max(k for k, _ in res.validation_points)
        for k in (last + 1, last + 2):
            if res.qp(k) != count(P, k):
                bad.append((P.vertices, k))
    report("7", not bad, f"failing: {bad}" if bad else "")


@criterion("8: product rule on random pairs, k <= 5")
def test_criterion_8_product_rule():
    rng = random.Random(7)
    bad = []
    for _ in range(5):
        P = _random_instance(rng)
        while P.ambient_dim > 2:
            P = _random_instance(rng)
        Q = rng.choice([segment(rng.randint(1, 3)), _UNIT, pentagon(2), _TRIANGLE])
        PQ = product(P, Q)
        for k in range(1, 6):
            if count(PQ, k) != count(P, k) * count(Q, k):
                bad.append((P.vertices, Q.vertices, k))
    report("8", not bad, f"failing: {bad}" if bad else "")


def _gluing_pairs():
    n, i, p = 3, 1, 2
    yield left_summand(n, i, p), middle_single(n, i, p), left_facet(n, i)
    yield middle_single(n, i, p), right_summand(n, i, p), right_facet(n, i, p)
    q = 3  # pentagon(2) has base vertices (+-3, 0)
    yield pentagon(2), make_polytope(2, [(-q, 0), (q, 0), (-q, -1), (q, -1)]), make_polytope(2, [(-q, 0), (q, 0)])


@criterion("9: counts of a glued ball add up along the shared facet, k <= 5")
def test_criterion_9_gluing():
    bad = []
    for P, Q, facet in _gluing_pairs():
        assert is_facet(facet, P) and is_facet(facet, Q)
        ball = PolytopalBall(P.ambient_dim, (P, Q))
        for k in range(1, 6):
            direct = count_brute(ball, k)
            if not direct == count(ball, k) == count(P, k) + count(Q, k) - count_brute(facet, k):
                bad.append((P.ambient_dim, k))
    report("9", not bad, f"failing: {bad}" if bad else "")


def _check_pieces(named, facets, shifts):
    problems = []
    pieces = dict(named)
    for name, F_ in facets:
        if denominator(F_) != 1:
            problems.append(f"{name} not integral")
    for name, piece in named:
        if name.startswith(("M", "Q'")) and denominator(piece) != 1:
            problems.append(f"{name} not integral")
    if "M" in pieces:
        for name, F_ in facets:
            if not is_facet(F_, pieces["M"]):
                problems.append(f"{name} not a facet of M")
    for name, piece in named:
        kind, _, idx = name.partition("_")
        idx = int(idx) if idx.isdigit() else None
        if kind == "Q" and idx == 0:
            ok = all(v[0] <= -shifts[0] for v in piece.vertices)
        elif kind == "L":
            ok = all(v[idx] <= -shifts[idx] for v in piece.vertices)
        elif kind == "R":
            ok = all(v[idx] >= shifts[idx] for v in piece.vertices)
        else:
            ok = True
        if not ok:
            problems.append(f"{name} leaves its halfspace")
    for (a, P), (b, Q) in combinations(named, 2):
        if not interiors_disjoint(P, Q):
            problems.append(f"{a} and {b} overlap")
    return problems


@criterion("10: structural checks on every Q_i and Q_* build")
def test_criterion_10_structure():
    problems = []
    for i in (1, 2):
        for p in (2, 3):
            n = 3
            named = [
                ("L_%d" % i, left_summand(n, i, p)),
                ("M_%d" % i, middle_single(n, i, p)),
                ("R_%d" % i, right_summand(n, i, p)),
            ]
            facets = [(f"L'_{i}", left_facet(n, i)), (f"R'_{i}", right_facet(n, i, p))]
            shifts = [1] * n
            assert build_Qi(n, i, p).pieces == tuple(P for _, P in named)
            probs = _check_pieces(named, facets, shifts)
            for name, F_ in facets:
                if not is_facet(F_, named[1][1]):
                    probs.append(f"{name} not a facet of M_{i}")
            problems += [f"Q_{i} p={p}: {msg}" for msg in probs]
    for periods in QSTAR_CASES:
        params = _qstar(periods)
        named = qstar_pieces(params)
        assert middle(params) == dict(named)["M"]
        probs = _check_pieces(named, designated_facets(params), params.shifts)
        problems += [f"Q_* {periods}: {msg}" for msg in probs]
    report("10", not problems, "; ".join(problems))

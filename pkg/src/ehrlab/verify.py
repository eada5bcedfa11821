"""Verification suites that check the period-sequence theorems on concrete grids.

Each suite yields cases of the form ``{"params", "expected", "actual",
"pass", "wall_ms"}``; ``expected`` carries a ``source`` label saying where
the expected value comes from.
"""

import time
from dataclasses import dataclass, field

from .constructions import (
    ConstructionParams,
    CyclicConfig,
    build_Qi,
    build_qstar,
    choose_shifts,
    cyclic,
    cyclic_volume,
    pentagon,
    segment,
)
from .latcount import ehrhart, leading_volume
from .polygeom import pyr_power
from .qpalg import QuasiPolynomial, format_rational, period_sequence, qp_equivalent

SUITES = ("liu", "pentagon", "pyramids", "bsw", "qi", "qstar")

DEFAULTS = {
    "liu": {"T": (0, 1, 2, 3), "max_i": 3},
    "pentagon": {"p": (1, 2, 3, 4, 5)},
    "pyramids": {"p": (2, 3), "max_i": 2},
    "bsw": {"p": (1, 2, 3, 4), "max_i": 3},
    "qi": {"dim": 3, "i": (1, 2), "p": (2, 3)},
    "qstar": {"cases": ((2, 3), (2, 3, 2), (1, 1, 1))},
}


@dataclass
class VerifyReport:
    suite: str
    cases: list = field(default_factory=list)

    @property
    def all_pass(self):
        return all(c["pass"] for c in self.cases)

    def to_json(self):
        return {"suite": self.suite, "cases": self.cases, "all_pass": self.all_pass}


def _timed(params, fn):
    start = time.perf_counter()
    expected, actual, ok = fn()
    return {
        "params": params,
        "expected": expected,
        "actual": actual,
        "pass": bool(ok),
        "wall_ms": int(round(1000 * (time.perf_counter() - start))),
    }


def liu_cases(T=(0, 1, 2, 3), max_i=3, jobs=1):
    config = CyclicConfig(T)
    if not 1 <= max_i <= config.n:
        raise ValueError(f"max_i must lie in 1..{config.n} for T={list(T)}")
    prev = ehrhart(cyclic(config, 0), jobs).qp
    for i in range(1, max_i + 1):
        def run(i=i):
            nonlocal prev
            vol = cyclic_volume(config, i)
            res = ehrhart(cyclic(config, i), jobs)
            diff = res.qp - prev
            monomial = QuasiPolynomial.polynomial([0] * i + [vol])
            lead = leading_volume(cyclic(config, i), result=res)
            prev = res.qp
            expected = {
                "difference": monomial.to_json(),
                "volume": format_rational(vol),
                "source": "cyclic polytope Ehrhart recurrence; volume from triangulation",
            }
            actual = {"difference": diff.to_json(), "leading_coefficient": format_rational(lead)}
            return expected, actual, diff == monomial and lead == vol

        yield _timed({"suite": "liu", "T": list(T), "i": i}, run)


def pentagon_cases(ps=(1, 2, 3, 4, 5), jobs=1):
    for p in ps:
        def run(p=p):
            a = ehrhart(pentagon(p), jobs).qp
            b = ehrhart(segment(p), jobs).qp
            ok = qp_equivalent(a, -b)
            expected = {"equivalent": True, "source": "pentagon/segment complement"}
            actual = {"equivalent": ok, "sum": (a + b).to_json()}
            return expected, actual, ok

        yield _timed({"suite": "pentagon", "p": p}, run)


def pyramid_cases(ps=(2, 3), max_i=2, jobs=1):
    for p in ps:
        for i in range(max_i + 1):
            def run(p=p, i=i):
                a = ehrhart(pyr_power(pentagon(p), i), jobs).qp
                b = ehrhart(pyr_power(segment(p), i), jobs).qp
                ok = qp_equivalent(a, -b)
                expected = {"equivalent": True, "source": "complement preserved by pyramids"}
                actual = {"equivalent": ok, "sum": (a + b).to_json()}
                return expected, actual, ok

            yield _timed({"suite": "pyramids", "p": p, "i": i}, run)


def bsw_cases(ps=(1, 2, 3, 4), max_i=3, jobs=1):
    for p in ps:
        for i in range(max_i + 1):
            def run(p=p, i=i):
                want = [p] + [1] * (i + 1)
                got = list(period_sequence(ehrhart(pyr_power(segment(p), i), jobs).qp))
                return {"periods": want, "source": "period sequence of pyramids over a segment"}, {"periods": got}, got == want

            yield _timed({"suite": "bsw", "p": p, "i": i}, run)


def qi_cases(dim=3, indices=(1, 2), ps=(2, 3), jobs=1):
    for i in indices:
        for p in ps:
            def run(i=i, p=p):
                want = [1] * (dim + 1)
                want[i] = p
                got = list(period_sequence(ehrhart(build_Qi(dim, i, p), jobs).qp))
                return {"periods": want, "source": "single-period ball construction"}, {"periods": got}, got == want

            yield _timed({"suite": "qi", "n": dim, "i": i, "p": p}, run)


def qstar_cases(cases=((2, 3), (2, 3, 2), (1, 1, 1)), T=None, shifts=None, jobs=1):
    for periods in cases:
        periods = tuple(periods)
        n = len(periods)

        def run(periods=periods, n=n):
            config = CyclicConfig(T) if T is not None else None
            params = ConstructionParams(n, periods, config, shifts)
            if params.shifts is None:
                params = params.with_shifts(choose_shifts(params))
            ball = build_qstar(params)
            got = list(period_sequence(ehrhart(ball, jobs).qp))
            want = list(periods) + [1]
            actual = {"periods": got, "shifts": list(params.shifts)}
            return {"periods": want, "source": "glued ball with prescribed periods"}, actual, got == want

        yield _timed({"suite": "qstar", "n": n, "periods": list(periods), "T": list(T) if T else None}, run)


def run_suite(name, jobs=1, **options):
    """Run one suite (or ``"all"``) and return a ``VerifyReport``."""
    report = VerifyReport(name)
    names = SUITES if name == "all" else (name,)
    for suite in names:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}")
        opts = dict(DEFAULTS[suite])
        if name != "all":
            opts.update({k: v for k, v in options.items() if v is not None and (k in opts or k in _EXTRA.get(suite, ()))})
        report.cases.extend(_RUNNERS[suite](opts, jobs))
    return report


_EXTRA = {"qstar": ("T", "shifts")}

_RUNNERS = {
    "liu": lambda o, j: liu_cases(o["T"], o["max_i"], j),
    "pentagon": lambda o, j: pentagon_cases(o["p"], j),
    "pyramids": lambda o, j: pyramid_cases(o["p"], o["max_i"], j),
    "bsw": lambda o, j: bsw_cases(o["p"], o["max_i"], j),
    "qi": lambda o, j: qi_cases(o["dim"], o["i"], o["p"], j),
    "qstar": lambda o, j: qstar_cases(o["cases"], o.get("T"), o.get("shifts"), j),
}

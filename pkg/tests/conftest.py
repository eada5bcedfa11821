import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

import pytest

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label is not None and (rep.when == "call" or rep.failed):
        _CRITERIA[label] = _CRITERIA.get(label, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split(":")[0])):
        terminalreporter.write_line(f"{'PASS' if _CRITERIA[label] else 'FAIL'} criterion {label}")

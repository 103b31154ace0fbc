from __future__ import annotations

import os
import warnings
from collections import OrderedDict

import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("default", deadline=None, derandomize=True, max_examples=40)
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=400)
hypothesis.settings.load_profile(os.environ.get("CHEBKIT_HYPOTHESIS_PROFILE", "default"))

np.seterr(all="warn", under="ignore")

# criterion number -> (title, list of (part, passed, detail))
CRITERIA: "OrderedDict[int, tuple[str, list]]" = OrderedDict()


def record(number: int, title: str, passed: bool, detail: str = "", part: str = "") -> bool:
    _, parts = CRITERIA.setdefault(number, (title, []))
    parts.append((part, bool(passed), detail))
    status = "PASS" if passed else "FAIL"
    label = f"{title} [{part}]" if part else title
    print(f"criterion {number:2d} {status} {label}: {detail}")
    return bool(passed)


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, parts = CRITERIA[number]
        ok = all(p for _, p, _ in parts)
        failed = [name or detail for name, p, detail in parts if not p]
        tail = "" if ok else "  failing: " + "; ".join(failed)
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'} {title}{tail}")


@pytest.fixture(autouse=True)
def _quiet_solver_warnings():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", category=UserWarning, module="cvxpy")
        yield

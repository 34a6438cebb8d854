import random

import pytest

from dets2.field import FieldSpec, Q

GF = FieldSpec.gf(32003)


@pytest.fixture
def rng():
    return random.Random(20261019)


@pytest.fixture(params=[Q, GF], ids=["Q", "GF32003"])
def field(request):
    return request.param


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {line}")

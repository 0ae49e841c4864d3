import numpy as np
import pytest

from newsflow.model import ModelParams, ParamSchedule

CASE1 = ModelParams(p_spawn=0.9, p_like0=0.05, p_repost0=0.001)
CASE2 = ModelParams(p_spawn=0.9, p_like0=0.05, p_repost0=0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def case1():
    return ParamSchedule.constant(CASE1)


@pytest.fixture
def case2():
    return ParamSchedule.constant(CASE2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from randvec import Interval  # noqa: E402

UNIT = Interval(0.0, 1.0)

_CUBIC = np.random.default_rng(2024).uniform(-1.0, 1.0, 4)


def cubic(x):
    c = _CUBIC
    return c[0] + x * (c[1] + x * (c[2] + x * c[3]))


# the functions every corpus-wide check runs over
CORPUS = {
    "identity": lambda x: x,
    "parabola": lambda x: x * (1.0 - x),
    "sine": lambda x: math.sin(math.pi * x),
    "cubic": cubic,
}


@pytest.fixture
def unit():
    return UNIT


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])

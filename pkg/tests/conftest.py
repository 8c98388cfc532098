import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ks2d import GridSpec, forward_transform  # noqa: E402

SEED = 20231227


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_real_spectrum(rng, n):
    return forward_transform(rng.standard_normal((n, n)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)

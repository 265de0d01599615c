import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

from spineq.distributions import GpdParams, ParetoParams, gpd_quantile, pareto_quantile  # noqa: E402
from spineq.tailfit import Sample  # noqa: E402


def pareto_sample(gamma, n, seed):
    u = np.random.default_rng(seed).random(n)
    return Sample.from_values(pareto_quantile(u, ParetoParams(gamma)))


def gpd_sample(sigma, gamma, n, seed, shift=1.0):
    u = np.random.default_rng(seed).random(n)
    return Sample.from_values(shift + gpd_quantile(u, GpdParams(sigma, gamma)))


@pytest.fixture
def data_dir():
    return Path(__file__).parent / "data"


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def record_criterion(request):
    """Log one PASS/FAIL line per acceptance criterion; shown in the terminal summary."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[_ACCEPTANCE].append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

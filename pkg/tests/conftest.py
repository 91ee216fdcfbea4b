import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from osc3.config import FIGURES
from osc3.model import CouplingSchedule
from osc3.pipeline import Pipeline

settings.register_profile(
    "osc3", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("osc3")


def figure_pipeline(name, tmax=10.0):
    ini, fin = FIGURES[name]
    return Pipeline(CouplingSchedule.quench(ini, fin), tmax)


def quench_pipeline(ini, fin, tmax=10.0):
    return Pipeline(CouplingSchedule.quench(ini, fin), tmax)


@pytest.fixture(scope="session")
def pipes():
    return {name: figure_pipeline(name) for name in FIGURES}


def random_quench(rng, jitter=0.1):
    """One of the figure sets with every parameter scaled by U(1 - jitter, 1 + jitter)."""
    name = rng.choice(sorted(FIGURES))
    ini, fin = FIGURES[name]
    ini = tuple(v * rng.uniform(1 - jitter, 1 + jitter) for v in ini)
    fin = tuple(v * rng.uniform(1 - jitter, 1 + jitter) for v in fin)
    return ini, fin


def rel(a, b, floor=1e-300):
    return abs(a - b) / max(abs(a), abs(b), floor)


_CRITERIA: list[str] = []


def record_criterion(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)

from __future__ import annotations

import numpy as np
import pytest

from drlse.gp import KernelSpec, ObservationLog, fit
from drlse.grid import GridDomain

# Lines recorded by the acceptance tests, echoed at the end of the run.
_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    def record(criterion: int, name: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        _acceptance_lines.append(f"acceptance {criterion} [{name}]: {status}{suffix}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)


def random_gp(
    rng: np.random.Generator,
    n_design: int = 5,
    n_env: int = 4,
    n_obs: int = 6,
    signal_variance: float = 2.0,
    length_scale: float = 3.0,
    noise_variance: float = 0.1,
    mean_shift: float = 0.0,
):
    """Small random posterior used across the acquisition/oracle tests."""
    domain = GridDomain.from_ranges((-2.0, 2.0), (-2.0, 2.0), n_design, n_env)
    kernel = KernelSpec(signal_variance, length_scale, noise_variance)
    idx = rng.integers(0, domain.size, size=n_obs)
    values = rng.normal(mean_shift, np.sqrt(signal_variance), size=n_obs)
    return fit(domain, kernel, ObservationLog(idx, values))

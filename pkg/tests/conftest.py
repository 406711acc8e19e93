import warnings

import numpy as np
import pytest
from hypothesis import settings

from padenet.laurent import sample_function
from padenet.pipeline import FitConfig, fit
from padenet.testfunctions import EXFUN_BOUND, EXFUN_LOCATIONS, EXFUN_N, EXFUN_RHO, exfun

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_ACCEPTANCE = {}


def exfun_config(seed=0, location=1, tol=1e-14):
    return FitConfig(n=EXFUN_N, rho=EXFUN_RHO, n1_plus=EXFUN_BOUND, m1_plus=EXFUN_BOUND,
                     n1_minus=EXFUN_BOUND, m1_minus=EXFUN_BOUND, tol=tol, seed=seed,
                     z0=EXFUN_LOCATIONS[location])


@pytest.fixture(scope="session")
def exfun_samples():
    return sample_function(exfun, EXFUN_N, EXFUN_RHO)


@pytest.fixture(scope="session")
def exfun_model(exfun_samples):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fit(exfun_samples, exfun_config())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")

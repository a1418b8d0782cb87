"""Session-scoped experiment fixtures.

The heavy runs (decay, heat comparison, De Giorgi, kernel validation) are
executed once per session and shared between the acceptance criteria and the
harness tests.
"""

import pytest

from landaulab.harness import ExperimentConfig, run_experiment


def _run(name, tmp_path_factory, **kwargs):
    outdir = tmp_path_factory.mktemp(name)
    cfg = ExperimentConfig(experiment=name, outdir=str(outdir), **kwargs)
    return run_experiment(cfg), outdir


@pytest.fixture(scope="session")
def inequalities_report(tmp_path_factory):
    return _run("inequalities", tmp_path_factory)


@pytest.fixture(scope="session")
def kernel_report(tmp_path_factory):
    return _run("kernel_validate", tmp_path_factory)


@pytest.fixture(scope="session")
def rates_report(tmp_path_factory):
    return _run("rates", tmp_path_factory)


@pytest.fixture(scope="session")
def heat_report(tmp_path_factory):
    return _run("heat_comparison", tmp_path_factory)


@pytest.fixture(scope="session")
def degiorgi_report(tmp_path_factory):
    return _run("degiorgi", tmp_path_factory)

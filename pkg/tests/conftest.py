import hypothesis
import numpy as np
import pytest

from tokenequity.model_core import DEFAULT_PARAMS

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def base():
    return DEFAULT_PARAMS


@pytest.fixture
def base_crra():
    return DEFAULT_PARAMS.replace(sigma=2.0)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdicts(request):
    """Collects acceptance PASS/FAIL lines for the terminal summary."""
    return request.config.stash.setdefault(_VERDICTS, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

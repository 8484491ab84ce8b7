import pytest

_VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_VERDICTS] = {}


@pytest.fixture
def verdicts(request):
    """Criterion number -> (passed, summary); printed at the end of the run."""
    return request.config.stash[_VERDICTS]


def pytest_terminal_summary(terminalreporter, config):
    got = config.stash.get(_VERDICTS, {})
    if not got:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(got):
        ok, text = got[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")

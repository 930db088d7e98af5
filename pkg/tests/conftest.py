import pytest

from multipolar import core
from multipolar.generate import GeneratorConfig, InstanceGenerator

_acceptance_lines = {}


@pytest.fixture(autouse=True)
def _restore_sign_limit():
    # The CLI sets the process-wide sign budget; CliRunner runs in-process.
    saved = dict(core._limits)
    yield
    core._limits.clear()
    core._limits.update(saved)


@pytest.fixture
def gen(request):
    """A generator whose stream is tied to the test id, so each test is reproducible."""
    stream = sum(request.node.nodeid.encode()) % 10_000
    return InstanceGenerator(GeneratorConfig(seed=20240101), stream=stream)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; printed after the run."""

    def record(number, title, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        _acceptance_lines[number] = f"criterion {number:>2} {status}  {title}" + (f"  ({detail})" if detail else "")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_acceptance_lines):
            terminalreporter.write_line(_acceptance_lines[number])

from __future__ import annotations

import pytest

from sopra import build_scenario
from sopra.scenarios import bundled_document, load_bundled

# (criterion, passed, detail) records from tests using the `acceptance`
# fixture; replayed as one line each in the terminal summary.
_ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture()
def acceptance(request):
    """Records a named pass/fail verdict for an acceptance criterion.

    The criterion name is the test name with the test_ prefix stripped
    and underscores dashed. Returns the verdict so tests can write
    `assert acceptance(ok, detail)`. A test that errors out before
    recording still produces a FAIL line.
    """
    name = request.node.originalname.removeprefix("test_").replace("_", "-")
    recorded: list[bool] = []

    def record(ok: bool, detail: str = "") -> bool:
        recorded.append(bool(ok))
        _ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        return bool(ok)

    yield record
    if not recorded:
        _ACCEPTANCE_RESULTS.append((name, False, "test errored before the check"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE_RESULTS:
        line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def commuting():
    return load_bundled("commuting")


@pytest.fixture()
def commuting_doc():
    return bundled_document("commuting")


@pytest.fixture(scope="session")
def cascade():
    return load_bundled("cascade")


@pytest.fixture(scope="session")
def extensions_demo():
    return load_bundled("extensions_demo")

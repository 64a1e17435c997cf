import pytest

from fogcache.netmodel import build_nsfnet, desk_power_config, shortest_paths


@pytest.fixture(scope="session")
def nsfnet():
    return build_nsfnet()


@pytest.fixture(scope="session")
def nsfnet_paths(nsfnet):
    return shortest_paths(nsfnet)


@pytest.fixture(scope="session")
def desk():
    return desk_power_config()


_ACCEPTANCE_LINES = []


class _Criterion:
    """Collects named checks and records one pass/fail line on exit."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = {}
        self.notes = []

    def check(self, name, ok):
        self.checks[name] = bool(ok)
        return bool(ok)

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        failed = [name for name, ok in self.checks.items() if not ok]
        if exc is not None:
            failed.append(f"{exc_type.__name__}: {exc}")
        verdict = "FAIL" if failed else "PASS"
        line = f"criterion {self.number} {verdict}: {self.title}"
        details = (["failed: " + "; ".join(failed)] if failed else []) + self.notes
        if details:
            line += " [" + " | ".join(details) + "]"
        _ACCEPTANCE_LINES.append((self.number, line))
        print(line)
        if exc is None and failed:
            raise AssertionError(line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

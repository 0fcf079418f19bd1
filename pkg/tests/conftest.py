import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def criterion(request):
    """Record and print one acceptance line; returns the verdict unchanged."""
    def report(k, ok):
        line = "CRITERION %d: %s" % (k, "PASS" if ok else "FAIL")
        print(line)
        request.config._criterion_lines.append(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    lines = getattr(terminalreporter.config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

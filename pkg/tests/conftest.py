from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

import pytest

VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Collects problems for one criterion and records a PASS/FAIL line."""
    lines = request.config.stash.setdefault(VERDICTS, [])

    def record(number: int, title: str, problems: list[str]) -> None:
        status = "PASS" if not problems else "FAIL"
        line = f"criterion {number:>2} {status}  {title}"
        if problems:
            line += "  (" + "; ".join(problems[:3]) + ")"
        lines.append(line)
        print(line)
        assert not problems, "\n".join(problems)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

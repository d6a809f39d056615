import pytest


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in sorted(lines):
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")


@pytest.fixture
def criterion(record_property):
    """Label an acceptance test and attach a one-line summary to the report."""

    def label(number: int, detail: str) -> None:
        record_property("criterion", number)
        record_property("detail", detail)
        print(f"criterion {number}: {detail}")

    return label

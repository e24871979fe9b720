import pytest

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        props = dict(report.user_properties)
        if "criterion" in props:
            _ACCEPTANCE.append((props["criterion"], report.outcome, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for criterion, outcome, detail in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:2d}: {status}  {detail}")


@pytest.fixture
def report(record_property):
    """Attach the criterion number and a one-line summary to the test."""

    def _report(criterion, detail):
        record_property("criterion", criterion)
        record_property("detail", detail)
        print(f"criterion {criterion}: {detail}")

    return _report

import pytest

# criterion number -> (title, passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    def _record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{mark}  {number:>2}. {title}" + (f"  [{detail}]" if detail else ""))

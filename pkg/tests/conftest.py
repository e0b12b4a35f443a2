from __future__ import annotations

import pytest

# criterion number -> (verdict, one-line summary)
_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class CriterionLog:
    """Collects named sub-checks for one acceptance criterion."""

    def __init__(self, number: int, title: str) -> None:
        self.number = number
        self.title = title
        self.checks: list[tuple[str, bool, str]] = []

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        failed = [f"{name}: {detail}" if detail else name for name, ok, detail in self.checks if not ok]
        tail = f" | failed: {'; '.join(failed)}" if failed else ""
        return f"[{verdict}] criterion {self.number:2d} ({self.title}): {sum(ok for _, ok, _ in self.checks)}/{len(self.checks)} checks{tail}"

    def finish(self) -> None:
        _ACCEPTANCE[self.number] = (self.passed, self.line())
        print(self.line())
        for name, ok, detail in self.checks:
            print(f"    {'ok ' if ok else 'BAD'} {name}{' - ' + detail if detail else ''}")
        assert self.passed, self.line()


@pytest.fixture
def criterion():
    logs: list[CriterionLog] = []

    def make(number: int, title: str) -> CriterionLog:
        log = CriterionLog(number, title)
        logs.append(log)
        return log

    yield make
    # a test that raised before finish() still gets a line
    for log in logs:
        if log.number not in _ACCEPTANCE:
            log.check("completed without exception", False)
            _ACCEPTANCE[log.number] = (False, log.line())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number][1])
    passed = sum(ok for ok, _ in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(_ACCEPTANCE)} acceptance criteria pass")

import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# Acceptance verdicts, echoed in the terminal summary so they survive output capture.
_VERDICTS: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


@pytest.fixture
def criterion(request):
    """Call with (number, description); one PASS/FAIL line is printed at teardown."""
    box = {}

    def start(number: int, text: str):
        box.update(number=number, text=text, t0=time.perf_counter())

    yield start
    if not box:
        return
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"CRITERION {box['number']}: {'PASS' if ok else 'FAIL'}  {box['text']} ({time.perf_counter() - box['t0']:.2f} s)"
    print(line)
    _VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

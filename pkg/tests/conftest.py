from pathlib import Path

import pytest

from objrecipe import eval_program, parse_source

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
SPECS = CORPUS / "specs"


def evaluate(text):
    """Evaluate program text; return (env, report)."""
    return eval_program(parse_source(text))


def value_of(text, expr):
    """Evaluate ``expr`` after the definitions in ``text``."""
    values = []
    eval_program(parse_source(text + "\n" + expr), on_value=values.append)
    return values[-1]


@pytest.fixture
def corpus():
    return CORPUS


@pytest.fixture
def specs_dir():
    return SPECS


_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else "FAIL"
        _acceptance_lines.append(f"criterion {marker.args[0]}: {status}  {item.name}")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)

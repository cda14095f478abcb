"""check-expect, check-within and check-error, and the report they produce."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from .syntax import Check, Program
from .values import (
    EvaluationError,
    StructInstance,
    contains_inexact,
    is_number,
    values_equal,
    write_value,
)

INEXACT_GUIDANCE = "check-expect cannot compare inexact numbers; use check-within for inexact results"


class Outcome(Enum):
    PASS = "pass"
    FAIL = "fail"
    ERRORED = "errored"


@dataclass
class CheckResult:
    form: Check
    outcome: Outcome
    actual: Any = None
    expected: Any = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    @property
    def line(self) -> int:
        return self.form.loc[0]


@dataclass
class TestReport:
    results: list[CheckResult] = field(default_factory=list)

    __test__ = False  # not a pytest class

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def all_passed(self) -> bool:
        return self.failed == 0


def _within(a: Any, b: Any, tol: Any) -> Optional[str]:
    """None when a and b agree within tol, otherwise a reason."""
    if is_number(a) and is_number(b):
        if isinstance(a, Fraction) and isinstance(b, Fraction) and isinstance(tol, Fraction):
            ok = abs(a - b) <= tol
        else:
            ok = abs(float(a) - float(b)) <= float(tol)
        return None if ok else "not within tolerance"
    if isinstance(a, tuple) and isinstance(b, tuple):
        if len(a) != len(b):
            return f"shape mismatch: lists of length {len(a)} and {len(b)}"
        for x, y in zip(a, b):
            reason = _within(x, y, tol)
            if reason:
                return reason
        return None
    if isinstance(a, StructInstance) and isinstance(b, StructInstance):
        if a.type != b.type:
            return f"shape mismatch: {a.type.name} and {b.type.name}"
        for x, y in zip(a.fields, b.fields):
            reason = _within(x, y, tol)
            if reason:
                return reason
        return None
    if is_number(a) or is_number(b) or isinstance(a, (tuple, StructInstance)) or isinstance(b, (tuple, StructInstance)):
        return "shape mismatch: values have different shapes"
    return None if values_equal(a, b) else "values differ"


def run_check(c: Check, env) -> CheckResult:
    from .evaluator import eval_expr

    if c.kind == "error":
        try:
            expected = eval_expr(c.expected, env)
        except EvaluationError as err:
            return CheckResult(c, Outcome.ERRORED, detail=f"error: {err.message}")
        if not isinstance(expected, str):
            return CheckResult(
                c, Outcome.ERRORED, expected=expected,
                detail=f"check-error: expects a string message, given {write_value(expected)}",
            )
        try:
            value = eval_expr(c.actual, env)
        except EvaluationError as err:
            if err.message == expected:
                return CheckResult(c, Outcome.PASS, actual=err.message, expected=expected)
            return CheckResult(
                c, Outcome.FAIL, actual=err.message, expected=expected,
                detail=f"expected error {write_value(expected)} got error {write_value(err.message)}",
            )
        except RecursionError:
            return CheckResult(c, Outcome.ERRORED, expected=expected, detail="error: recursion too deep")
        return CheckResult(
            c, Outcome.FAIL, actual=value, expected=expected,
            detail=f"expected error {write_value(expected)} got {write_value(value)}",
        )

    try:
        actual = eval_expr(c.actual, env)
        expected = eval_expr(c.expected, env)
        tol = eval_expr(c.tolerance, env) if c.tolerance is not None else None
    except EvaluationError as err:
        return CheckResult(c, Outcome.ERRORED, detail=f"error: {err.message}")
    except RecursionError:
        return CheckResult(c, Outcome.ERRORED, detail="error: recursion too deep")

    if c.kind == "expect":
        if contains_inexact(actual) or contains_inexact(expected):
            return CheckResult(c, Outcome.ERRORED, actual, expected, INEXACT_GUIDANCE)
        if values_equal(actual, expected):
            return CheckResult(c, Outcome.PASS, actual, expected)
        return CheckResult(
            c, Outcome.FAIL, actual, expected,
            f"expected {write_value(expected)} got {write_value(actual)}",
        )

    if not is_number(tol) or tol < 0:
        return CheckResult(
            c, Outcome.ERRORED, actual, expected,
            f"check-within: tolerance must be a non-negative number, given {write_value(tol)}",
        )
    reason = _within(actual, expected, tol)
    if reason is None:
        return CheckResult(c, Outcome.PASS, actual, expected)
    return CheckResult(
        c, Outcome.FAIL, actual, expected,
        f"expected {write_value(expected)} got {write_value(actual)} (within {write_value(tol)}; {reason})",
    )


def run_all(p: Program) -> TestReport:
    from .evaluator import eval_program

    return eval_program(p)[1]

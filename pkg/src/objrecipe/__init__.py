"""Interpreter and design-recipe tooling for closure-encoded message-passing objects."""

from .evaluator import Environment, apply_value, eval_expr, eval_program, send
from .syntax import parse_program, parse_source, print_datum, read_all, tokenize
from .testing import CheckResult, Outcome, TestReport, run_all, run_check
from .values import EvaluationError, Symbol

__version__ = "0.1.0"

__all__ = [
    "Environment", "EvaluationError", "CheckResult", "Outcome", "Symbol",
    "TestReport", "apply_value", "eval_expr", "eval_program", "parse_program",
    "parse_source", "print_datum", "read_all", "run_all", "run_check", "send",
    "tokenize",
]

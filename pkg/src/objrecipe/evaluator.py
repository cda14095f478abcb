"""Tree-walking evaluator: environments, closures, structures, local, match."""

from __future__ import annotations

import sys
from typing import Any, Callable, Iterator, Optional

from .syntax import (
    And,
    App,
    Check,
    Cond,
    Const,
    Definition,
    ExprForm,
    If,
    Lambda,
    Local,
    Match,
    Or,
    Placeholder,
    Program,
    Require,
    StructDef,
    Var,
)
from .syntax.forms import bound_names
from .values import (
    Closure,
    EvaluationError,
    Primitive,
    StructInstance,
    StructType,
    Symbol,
    kind_name,
    write_value,
)

# Recursion in the evaluated program is recursion in Python.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class _Unset:
    def __repr__(self) -> str:
        return "<unset>"


UNSET = _Unset()


class Environment:
    """A chain of frames, innermost first.

    Frames are filled while their definitions are evaluated (so local
    functions can refer to each other) and never change afterwards.
    """

    __slots__ = ("frame", "parent")

    def __init__(self, frame: Optional[dict[str, Any]] = None, parent: Optional["Environment"] = None):
        self.frame = {} if frame is None else frame
        self.parent = parent

    def extend(self, frame: Optional[dict[str, Any]] = None) -> "Environment":
        return Environment(frame, self)

    def lookup(self, name: str) -> Any:
        env: Optional[Environment] = self
        while env is not None:
            if name in env.frame:
                value = env.frame[name]
                if value is UNSET:
                    raise EvaluationError(f"{name} is used here before its definition")
                return value
            env = env.parent
        raise EvaluationError(f"{name}: this variable is not defined")

    def __contains__(self, name: str) -> bool:
        env: Optional[Environment] = self
        while env is not None:
            if name in env.frame:
                return True
            env = env.parent
        return False

    def names(self) -> Iterator[str]:
        seen = set()
        env: Optional[Environment] = self
        while env is not None:
            for n in env.frame:
                if n not in seen:
                    seen.add(n)
                    yield n
            env = env.parent


def global_environment() -> Environment:
    from .builtins import builtin_table

    return Environment(dict(builtin_table())).extend()


def define_structure(t: StructType, env: Environment) -> Environment:
    """Bind constructor, predicate and selectors for ``t`` into env's frame."""
    n = len(t.field_names)

    def construct(*args: Any) -> StructInstance:
        return StructInstance(t, tuple(args))

    env.frame[f"make-{t.name}"] = Primitive(f"make-{t.name}", construct, n, n)
    env.frame[f"{t.name}?"] = Primitive(
        f"{t.name}?", lambda v: isinstance(v, StructInstance) and v.type is t, 1, 1
    )
    for i, fname in enumerate(t.field_names):
        sel = f"{t.name}-{fname}"
        env.frame[sel] = Primitive(sel, _selector(t, i, sel), 1, 1)
    return env


def _selector(t: StructType, index: int, name: str) -> Callable[[Any], Any]:
    def select(v: Any) -> Any:
        if not (isinstance(v, StructInstance) and v.type is t):
            raise EvaluationError(f"{name}: expects a {t.name}")
        return v.fields[index]

    return select


def _bind_definitions(defs, env: Environment) -> None:
    for df in defs:
        for name in bound_names(df):
            env.frame[name] = UNSET
    for df in defs:
        if isinstance(df, StructDef):
            define_structure(StructType(df.name, df.fields), env)
        else:
            env.frame[df.name] = eval_expr(df.expr, env)


def eval_expr(e: Any, env: Environment) -> Any:
    try:
        return _eval(e, env)
    except EvaluationError as err:
        if err.location is None:
            err.location = e.loc
        raise


def _eval(e: Any, env: Environment) -> Any:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return env.lookup(e.name)
        except EvaluationError as err:
            err.location = e.loc
            raise
    if isinstance(e, App):
        f = _eval(e.fn, env)
        args = [_eval(a, env) for a in e.args]
        try:
            return apply_value(f, args)
        except EvaluationError as err:
            if err.location is None:
                err.location = e.loc
            raise
    if isinstance(e, Lambda):
        return Closure(e.params, e.body, env, e.name)
    if isinstance(e, Match):
        return eval_match(_eval(e.subject, env), e.clauses, env, e.loc)
    if isinstance(e, Local):
        inner = env.extend()
        _bind_definitions(e.definitions, inner)
        return _eval(e.body, inner)
    if isinstance(e, If):
        test = _eval(e.test, env)
        if not isinstance(test, bool):
            raise EvaluationError(
                f"if: question result is not true or false: {write_value(test)}", e.test.loc
            )
        return _eval(e.then if test else e.orelse, env)
    if isinstance(e, Cond):
        for clause in e.clauses:
            if clause.test is None:
                return _eval(clause.body, env)
            test = _eval(clause.test, env)
            if not isinstance(test, bool):
                raise EvaluationError(
                    f"cond: question result is not true or false: {write_value(test)}",
                    clause.test.loc,
                )
            if test:
                return _eval(clause.body, env)
        raise EvaluationError("cond: all question results were false", e.loc)
    if isinstance(e, (And, Or)):
        word = "and" if isinstance(e, And) else "or"
        for operand in e.operands:
            v = _eval(operand, env)
            if not isinstance(v, bool):
                raise EvaluationError(
                    f"{word}: question result is not true or false: {write_value(v)}", operand.loc
                )
            if v is (not isinstance(e, And)):
                return v
        return isinstance(e, And)
    if isinstance(e, Placeholder):
        raise EvaluationError("template placeholder reached", e.loc)
    raise TypeError(f"not an expression: {e!r}")


def eval_match(scrutinee: Any, clauses, env: Environment, loc=None) -> Any:
    for clause in clauses:
        if clause.symbol is None or clause.symbol is scrutinee:
            return _eval(clause.body, env)
    raise EvaluationError("no matching clause", loc)


def apply_value(f: Any, args: list[Any] | tuple[Any, ...]) -> Any:
    if isinstance(f, Closure):
        if len(args) != len(f.params):
            raise EvaluationError(
                f"{f.name or 'function'}: expects {_count(len(f.params))}, given {len(args)}"
            )
        return _eval(f.body, Environment(dict(zip(f.params, args)), f.env))
    if isinstance(f, Primitive):
        if not f.accepts(len(args)):
            raise EvaluationError(f"{f.name}: {_arity_text(f)}, given {len(args)}")
        try:
            return f.fn(*args)
        except (OverflowError, ZeroDivisionError) as exc:
            raise EvaluationError(f"{f.name}: {exc}") from None
    raise EvaluationError(
        f"application of a non-function: expected a function, given a {kind_name(f)}: {write_value(f)}"
    )


def _count(n: int) -> str:
    return f"{n} argument" + ("" if n == 1 else "s")


def _arity_text(p: Primitive) -> str:
    if p.max_arity is None:
        return f"expects at least {_count(p.min_arity)}"
    if p.min_arity == p.max_arity:
        return f"expects {_count(p.min_arity)}"
    return f"expects between {p.min_arity} and {p.max_arity} arguments"


def eval_program(
    p: Program,
    on_value: Optional[Callable[[Any], None]] = None,
    run_checks: bool = True,
):
    """Evaluate a program and run its checks.

    Definitions and expressions are evaluated in order; checks run afterwards
    in source order.  Returns ``(environment, report)``.  An error in a
    definition or top-level expression propagates.
    """
    from .testing import TestReport, run_check

    env = global_environment()
    seen: dict[str, tuple[int, int]] = {}
    for form in p.forms:
        if isinstance(form, (Definition, StructDef)):
            for name in bound_names(form):
                if name in seen:
                    line, col = seen[name]
                    raise EvaluationError(
                        f"{name}: this name was defined previously (at {line}:{col}) and cannot be re-defined",
                        form.loc,
                    )
                seen[name] = form.loc
                env.frame[name] = UNSET

    for form in p.forms:
        if isinstance(form, StructDef):
            define_structure(StructType(form.name, form.fields), env)
        elif isinstance(form, Definition):
            env.frame[form.name] = eval_expr(form.expr, env)
        elif isinstance(form, ExprForm):
            value = eval_expr(form.expr, env)
            if on_value is not None:
                on_value(value)
        elif isinstance(form, (Check, Require)):
            pass

    report = TestReport([])
    if run_checks:
        report = TestReport([run_check(c, env) for c in p.checks])
    return env, report


def send(obj: Any, message: str) -> Any:
    """Apply an object to a message symbol."""
    return apply_value(obj, [Symbol(message)])

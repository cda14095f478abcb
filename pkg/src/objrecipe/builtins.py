"""Primitive bindings with an exactness-aware numeric tower."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Optional

from .values import (
    EMPTY,
    EvaluationError,
    Primitive,
    Symbol,
    display_value,
    is_exact,
    is_function,
    is_number,
    values_equal,
    write_value,
)

PI = math.pi


def _expect(name: str, pred: Callable[[Any], bool], what: str, v: Any) -> Any:
    if not pred(v):
        raise EvaluationError(f"{name}: expects {what}, given {write_value(v)}")
    return v


def _num(name: str, v: Any) -> Any:
    return _expect(name, is_number, "a number", v)


def _list(name: str, v: Any) -> tuple:
    return _expect(name, lambda x: isinstance(x, tuple), "a list", v)


def _contaminate(result: Any, operands) -> Any:
    if any(isinstance(x, float) for x in operands) and isinstance(result, Fraction):
        return float(result)
    return result


# -- arithmetic --------------------------------------------------------------


def _add(*xs):
    total = Fraction(0)
    for x in xs:
        total = total + _num("+", x)
    return total


def _mul(*xs):
    prod = Fraction(1)
    for x in xs:
        prod = prod * _num("*", x)
    return prod


def _sub(first, *rest):
    _num("-", first)
    if not rest:
        return -first
    for x in rest:
        first = first - _num("-", x)
    return first


def _divide(a, b):
    if is_exact(b) and b == 0:
        raise EvaluationError("/: division by zero")
    if isinstance(b, float) and b == 0.0:
        a = float(a)
        if a == 0.0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def _div(first, *rest):
    _num("/", first)
    for x in rest:
        _num("/", x)
    if not rest:
        return _divide(Fraction(1), first)
    for x in rest:
        first = _divide(first, x)
    return first


def _sqrt(x):
    _num("sqrt", x)
    if x < 0:
        raise EvaluationError(f"sqrt: expects a non-negative number, given {write_value(x)}")
    if is_exact(x):
        p, q = x.numerator, x.denominator
        rp, rq = math.isqrt(p), math.isqrt(q)
        if rp * rp == p and rq * rq == q:
            return Fraction(rp, rq)
    return math.sqrt(x)


def _compare(name: str, op: Callable[[Any, Any], bool]) -> Primitive:
    def compare(*xs):
        for x in xs:
            _num(name, x)
        for a, b in zip(xs, xs[1:]):
            if is_exact(a) != is_exact(b):
                a, b = float(a), float(b)
            if not op(a, b):
                return False
        return True

    return Primitive(name, compare, 2)


def _extreme(name: str, pick: Callable) -> Primitive:
    def extreme(*xs):
        for x in xs:
            _num(name, x)
        return _contaminate(pick(xs), xs)

    return Primitive(name, extreme, 1)


# -- lists -----------------------------------------------------------------------


def _cons(x, lst):
    return (x,) + _list("cons", lst)


def _first(lst):
    _expect("first", lambda v: isinstance(v, tuple) and len(v) > 0, "a non-empty list", lst)
    return lst[0]


def _rest(lst):
    _expect("rest", lambda v: isinstance(v, tuple) and len(v) > 0, "a non-empty list", lst)
    return lst[1:]


def _append(*lsts):
    out: tuple = ()
    for lst in lsts:
        out = out + _list("append", lst)
    return out


def _apply(f, args):
    from .evaluator import apply_value

    return apply_value(f, list(args))


def _fn(name: str, f: Any) -> Any:
    return _expect(name, is_function, "a function", f)


def _map(f, *lsts):
    _fn("map", f)
    for lst in lsts:
        _list("map", lst)
    if len({len(lst) for lst in lsts}) > 1:
        raise EvaluationError("map: all lists must have the same size")
    return tuple(_apply(f, items) for items in zip(*lsts))


def _filter(pred, lst):
    _fn("filter", pred)
    _list("filter", lst)
    out = []
    for x in lst:
        keep = _apply(pred, [x])
        if not isinstance(keep, bool):
            raise EvaluationError(f"filter: expected a boolean from the predicate, given {write_value(keep)}")
        if keep:
            out.append(x)
    return tuple(out)


def _foldr(f, base, lst):
    _fn("foldr", f)
    _list("foldr", lst)
    acc = base
    for x in reversed(lst):
        acc = _apply(f, [x, acc])
    return acc


# -- strings, symbols, misc ------------------------------------------------------


def _str(name: str, v: Any) -> str:
    return _expect(name, lambda x: isinstance(x, str), "a string", v)


def _sym(name: str, v: Any) -> Symbol:
    return _expect(name, lambda x: isinstance(x, Symbol), "a symbol", v)


def _bool(name: str, v: Any) -> bool:
    return _expect(name, lambda x: isinstance(x, bool), "a boolean", v)


def format_template(template: str, args) -> str:
    """Render ``~s`` (written), ``~a`` (display) and ``~~`` directives."""
    out = []
    remaining = list(args)
    i = 0
    while i < len(template):
        c = template[i]
        if c != "~":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(template):
            raise EvaluationError("format: ill-formed pattern string, ends with `~`")
        d = template[i + 1]
        if d == "~":
            out.append("~")
        elif d in "sSaA":
            if not remaining:
                raise EvaluationError(
                    f"format: format string requires more arguments than the {len(args)} given"
                )
            v = remaining.pop(0)
            out.append(write_value(v) if d in "sS" else display_value(v))
        else:
            raise EvaluationError(f"format: unknown directive `~{d}`")
        i += 2
    if remaining:
        raise EvaluationError(
            f"format: format string requires {len(args) - len(remaining)} arguments, given {len(args)}"
        )
    return "".join(out)


def _format(template, *args):
    return format_template(_str("format", template), args)


def raise_error(msg: Any):
    if not isinstance(msg, str):
        raise EvaluationError("error: expects a string")
    raise EvaluationError(msg)


def _string_eq(*xs):
    for x in xs:
        _str("string=?", x)
    return all(a == b for a, b in zip(xs, xs[1:]))


def _symbol_eq(*xs):
    for x in xs:
        _sym("symbol=?", x)
    return all(a is b for a, b in zip(xs, xs[1:]))


def _prim(name: str, fn: Callable, lo: int, hi: Optional[int] = -1) -> Primitive:
    # hi=-1 means "same as lo"
    return Primitive(name, fn, lo, lo if hi == -1 else hi)


@lru_cache(maxsize=None)
def _table() -> tuple[tuple[str, Any], ...]:
    prims = [
        _prim("+", _add, 0, None),
        _prim("*", _mul, 0, None),
        _prim("-", _sub, 1, None),
        _prim("/", _div, 1, None),
        _compare("=", lambda a, b: a == b),
        _compare("<", lambda a, b: a < b),
        _compare(">", lambda a, b: a > b),
        _compare("<=", lambda a, b: a <= b),
        _compare(">=", lambda a, b: a >= b),
        _prim("sqr", lambda x: _num("sqr", x) * x, 1),
        _prim("sqrt", _sqrt, 1),
        _prim("add1", lambda x: _num("add1", x) + 1, 1),
        _prim("sub1", lambda x: _num("sub1", x) - 1, 1),
        _prim("abs", lambda x: abs(_num("abs", x)), 1),
        _extreme("min", min),
        _extreme("max", max),
        _prim("not", lambda b: not _bool("not", b), 1),
        _prim("cons", _cons, 2),
        _prim("first", _first, 1),
        _prim("rest", _rest, 1),
        _prim("empty?", lambda v: v == () and isinstance(v, tuple), 1),
        _prim("cons?", lambda v: isinstance(v, tuple) and len(v) > 0, 1),
        _prim("list", lambda *xs: tuple(xs), 0, None),
        _prim("length", lambda lst: Fraction(len(_list("length", lst))), 1),
        _prim("append", _append, 0, None),
        _prim("reverse", lambda lst: tuple(reversed(_list("reverse", lst))), 1),
        _prim("map", _map, 2, None),
        _prim("filter", _filter, 2),
        _prim("foldr", _foldr, 3),
        _prim("string-append", lambda *xs: "".join(_str("string-append", x) for x in xs), 0, None),
        _prim("string=?", _string_eq, 2, None),
        _prim("symbol->string", lambda s: _sym("symbol->string", s).name, 1),
        _prim("symbol=?", _symbol_eq, 2, None),
        _prim("number->string", lambda n: write_value(_num("number->string", n)), 1),
        _prim("format", _format, 1, None),
        _prim("error", raise_error, 1),
        _prim("equal?", values_equal, 2),
    ]
    bindings = [(p.name, p) for p in prims]
    bindings.append(("pi", PI))
    bindings.append(("empty", EMPTY))
    return tuple(bindings)


def builtin_table() -> dict[str, Any]:
    """Fresh name -> value mapping of every primitive binding."""
    return dict(_table())

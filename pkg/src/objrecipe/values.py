"""Runtime values shared by the reader, evaluator and builtins.

Exact numbers are ``fractions.Fraction`` (always normalized), inexact numbers
are ``float``.  Lists are tuples, so every value is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional


class Symbol:
    """Interned symbol; identity comparison is symbol equality."""

    __slots__ = ("name",)
    _table: dict[str, "Symbol"] = {}

    def __new__(cls, name: str) -> "Symbol":
        sym = cls._table.get(name)
        if sym is None:
            sym = super().__new__(cls)
            sym.name = name
            cls._table[name] = sym
        return sym

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def __reduce__(self):
        return (Symbol, (self.name,))


Location = tuple[int, int]


class EvaluationError(Exception):
    """An error raised by a running program.

    ``message`` is exactly what the program (or primitive) produced; check-error
    compares it verbatim, so nothing is ever prefixed to it.
    """

    def __init__(self, message: str, location: Optional[Location] = None):
        super().__init__(message)
        self.message = message
        self.location = location


@dataclass(frozen=True)
class StructType:
    name: str
    field_names: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class StructInstance:
    type: StructType
    fields: tuple[Any, ...]


@dataclass(frozen=True, eq=False)
class Closure:
    params: tuple[str, ...]
    body: Any
    env: Any
    name: Optional[str] = None


@dataclass(frozen=True, eq=False)
class Primitive:
    name: str
    fn: Callable[..., Any] = field(repr=False)
    min_arity: int = 0
    max_arity: Optional[int] = None  # None means variadic

    def accepts(self, n: int) -> bool:
        return n >= self.min_arity and (self.max_arity is None or n <= self.max_arity)


EMPTY: tuple = ()


def is_number(v: Any) -> bool:
    return isinstance(v, (Fraction, float))


def is_exact(v: Any) -> bool:
    return isinstance(v, Fraction)


def is_function(v: Any) -> bool:
    return isinstance(v, (Closure, Primitive))


def kind_name(v: Any) -> str:
    if isinstance(v, bool):
        return "boolean"
    if is_number(v):
        return "number"
    if isinstance(v, Symbol):
        return "symbol"
    if isinstance(v, str):
        return "string"
    if isinstance(v, tuple):
        return "list"
    if isinstance(v, StructInstance):
        return "structure"
    if is_function(v):
        return "function"
    return type(v).__name__


def values_equal(a: Any, b: Any) -> bool:
    """Structural equality as used by ``equal?`` and check-expect.

    Exactness is part of a number's identity, so ``1`` and ``1.0`` differ.
    """
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if isinstance(a, Fraction):
        return isinstance(b, Fraction) and a == b
    if isinstance(a, float):
        return isinstance(b, float) and a == b
    if isinstance(a, (Symbol, Closure, Primitive)):
        return a is b
    if isinstance(a, str):
        return isinstance(b, str) and a == b
    if isinstance(a, tuple):
        return (
            isinstance(b, tuple)
            and len(a) == len(b)
            and all(values_equal(x, y) for x, y in zip(a, b))
        )
    if isinstance(a, StructInstance):
        return (
            isinstance(b, StructInstance)
            and a.type == b.type
            and all(values_equal(x, y) for x, y in zip(a.fields, b.fields))
        )
    return False


def contains_inexact(v: Any) -> bool:
    if isinstance(v, float):
        return True
    if isinstance(v, tuple):
        return any(contains_inexact(x) for x in v)
    if isinstance(v, StructInstance):
        return any(contains_inexact(x) for x in v.fields)
    return False


def format_number(n: Fraction | float) -> str:
    if isinstance(n, Fraction):
        if n.denominator == 1:
            return str(n.numerator)
        return f"{n.numerator}/{n.denominator}"
    if math.isnan(n):
        return "+nan.0"
    if math.isinf(n):
        return "+inf.0" if n > 0 else "-inf.0"
    return repr(n)


_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote_string(s: str) -> str:
    return '"' + "".join(_STRING_ESCAPES.get(c, c) for c in s) + '"'


def write_value(v: Any) -> str:
    """Written form: strings quoted, symbols bare."""
    return _render(v, write=True)


def display_value(v: Any) -> str:
    """Display form: like the written form but strings appear without quotes."""
    return _render(v, write=False)


def _render(v: Any, write: bool) -> str:
    if isinstance(v, bool):
        return "#true" if v else "#false"
    if is_number(v):
        return format_number(v)
    if isinstance(v, Symbol):
        return v.name
    if isinstance(v, str):
        return quote_string(v) if write else v
    if isinstance(v, tuple):
        return "(" + " ".join(_render(x, write) for x in v) + ")"
    if isinstance(v, StructInstance):
        parts = [f"make-{v.type.name}"] + [_render(x, write) for x in v.fields]
        return "(" + " ".join(parts) + ")"
    if isinstance(v, Closure):
        return f"#<procedure:{v.name}>" if v.name else "#<procedure>"
    if isinstance(v, Primitive):
        return f"#<procedure:{v.name}>"
    return repr(v)

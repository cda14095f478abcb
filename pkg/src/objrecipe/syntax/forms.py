"""Classify datums into program forms and expression trees.

Every special form is checked here, so a program that parses never fails at
run time because of malformed syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence, Union

from ..values import Symbol
from .reader import Datum, SourceError, read_all

Location = tuple[int, int]


class ParseError(SourceError):
    pass


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Const:
    value: Any
    loc: Location


@dataclass(frozen=True, eq=False)
class Var:
    name: str
    loc: Location


@dataclass(frozen=True, eq=False)
class Placeholder:
    loc: Location


@dataclass(frozen=True, eq=False)
class Lambda:
    params: tuple[str, ...]
    body: "Expr"
    loc: Location
    name: Optional[str] = None


@dataclass(frozen=True, eq=False)
class Local:
    definitions: tuple["Definition | StructDef", ...]
    body: "Expr"
    loc: Location


@dataclass(frozen=True, eq=False)
class If:
    test: "Expr"
    then: "Expr"
    orelse: "Expr"
    loc: Location


@dataclass(frozen=True, eq=False)
class CondClause:
    test: Optional["Expr"]  # None for else
    body: "Expr"
    loc: Location


@dataclass(frozen=True, eq=False)
class Cond:
    clauses: tuple[CondClause, ...]
    loc: Location


@dataclass(frozen=True, eq=False)
class And:
    operands: tuple["Expr", ...]
    loc: Location


@dataclass(frozen=True, eq=False)
class Or:
    operands: tuple["Expr", ...]
    loc: Location


@dataclass(frozen=True, eq=False)
class MatchClause:
    symbol: Optional[Symbol]  # None for else
    body: "Expr"
    loc: Location


@dataclass(frozen=True, eq=False)
class Match:
    subject: "Expr"
    clauses: tuple[MatchClause, ...]
    loc: Location

    @property
    def has_else(self) -> bool:
        return bool(self.clauses) and self.clauses[-1].symbol is None


@dataclass(frozen=True, eq=False)
class App:
    fn: "Expr"
    args: tuple["Expr", ...]
    loc: Location


Expr = Union[Const, Var, Placeholder, Lambda, Local, If, Cond, And, Or, Match, App]


# -- top-level forms ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Definition:
    name: str
    expr: Expr
    loc: Location


@dataclass(frozen=True, eq=False)
class StructDef:
    name: str
    fields: tuple[str, ...]
    loc: Location


@dataclass(frozen=True, eq=False)
class Check:
    kind: str  # "expect" | "within" | "error"
    actual: Expr
    expected: Expr
    tolerance: Optional[Expr]
    loc: Location


@dataclass(frozen=True, eq=False)
class Require:
    loc: Location


@dataclass(frozen=True, eq=False)
class ExprForm:
    expr: Expr
    loc: Location


Form = Union[Definition, StructDef, Check, Require, ExprForm]


@dataclass
class Program:
    forms: list[Form]
    data: list[Datum]

    @property
    def definitions(self) -> list[Union[Definition, StructDef]]:
        return [f for f in self.forms if isinstance(f, (Definition, StructDef))]

    @property
    def checks(self) -> list[Check]:
        return [f for f in self.forms if isinstance(f, Check)]


KEYWORDS = frozenset(
    {
        "define", "define-struct", "lambda", "λ", "local", "if", "cond", "else",
        "and", "or", "quote", "match", "require", "check-expect", "check-within",
        "check-error",
    }
)


def _fail(d: Datum, message: str) -> ParseError:
    return ParseError(message, d.line, d.column)


def parse_program(data: Sequence[Datum]) -> Program:
    return Program([_parse_top(d) for d in data], list(data))


def parse_source(text: str) -> Program:
    return parse_program(read_all(text))


def _parse_top(d: Datum) -> Form:
    if d.head_is("require"):
        return Require(d.location)
    if d.head_is("check-expect", "check-within", "check-error"):
        return _parse_check(d)
    if d.head_is("define", "define-struct"):
        return _parse_definition(d)
    return ExprForm(parse_expr(d), d.location)


def _parse_check(d: Datum) -> Check:
    head = d.value[0].value.name
    args = d.value[1:]
    kind = head.removeprefix("check-")
    want = 3 if kind == "within" else 2
    if len(args) != want:
        if kind == "within" and len(args) == 2:
            raise _fail(d, "check-within: missing tolerance")
        raise _fail(d, f"{head}: expects {want} parts, found {len(args)}")
    return Check(
        kind,
        parse_expr(args[0]),
        parse_expr(args[1]),
        parse_expr(args[2]) if kind == "within" else None,
        d.location,
    )


def _name_of(d: Datum, what: str) -> str:
    if not d.is_symbol():
        raise _fail(d, f"{what}: expected a name, found {_show(d)}")
    name = d.value.name
    if name in KEYWORDS or name == "...":
        raise _fail(d, f"{what}: `{name}` is a keyword and cannot be used as a name")
    return name


def _show(d: Datum) -> str:
    from .reader import print_datum

    return print_datum(d)


def _distinct(names: list[str], d: Datum, what: str) -> None:
    seen = set()
    for n in names:
        if n in seen:
            raise _fail(d, f"{what}: found `{n}` more than once")
        seen.add(n)


def _parse_definition(d: Datum) -> Union[Definition, StructDef]:
    parts = d.value
    head = parts[0].value.name
    if head == "define-struct":
        if len(parts) != 3 or not parts[2].is_list:
            raise _fail(d, "define-struct: expected a structure name and a field list")
        name = _name_of(parts[1], "define-struct")
        fields = []
        for f in parts[2].value:
            if not f.is_symbol():
                raise _fail(f, f"define-struct: field names must be symbols, found {_show(f)}")
            fields.append(_name_of(f, "define-struct"))
        _distinct(fields, d, "define-struct")
        return StructDef(name, tuple(fields), d.location)

    if len(parts) != 3:
        raise _fail(d, f"define: expected a name and one expression, found {len(parts) - 1} parts")
    target, body = parts[1], parts[2]
    if target.is_list:
        header = target.value
        if not header:
            raise _fail(target, "define: expected a function name")
        name = _name_of(header[0], "define")
        if len(header) < 2:
            raise _fail(
                target,
                f"define: function `{name}` needs at least one parameter",
            )
        params = [_name_of(p, "define") for p in header[1:]]
        _distinct(params, target, "define")
        return Definition(name, Lambda(tuple(params), parse_expr(body), d.location, name), d.location)
    name = _name_of(target, "define")
    expr = parse_expr(body)
    if isinstance(expr, Lambda) and expr.name is None:
        expr = Lambda(expr.params, expr.body, expr.loc, name)
    return Definition(name, expr, d.location)


def datum_to_value(d: Datum) -> Any:
    """The value of a quoted datum."""
    if d.is_list:
        return tuple(datum_to_value(x) for x in d.value)
    return d.value


def parse_expr(d: Datum) -> Expr:
    v = d.value
    loc = d.location
    if isinstance(v, Symbol):
        if v.name == "...":
            return Placeholder(loc)
        if v.name in KEYWORDS:
            raise _fail(d, f"{v.name}: expected an open parenthesis before `{v.name}`")
        return Var(v.name, loc)
    if not isinstance(v, tuple):
        return Const(v, loc)
    if not v:
        raise _fail(d, "missing function name in empty application `()`")
    head = v[0]
    if head.is_symbol() and head.value.name in KEYWORDS:
        return _parse_special(head.value.name, d)
    return App(parse_expr(head), tuple(parse_expr(a) for a in v[1:]), loc)


def _parse_special(name: str, d: Datum) -> Expr:
    parts = d.value
    loc = d.location
    args = parts[1:]
    if name == "quote":
        if len(args) != 1:
            raise _fail(d, "quote: expected exactly one datum")
        return Const(datum_to_value(args[0]), loc)
    if name in ("lambda", "λ"):
        if len(args) != 2 or not args[0].is_list:
            raise _fail(d, f"{name}: expected a parameter list and one body expression")
        params = [_name_of(p, name) for p in args[0].value]
        if not params:
            raise _fail(d, f"{name}: expected at least one parameter")
        _distinct(params, d, name)
        return Lambda(tuple(params), parse_expr(args[1]), loc)
    if name == "local":
        if len(args) != 2 or not args[0].is_list:
            raise _fail(d, "local: expected a bracketed list of definitions and one body expression")
        defs = []
        for item in args[0].value:
            if not item.head_is("define", "define-struct"):
                raise _fail(item, f"local: expected a definition, found {_show(item)}")
            defs.append(_parse_definition(item))
        names = []
        for df in defs:
            names.extend(_bound_names(df))
        _distinct(names, d, "local")
        return Local(tuple(defs), parse_expr(args[1]), loc)
    if name == "if":
        if len(args) != 3:
            raise _fail(d, f"if: expected a question and two answers, found {len(args)} parts")
        return If(parse_expr(args[0]), parse_expr(args[1]), parse_expr(args[2]), loc)
    if name == "cond":
        if not args:
            raise _fail(d, "cond: expected at least one clause")
        clauses = []
        for i, c in enumerate(args):
            if not c.is_list or len(c.value) != 2:
                raise _fail(c, "cond: expected a clause with a question and an answer")
            q, a = c.value
            if q.is_symbol("else"):
                if i != len(args) - 1:
                    raise _fail(c, "cond: found an else clause that isn't the last clause")
                clauses.append(CondClause(None, parse_expr(a), c.location))
            else:
                clauses.append(CondClause(parse_expr(q), parse_expr(a), c.location))
        return Cond(tuple(clauses), loc)
    if name in ("and", "or"):
        if len(args) < 2:
            raise _fail(d, f"{name}: expects at least 2 arguments, found {len(args)}")
        operands = tuple(parse_expr(a) for a in args)
        return And(operands, loc) if name == "and" else Or(operands, loc)
    if name == "match":
        return _parse_match(d)
    if name in ("define", "define-struct"):
        raise _fail(d, f"{name}: found a definition that is not at the top level")
    if name in ("check-expect", "check-within", "check-error", "require"):
        raise _fail(d, f"{name}: found a {name} that is not at the top level")
    raise _fail(d, f"{name}: not allowed here")


def _parse_match(d: Datum) -> Match:
    args = d.value[1:]
    if len(args) < 2:
        raise _fail(d, "match: expected an expression and at least one clause")
    clauses = []
    for i, c in enumerate(args[1:]):
        if not c.is_list or len(c.value) != 2:
            raise _fail(c, "match: expected a clause with a pattern and one expression")
        pat, body = c.value
        if pat.is_symbol("else"):
            if i != len(args) - 2:
                raise _fail(c, "match: else clause must be last")
            clauses.append(MatchClause(None, parse_expr(body), c.location))
        elif pat.head_is("quote") and len(pat.value) == 2 and pat.value[1].is_symbol():
            clauses.append(MatchClause(pat.value[1].value, parse_expr(body), c.location))
        else:
            raise _fail(pat, f"match: unsupported pattern {_show(pat)}; use a quoted symbol or else")
    return Match(parse_expr(args[0]), tuple(clauses), d.location)


def _bound_names(df: Union[Definition, StructDef]) -> list[str]:
    if isinstance(df, Definition):
        return [df.name]
    return struct_binding_names(df.name, df.fields)


def struct_binding_names(name: str, fields: Sequence[str]) -> list[str]:
    return [f"make-{name}", f"{name}?"] + [f"{name}-{f}" for f in fields]


def bound_names(df: Union[Definition, StructDef]) -> list[str]:
    return _bound_names(df)


def iter_children(node: Any) -> Iterator[Any]:
    """Direct sub-nodes of an expression or form."""
    if isinstance(node, (Definition,)):
        yield node.expr
    elif isinstance(node, ExprForm):
        yield node.expr
    elif isinstance(node, Check):
        yield node.actual
        yield node.expected
        if node.tolerance is not None:
            yield node.tolerance
    elif isinstance(node, Lambda):
        yield node.body
    elif isinstance(node, Local):
        yield from node.definitions
        yield node.body
    elif isinstance(node, If):
        yield from (node.test, node.then, node.orelse)
    elif isinstance(node, Cond):
        for c in node.clauses:
            if c.test is not None:
                yield c.test
            yield c.body
    elif isinstance(node, (And, Or)):
        yield from node.operands
    elif isinstance(node, Match):
        yield node.subject
        for c in node.clauses:
            yield c.body
    elif isinstance(node, App):
        yield node.fn
        yield from node.args


def walk(node: Any) -> Iterator[Any]:
    yield node
    for child in iter_children(node):
        yield from walk(child)

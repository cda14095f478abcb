"""Interface, class and union specifications, and the spec-file reader."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from ..syntax import KEYWORDS, Datum, SourceError, print_datum, read_all


class SpecError(SourceError):
    def __init__(self, message: str, line: int = 0, column: int = 0, code: str = "spec-error"):
        super().__init__(message, line, column)
        self.code = code


@dataclass(frozen=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FunctionType:
    params: tuple["TypeExpr", ...]
    result: "TypeExpr"

    def __post_init__(self):
        if not self.params:
            raise ValueError("function types need at least one parameter")

    def __str__(self) -> str:
        parts = [_nested(p) for p in self.params]
        return " ".join(parts) + " -> " + _nested(self.result)


TypeExpr = Union[BaseType, FunctionType]


def _nested(t: TypeExpr) -> str:
    return f"({t})" if isinstance(t, FunctionType) else str(t)


@dataclass(frozen=True)
class Service:
    message: str
    result: TypeExpr
    wrapper_name: Optional[str] = None

    @property
    def is_function(self) -> bool:
        return isinstance(self.result, FunctionType)


@dataclass(frozen=True)
class InterfaceSpec:
    name: str
    services: tuple[Service, ...]

    @property
    def messages(self) -> list[str]:
        return [s.message for s in self.services]

    def service(self, message: str) -> Optional[Service]:
        for s in self.services:
            if s.message == message:
                return s
        return None


@dataclass(frozen=True)
class FieldSpec:
    name: str
    type: TypeExpr
    message: Optional[str] = None

    @property
    def getter(self) -> str:
        return self.message or f"get-{self.name}"


@dataclass(frozen=True)
class ClassSpec:
    constructor_name: str
    implements: str
    fields: tuple[FieldSpec, ...]

    @property
    def variant(self) -> str:
        """Type name of the class: the constructor name without ``make-``."""
        return self.constructor_name.removeprefix("make-") or self.constructor_name

    @property
    def field_names(self) -> list[str]:
        return [f.name for f in self.fields]

    @property
    def getter_messages(self) -> list[str]:
        return [f.getter for f in self.fields]


@dataclass(frozen=True)
class UnionSpec:
    name: str
    variants: tuple[str, ...]


@dataclass
class SpecSet:
    interfaces: dict[str, InterfaceSpec] = field(default_factory=dict)
    classes: dict[str, ClassSpec] = field(default_factory=dict)
    unions: dict[str, UnionSpec] = field(default_factory=dict)

    def required_messages(self, cls: ClassSpec) -> list[str]:
        """Interface messages followed by any field getters not already listed."""
        msgs = list(self.interfaces[cls.implements].messages)
        for m in cls.getter_messages:
            if m not in msgs:
                msgs.append(m)
        return msgs


def _err(d: Datum, message: str, code: str = "spec-error") -> SpecError:
    return SpecError(message, d.line, d.column, code)


def _sym(d: Datum, what: str) -> str:
    if not d.is_symbol():
        raise _err(d, f"{what}: expected a name, found {print_datum(d)}")
    return d.value.name


def _ident(d: Datum, what: str) -> str:
    name = _sym(d, what)
    if name in KEYWORDS or name == "..." or name.startswith("#:"):
        raise _err(d, f"{what}: `{name}` cannot be used as a name")
    return name


def parse_type(d: Datum) -> TypeExpr:
    if d.is_symbol():
        return BaseType(_ident(d, "type"))
    if d.head_is("->"):
        parts = d.value[1:]
        if len(parts) < 2:
            raise _err(d, "->: a function type needs at least one parameter and a result")
        return FunctionType(tuple(parse_type(p) for p in parts[:-1]), parse_type(parts[-1]))
    raise _err(d, f"unrecognized type {print_datum(d)}")


def _options(items: Sequence[Datum], allowed: set[str], what: str) -> tuple[list[Datum], dict[str, str]]:
    """Split trailing ``#:key value`` pairs off a clause."""
    positional: list[Datum] = []
    opts: dict[str, str] = {}
    k = 0
    while k < len(items):
        d = items[k]
        if d.is_symbol() and d.value.name.startswith("#:"):
            key = d.value.name[2:]
            if key not in allowed:
                raise _err(d, f"{what}: unknown option #:{key}")
            if k + 1 >= len(items):
                raise _err(d, f"{what}: option #:{key} needs a value")
            opts[key] = _ident(items[k + 1], f"#:{key}")
            k += 2
        else:
            positional.append(d)
            k += 1
    return positional, opts


def _parse_interface(d: Datum) -> InterfaceSpec:
    parts = d.value
    if len(parts) < 2:
        raise _err(d, "define-interface: expected a name and services")
    name = _ident(parts[1], "define-interface")
    services: list[Service] = []
    seen: set[str] = set()
    for s in parts[2:]:
        if not s.head_is("service"):
            raise _err(s, f"define-interface: expected (service <message> <type>), found {print_datum(s)}")
        pos, opts = _options(s.value[1:], {"wrapper-name"}, "service")
        if len(pos) != 2:
            raise _err(s, "service: expected a message and a result type")
        msg = _sym(pos[0], "service")
        if msg.startswith("#:"):
            raise _err(pos[0], f"service: `{msg}` cannot be a message")
        if msg in seen:
            raise _err(s, f"duplicate message '{msg} in interface {name}", "duplicate-message")
        seen.add(msg)
        services.append(Service(msg, parse_type(pos[1]), opts.get("wrapper-name")))
    if not services:
        raise _err(d, f"interface {name} offers no services")
    return InterfaceSpec(name, tuple(services))


def _parse_class(d: Datum) -> ClassSpec:
    parts = d.value
    if len(parts) != 5 or not parts[2].is_symbol("implements") or not parts[4].head_is("fields"):
        raise _err(d, "define-class: expected (define-class <constructor> implements <interface> (fields ...))")
    ctor = _ident(parts[1], "define-class")
    iface = _ident(parts[3], "define-class")
    fields: list[FieldSpec] = []
    names: set[str] = set()
    getters: set[str] = set()
    for f in parts[4].value[1:]:
        if not f.is_list:
            raise _err(f, f"fields: expected (<name> <type>), found {print_datum(f)}")
        pos, opts = _options(f.value, {"message"}, "field")
        if len(pos) != 2:
            raise _err(f, "field: expected a name and a type")
        fname = _ident(pos[0], "field")
        if fname in names:
            raise _err(f, f"duplicate field name {fname} in {ctor}", "duplicate-field")
        names.add(fname)
        spec = FieldSpec(fname, parse_type(pos[1]), opts.get("message"))
        if spec.getter in getters:
            raise _err(f, f"two fields of {ctor} share the getter message '{spec.getter}", "duplicate-message")
        getters.add(spec.getter)
        fields.append(spec)
    return ClassSpec(ctor, iface, tuple(fields))


def _parse_union(d: Datum) -> UnionSpec:
    parts = d.value
    if len(parts) != 3 or not parts[2].is_list:
        raise _err(d, "define-union: expected (define-union <interface> (<constructor> ...))")
    name = _ident(parts[1], "define-union")
    variants = tuple(_ident(v, "define-union") for v in parts[2].value)
    if len(variants) < 2:
        raise _err(d, f"union {name} needs at least two variants, found {len(variants)}")
    if len(set(variants)) != len(variants):
        raise _err(d, f"union {name} lists a variant more than once")
    return UnionSpec(name, variants)


def parse_spec(data: Sequence[Datum]) -> SpecSet:
    specs = SpecSet()
    where: dict[str, Datum] = {}
    for d in data:
        if d.head_is("define-interface"):
            i = _parse_interface(d)
            if i.name in specs.interfaces:
                raise _err(d, f"interface {i.name} declared twice")
            specs.interfaces[i.name] = i
        elif d.head_is("define-class"):
            c = _parse_class(d)
            if c.constructor_name in specs.classes:
                raise _err(d, f"class {c.constructor_name} declared twice")
            specs.classes[c.constructor_name] = c
            where[c.constructor_name] = d
        elif d.head_is("define-union"):
            u = _parse_union(d)
            if u.name in specs.unions:
                raise _err(d, f"union {u.name} declared twice")
            specs.unions[u.name] = u
            where["union " + u.name] = d
        else:
            raise _err(d, f"expected define-interface, define-class or define-union, found {print_datum(d)}")

    for c in specs.classes.values():
        if c.implements not in specs.interfaces:
            raise _err(where[c.constructor_name], f"class {c.constructor_name} implements unknown interface {c.implements}", "unknown-interface")
    for u in specs.unions.values():
        d = where["union " + u.name]
        if u.name not in specs.interfaces:
            raise _err(d, f"union {u.name} does not name a declared interface", "unknown-interface")
        for v in u.variants:
            if v not in specs.classes:
                raise _err(d, f"union {u.name} names undeclared class {v}", "unknown-class")
            if specs.classes[v].implements != u.name:
                raise _err(d, f"variant {v} of union {u.name} implements {specs.classes[v].implements}", "unknown-interface")
    return specs


def parse_spec_text(text: str) -> SpecSet:
    return parse_spec(read_all(text))


# -- interface comment blocks ------------------------------------------------------

_HEADER = re.compile(r";; An? (\S+) is an interface offering:\s*\Z")
_LINE = re.compile(r";;\s+'(\S+):\s+(.+?)\s*\Z")
_TYPE_TOKEN = re.compile(r"\(|\)|->|[^\s()]+")


def parse_type_text(text: str) -> TypeExpr:
    tokens = _TYPE_TOKEN.findall(text)
    t, k = _type_seq(tokens, 0)
    if k != len(tokens):
        raise ValueError(f"trailing input in type {text!r}")
    return t


def _type_atom(tokens: list[str], k: int) -> tuple[TypeExpr, int]:
    if k >= len(tokens):
        raise ValueError("type ends unexpectedly")
    if tokens[k] == "(":
        t, k = _type_seq(tokens, k + 1)
        if k >= len(tokens) or tokens[k] != ")":
            raise ValueError("unbalanced parenthesis in type")
        return t, k + 1
    if tokens[k] in (")", "->"):
        raise ValueError(f"unexpected {tokens[k]!r} in type")
    return BaseType(tokens[k]), k + 1


def _type_seq(tokens: list[str], k: int) -> tuple[TypeExpr, int]:
    atoms = []
    while k < len(tokens) and tokens[k] not in (")", "->"):
        a, k = _type_atom(tokens, k)
        atoms.append(a)
    if k < len(tokens) and tokens[k] == "->":
        result, k = _type_atom(tokens, k + 1)
        if not atoms:
            raise ValueError("function type without parameters")
        return FunctionType(tuple(atoms), result), k
    if len(atoms) != 1:
        raise ValueError("expected a single type")
    return atoms[0], k


def parse_interface_comment(text: str) -> InterfaceSpec:
    """Read back a block produced by ``emit_interface_comment``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    m = _HEADER.match(lines[0]) if lines else None
    if not m:
        raise ValueError("not an interface comment block")
    services = []
    for ln in lines[1:]:
        lm = _LINE.match(ln)
        if not lm:
            raise ValueError(f"unrecognized interface line {ln!r}")
        services.append(Service(lm.group(1), parse_type_text(lm.group(2))))
    return InterfaceSpec(m.group(1), tuple(services))

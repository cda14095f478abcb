"""Emit interface comments, class templates and wrapper functions."""

from __future__ import annotations

from typing import Iterable

from ..syntax import KEYWORDS
from .model import BaseType, ClassSpec, FunctionType, InterfaceSpec, Service, TypeExpr


def emit_interface_comment(i: InterfaceSpec) -> str:
    labels = [f"'{s.message}:" for s in i.services]
    width = max(len(lbl) for lbl in labels)
    lines = [f";; A {i.name} is an interface offering:"]
    for lbl, s in zip(labels, i.services):
        lines.append(f";;  {lbl.rjust(width)} {s.result}")
    return "\n".join(lines) + "\n"


def wrapper_name(s: Service, type_name: str) -> str:
    """``is-sq?`` -> ``gs-sq?``, ``getx`` -> ``3Dposn-x``, ``area`` -> ``gs-area``."""
    if s.wrapper_name:
        return s.wrapper_name
    stem = s.message
    for prefix in ("is-", "get-", "get"):
        if stem.startswith(prefix) and len(stem) > len(prefix):
            stem = stem[len(prefix):]
            break
    return f"{type_name}-{stem}"


def _fresh(base: str, taken: set[str]) -> str:
    name, k = base, 2
    while name in taken or name in KEYWORDS:
        name = f"{base}-{k}"
        k += 1
    taken.add(name)
    return name


def _param_names(types: Iterable[TypeExpr], taken: set[str]) -> list[str]:
    names = []
    for t in types:
        base = f"a-{t.name.lower()}" if isinstance(t, BaseType) else "a-function"
        names.append(_fresh(base, taken))
    return names


def _signature(params: Iterable[TypeExpr], result: TypeExpr) -> str:
    shown = [f"({p})" if isinstance(p, FunctionType) else str(p) for p in params]
    res = f"({result})" if isinstance(result, FunctionType) else str(result)
    return " ".join(shown + ["->", res]) if shown else res


def generate_class_template(c: ClassSpec, i: InterfaceSpec) -> str:
    """A class function whose manager dispatches every message of ``i``.

    Field getters return the field, function-valued services return a local
    helper stub and value services are left as ``...`` placeholders.
    """
    taken = set(c.field_names)
    helpers: dict[str, tuple[str, list[str]]] = {}
    for s in i.services:
        if s.is_function:
            # helper parameters may shadow fields; the stub body never reads them
            params = _param_names(s.result.params, set())
            helpers[s.message] = (_fresh(f"serve-{s.message}", taken), params)
    manager = _fresh("manager", taken)
    msg = _fresh("m", taken)

    clauses: list[tuple[str, str]] = []
    field_for = {f.getter: f.name for f in c.fields}
    for f in c.fields:
        clauses.append((f.getter, f.name))
    for s in i.services:
        if s.message in field_for:
            continue
        body = helpers[s.message][0] if s.is_function else "..."
        clauses.append((s.message, body))

    out: list[str] = []
    sig_params = [f.type for f in c.fields]
    out.append(f";; {_signature(sig_params, BaseType(c.variant))}")
    out.append(f";; Purpose: Return a {c.variant} object")
    if c.fields:
        out.append(f"(define ({c.constructor_name} {' '.join(c.field_names)})")
    else:
        out.append(f"(define {c.constructor_name}")
    out.append("  (local")

    body_lines: list[str] = []
    for s in i.services:
        if not s.is_function:
            continue
        hname, params = helpers[s.message]
        body_lines.append(f";; {_signature(s.result.params, s.result.result)}")
        body_lines.append(f";; Purpose: Provide the {s.message} service of this {c.variant}")
        body_lines.append(f"(define ({hname} {' '.join(params)}) ...)")
        body_lines.append("")
    body_lines.append(";; message -> service throws error")
    body_lines.append(";; Purpose: Provide service for the given message")
    body_lines.append(f"(define ({manager} {msg})")
    body_lines.append(f"  (match {msg}")
    width = max((len(p) + 1 for p, _ in clauses), default=0)
    for pat, body in clauses:
        label = "'" + pat
        body_lines.append(f"    [{label.ljust(width)} {body}]")
    body_lines.append("    [else")
    body_lines.append(f'     (error (format "Unknown {i.name} service requested: ~s" {msg}))]))')

    out.append("    [" + body_lines[0])
    for ln in body_lines[1:]:
        out.append(("     " + ln) if ln else "")
    out[-1] += "]"
    out.append(f"    {manager}))")
    return "\n".join(out) + "\n"


def generate_wrappers(i: InterfaceSpec, type_name: str) -> str:
    obj = f"a-{type_name.lower()}"
    used: set[str] = set()
    chunks = []
    for s in i.services:
        name = wrapper_name(s, type_name)
        if name in used:
            name = _fresh(f"{type_name}-{s.message}", used)
        used.add(name)
        if s.is_function:
            extra = ["that"] if len(s.result.params) == 1 else [f"that-{k + 1}" for k in range(len(s.result.params))]
            sig = _signature([BaseType(type_name), *s.result.params], s.result.result)
            chunks.append(
                f";; {sig}\n"
                f";; Purpose: Apply the {s.message} service of the first given {type_name} to the remaining input\n"
                f"(define ({name} this {' '.join(extra)}) ((this '{s.message}) {' '.join(extra)}))\n"
            )
        else:
            sig = _signature([BaseType(type_name)], s.result)
            chunks.append(
                f";; {sig}\n"
                f";; Purpose: Return the {s.message} service of the given {type_name}\n"
                f"(define ({name} {obj}) ({obj} '{s.message}))\n"
            )
    return "\n".join(chunks)

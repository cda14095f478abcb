"""Manager exhaustiveness lint and union-wide dispatch verification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Mapping, Optional

from ..evaluator import apply_value, eval_program, send
from ..syntax import Definition, Lambda, Local, Match, Program, Var, iter_children
from ..values import EvaluationError, Symbol
from .model import BaseType, ClassSpec, InterfaceSpec, UnionSpec

ERROR = "error"
WARNING = "warning"

# Stable diagnostic codes.
MISSING_MESSAGE = "missing-message"
EXTRA_MESSAGE = "extra-message"
MISSING_ELSE = "missing-else"
MISSING_VARIANT_MESSAGE = "missing-variant-message"
SHADOWED_CLAUSE = "shadowed-clause"
NO_MANAGER_FOUND = "no-manager-found"
MISSING_CONSTRUCTOR = "missing-constructor"
INSTANTIATION_FAILED = "instantiation-failed"

SAMPLE_VALUES = {
    "number": Fraction(1),
    "symbol": Symbol("sample"),
    "boolean": True,
    "string": "sample",
}

_PROBE = "unknown-service-probe"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    location: tuple[int, int] = (1, 1)

    def render(self, filename: str) -> str:
        return f"{self.severity} {self.code} {filename}:{self.location[0]} {self.message}"


@dataclass(frozen=True)
class ManagerSite:
    """A ``local`` that returns a one-parameter function matching on its parameter."""

    owner: Optional[str]
    owner_params: tuple[str, ...]
    match: Match
    param: str

    @property
    def clause_symbols(self) -> list[str]:
        return [c.symbol.name for c in self.match.clauses if c.symbol is not None]


def _manager_function(local: Local) -> Optional[Lambda]:
    body = local.body
    if isinstance(body, Lambda):
        return body
    if isinstance(body, Var):
        for df in local.definitions:
            if isinstance(df, Definition) and df.name == body.name and isinstance(df.expr, Lambda):
                return df.expr
    return None


def _site(local: Local, owner) -> Optional[ManagerSite]:
    fn = _manager_function(local)
    if fn is None or len(fn.params) != 1:
        return None
    m = fn.body
    if isinstance(m, Match) and isinstance(m.subject, Var) and m.subject.name == fn.params[0]:
        return ManagerSite(owner[0], owner[1], m, fn.params[0])
    return None


def find_managers(p: Program) -> list[ManagerSite]:
    sites: list[ManagerSite] = []

    def visit(node: Any, owner: tuple[Optional[str], tuple[str, ...]]) -> None:
        if isinstance(node, Definition):
            if isinstance(node.expr, Lambda):
                visit(node.expr.body, (node.name, node.expr.params))
            else:
                visit(node.expr, (node.name, ()))
            return
        if isinstance(node, Local):
            site = _site(node, owner)
            if site is not None:
                sites.append(site)
        for child in iter_children(node):
            visit(child, owner)

    for form in p.forms:
        visit(form, (None, ()))
    return sites


def _getters_for(site: ManagerSite, cls: Optional[ClassSpec]) -> tuple[list[str], set[str]]:
    """Required getter messages and the clause symbols accepted as getters."""
    if cls is not None:
        return list(cls.getter_messages), set()
    returns_param = {
        c.symbol.name: c.body.name
        for c in site.match.clauses
        if c.symbol is not None and isinstance(c.body, Var) and c.body.name in site.owner_params
    }
    covered = set(returns_param.values())
    required = [f"get-{p}" for p in site.owner_params if p not in covered]
    return required, set(returns_param)


def _lint_site(site: ManagerSite, i: InterfaceSpec, cls: Optional[ClassSpec]) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    who = site.owner or "manager"
    getters, getter_like = _getters_for(site, cls)
    required = list(i.messages) + [g for g in getters if g not in i.messages]
    allowed = set(required) | getter_like
    present = set(site.clause_symbols)

    for msg in required:
        if msg not in present:
            out.append(Diagnostic(ERROR, MISSING_MESSAGE, f"{who}: no clause for message '{msg}", site.match.loc))
    seen: set[str] = set()
    for c in site.match.clauses:
        if c.symbol is None:
            continue
        name = c.symbol.name
        if name in seen:
            out.append(Diagnostic(WARNING, SHADOWED_CLAUSE, f"{who}: clause for '{name} can never be reached", c.loc))
        elif name not in allowed:
            out.append(Diagnostic(WARNING, EXTRA_MESSAGE, f"{who}: '{name} is not a message of interface {i.name}", c.loc))
        seen.add(name)
    if not site.match.has_else:
        out.append(Diagnostic(ERROR, MISSING_ELSE, f"{who}: manager has no else clause for unknown messages", site.match.loc))
    return out


def lint_manager(
    p: Program,
    i: InterfaceSpec,
    classes: Optional[Mapping[str, ClassSpec]] = None,
    known_only: bool = False,
) -> list[Diagnostic]:
    """Compare every manager's clauses against ``i`` plus its field getters.

    With ``classes``, getters come from the matching class spec; otherwise a
    class parameter counts as covered when some clause returns it directly,
    and ``get-<param>`` is required for the rest.
    """
    classes = classes or {}
    sites = find_managers(p)
    if not sites:
        return [Diagnostic(WARNING, NO_MANAGER_FOUND, "no message-processing function found")]
    out: list[Diagnostic] = []
    for site in sites:
        cls = classes.get(site.owner) if site.owner else None
        if cls is not None and cls.implements != i.name:
            continue
        if cls is None and known_only:
            continue
        out.extend(_lint_site(site, i, cls))
    return out


def _top_definitions(p: Program) -> dict[str, Definition]:
    return {f.name: f for f in p.forms if isinstance(f, Definition)}


def _required(i: InterfaceSpec, cls: ClassSpec) -> list[str]:
    return list(i.messages) + [g for g in cls.getter_messages if g not in i.messages]


def _sample_args(cls: ClassSpec) -> Optional[list[Any]]:
    args = []
    for f in cls.fields:
        if not isinstance(f.type, BaseType) or f.type.name.lower() not in SAMPLE_VALUES:
            return None
        args.append(SAMPLE_VALUES[f.type.name.lower()])
    return args


def _reaches_unknown(message: str, sent: str, probe_message: Optional[str]) -> bool:
    if message == "no matching clause":
        return True
    return probe_message is not None and _PROBE in probe_message and message == probe_message.replace(_PROBE, sent)


def verify_dispatch(
    p: Program,
    u: UnionSpec,
    i: InterfaceSpec,
    classes: Mapping[str, ClassSpec],
) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    defs = _top_definitions(p)
    sites = find_managers(p)
    reported: set[tuple[str, str]] = set()

    present: list[str] = []
    for ctor in u.variants:
        cls = classes[ctor]
        if ctor not in defs:
            out.append(Diagnostic(ERROR, MISSING_CONSTRUCTOR, f"variant class {ctor} of union {u.name} is not defined"))
            continue
        present.append(ctor)
        own = [s for s in sites if s.owner == ctor]
        if not own:
            out.append(Diagnostic(WARNING, NO_MANAGER_FOUND, f"{ctor}: no message-processing function found", defs[ctor].loc))
        for site in own:
            clauses = set(site.clause_symbols)
            for msg in _required(i, cls):
                if msg not in clauses and (ctor, msg) not in reported:
                    reported.add((ctor, msg))
                    out.append(Diagnostic(
                        ERROR, MISSING_VARIANT_MESSAGE,
                        f"{ctor} has no clause for message '{msg} of union {u.name}", site.match.loc,
                    ))

    if not present:
        return out
    try:
        env, _ = eval_program(p, run_checks=False)
    except (EvaluationError, RecursionError) as err:
        msg = getattr(err, "message", "recursion too deep")
        return out + [Diagnostic(ERROR, INSTANTIATION_FAILED, f"program raised an error while loading: {msg}")]

    for ctor in present:
        cls = classes[ctor]
        loc = defs[ctor].loc
        args = _sample_args(cls)
        if args is None:
            continue
        try:
            obj = env.lookup(ctor)
            if args:
                obj = apply_value(obj, args)
        except EvaluationError as err:
            out.append(Diagnostic(ERROR, INSTANTIATION_FAILED, f"{ctor}: constructing a sample instance raised: {err.message}", loc))
            continue
        probe_message = None
        try:
            send(obj, _PROBE)
        except EvaluationError as err:
            probe_message = err.message
        except RecursionError:
            pass
        for msg in _required(i, cls):
            try:
                send(obj, msg)
            except EvaluationError as err:
                if _reaches_unknown(err.message, msg, probe_message) and (ctor, msg) not in reported:
                    reported.add((ctor, msg))
                    out.append(Diagnostic(
                        ERROR, MISSING_VARIANT_MESSAGE,
                        f"{ctor}: sending '{msg} to a sample instance reaches the unknown-message branch", loc,
                    ))
            except RecursionError:
                pass
    return out


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)


def iter_errors(diags: list[Diagnostic]) -> Iterator[Diagnostic]:
    return (d for d in diags if d.severity == ERROR)

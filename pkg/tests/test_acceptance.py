"""Exit criteria for the build, one test per criterion.

Each test carries ``@pytest.mark.acceptance(n)``; conftest prints a
``criterion n: PASS|FAIL`` line for each in the terminal summary.
"""

import math
import re
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import CORPUS, SPECS, evaluate
from objrecipe import (
    EvaluationError,
    Outcome,
    apply_value,
    parse_source,
    run_all,
    run_check,
    send,
)
from objrecipe.recipe import (
    FunctionType,
    find_managers,
    generate_class_template,
    generate_wrappers,
    lint_manager,
    parse_spec_text,
    verify_dispatch,
)
from objrecipe.cli import scaffold_files
from objrecipe.syntax import print_datum, read_one
from strategies import data, spec_texts

GS = parse_spec_text((SPECS / "gs.spec").read_text())
FIG6 = (CORPUS / "fig6-gs.rkts").read_text()

EXPECTED_COUNTS = {
    "compose.rkts": 2,
    "list-scaler.rkts": 6,
    "fig1-3dposn-struct.rkts": 3,
    "fig2-fig3-3dposn-interface.rkts": 17,
    "3dposn-distance.rkts": 3,
    "fig6-gs.rkts": 15,
}

CANONICAL = {"number": "1", "symbol": "'sample", "boolean": "#true", "string": '"sample"'}
SAMPLE_ARGS = {"number": Fraction(1), "symbol": "sample", "boolean": True, "string": "sample"}


def single_check(env, text):
    (check,) = parse_source(text).forms
    return run_check(check, env)


# -- 1 ----------------------------------------------------------------------------

@pytest.mark.acceptance(1)
def test_corpus_reproduction():
    start = time.perf_counter()
    reports = {
        name: run_all(parse_source((CORPUS / name).read_text())) for name in EXPECTED_COUNTS
    }
    elapsed = time.perf_counter() - start

    for name, count in EXPECTED_COUNTS.items():
        r = reports[name]
        assert (r.passed, r.total) == (count, count), (name, [x.detail for x in r.results if not x.passed])
    assert sum(r.passed for r in reports.values()) == sum(r.total for r in reports.values()) == 46
    assert elapsed < 1.0, f"corpus took {elapsed:.3f}s"

    # named values behind the checks
    env, _ = evaluate((CORPUS / "3dposn-distance.rkts").read_text())
    assert single_check(
        env, "(check-within (3Dposn-distance (make-3Dposn 10 20 30) (make-3Dposn 2 3 4)) 32.07 0.01)"
    ).passed
    env, _ = evaluate(FIG6)
    for text in [
        "(check-expect (gs-area SQR1) 25)",
        "(check-expect (gs-area RECT1) 6)",
        "(check-within (gs-area CIRC1) 153.93 0.01)",
        "(check-expect (gs-bigger? SQR1 RECT1) #true)",
        "(check-expect (gs-bigger? RECT1 CIRC1) #false)",
        "(check-expect (gs-bigger? CIRC1 SQR1) #true)",
    ]:
        assert single_check(env, text).passed, text


# -- 2 ----------------------------------------------------------------------------

@pytest.mark.acceptance(2)
def test_exact_error_string():
    env, report = evaluate((CORPUS / "fig2-fig3-3dposn-interface.rkts").read_text())
    with pytest.raises(EvaluationError) as exc:
        send(env.lookup("A3DPOSN"), "move-r")
    assert exc.value.message == "Unknown message to 3Dposn: move-r"
    error_checks = [r for r in report.results if r.form.kind == "error"]
    assert error_checks and all(r.passed for r in error_checks)


# -- 3 ----------------------------------------------------------------------------

@pytest.mark.acceptance(3)
def test_exactness_contract():
    env, _ = evaluate(FIG6)
    sq_area = apply_value(env.lookup("gs-area"), [apply_value(env.lookup("make-sq"), [Fraction(5), "outline", "green"])])
    assert isinstance(sq_area, Fraction) and sq_area == 25
    assert single_check(env, "(check-expect (gs-area (make-sq 5 'outline 'green)) 25)").outcome is Outcome.PASS

    circ = "(gs-area (make-circ 7 'outline 'red))"
    assert isinstance(apply_value(env.lookup("gs-area"), [env.lookup("CIRC1")]), float)
    assert single_check(env, f"(check-expect {circ} 153.93)").outcome is Outcome.ERRORED
    assert single_check(env, f"(check-within {circ} 153.93 0.01)").outcome is Outcome.PASS


# -- 4 ----------------------------------------------------------------------------

_fig2_env, _ = evaluate((CORPUS / "fig2-fig3-3dposn-interface.rkts").read_text())
exact_numbers = st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 1000))


@pytest.mark.acceptance(4)
@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(exact_numbers, exact_numbers, exact_numbers)
def test_lexical_capture(x, y, z):
    obj = apply_value(_fig2_env.lookup("make-3Dposn"), [x, y, z])
    for msg, v in (("getx", x), ("gety", y), ("getz", z)):
        got = send(obj, msg)
        assert isinstance(got, Fraction) and got == v
    oracle = math.sqrt(float(x * x + y * y + z * z))
    assert math.isclose(float(send(obj, "d2o")), oracle, rel_tol=1e-9)


# -- 5 ----------------------------------------------------------------------------

def clause_set(text, ctor):
    (site,) = [s for s in find_managers(parse_source(text)) if s.owner == ctor]
    return set(site.clause_symbols)


@pytest.mark.acceptance(5)
def test_scaffold_round_trip():
    files = scaffold_files(GS)
    assert len(files) == 5
    for name, text in files.items():
        program = parse_source(text)
        if name.endswith("-template.rkts"):
            diags = lint_manager(program, GS.interfaces["gs"], GS.classes)
            assert [d for d in diags if d.severity == "error"] == [], name

    # The corpus classes fill the generated templates: same manager clauses.
    for ctor in GS.unions["gs"].variants:
        variant = ctor[len("make-"):]
        assert clause_set(files[f"{variant}-template.rkts"], ctor) == clause_set(FIG6, ctor)

    classes_and_samples = FIG6[: FIG6.index(";; gs -> Boolean\n;; Purpose: Determine if given gs is a sq")]
    tests = FIG6[FIG6.index(";; Tests for gs interface"):]
    spliced = classes_and_samples + "\n" + files["gs-wrappers.rkts"] + "\n" + tests
    _, report = evaluate(spliced)
    assert (report.passed, report.total) == (15, 15)


# -- 6 ----------------------------------------------------------------------------

def class_regions(text):
    starts = [text.index(f"(define ({c} ") for c in GS.unions["gs"].variants]
    return list(zip(GS.unions["gs"].variants, starts, starts[1:] + [text.index("(define SQR1")]))


def clause_lines(text, start, end):
    pat = re.compile(r"^\s*\['(\S+)\s.*\n", re.M)
    return [(m.group(1), m.start(), m.end()) for m in pat.finditer(text, start, end)]


def errors(diags):
    return [d for d in diags if d.severity == "error"]


@pytest.mark.acceptance(6)
def test_lint_sensitivity():
    gs = GS.interfaces["gs"]
    union = GS.unions["gs"]

    def lint_and_union(text):
        p = parse_source(text)
        return errors(lint_manager(p, gs, GS.classes)), errors(verify_dispatch(p, union, gs, GS.classes))

    assert lint_and_union(FIG6) == ([], [])
    cases = 0
    for ctor, start, end in class_regions(FIG6):
        lines = clause_lines(FIG6, start, end)
        assert {m for m, _, _ in lines} == set(GS.required_messages(GS.classes[ctor]))
        for msg, a, b in lines:
            mutated = FIG6[:a] + FIG6[b:]
            lint_errs, union_errs = lint_and_union(mutated)
            assert [d.code for d in lint_errs] == ["missing-message"], (ctor, msg, lint_errs)
            assert f"'{msg}" in lint_errs[0].message and ctor in lint_errs[0].message
            assert [d.code for d in union_errs] == ["missing-variant-message"], (ctor, msg, union_errs)
            assert f"'{msg}" in union_errs[0].message and ctor in union_errs[0].message
            restored = mutated[:a] + FIG6[a:b] + mutated[a:]
            assert restored == FIG6 and lint_and_union(restored) == ([], [])
            cases += 1
    # every clause of every class: 8 for sq and circ, 9 for rect (its extra width getter)
    assert cases == 8 + 9 + 8


# -- 7 ----------------------------------------------------------------------------

def fill_stubs(template, iface):
    """Replace each ``...`` stub with a canonical value of the service's result type."""
    out = template
    for s in iface.services:
        result = s.result.result if isinstance(s.result, FunctionType) else s.result
        value = CANONICAL[result.name]
        if isinstance(s.result, FunctionType):
            pat = r"(\(define \(serve-" + re.escape(s.message) + r"(?:-\d+)? [^)]*\)) \.\.\.\)"
            out = re.sub(pat, lambda m: m.group(1) + " " + value + ")", out)
        else:
            out = re.sub(r"(\['" + re.escape(s.message) + r" +)\.\.\.\]", lambda m: m.group(1) + value + "]", out)
    assert "..." not in out, out
    return out


@pytest.mark.acceptance(7)
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(spec_texts(min_services=1, max_services=8))
def test_dispatch_property(text):
    specs = parse_spec_text(text)
    (iface,) = specs.interfaces.values()
    for c in specs.classes.values():
        program = fill_stubs(generate_class_template(c, iface), iface)
        env, _ = evaluate(program)
        obj = env.lookup(c.constructor_name)
        if c.fields:
            obj = apply_value(obj, [SAMPLE_ARGS[f.type.name] for f in c.fields])
        in_spec = set(iface.messages) | set(c.getter_messages)
        for msg in in_spec:
            reply = send(obj, msg)
            s = iface.service(msg) if msg in iface.messages else None
            if s is not None and s.is_function:
                args = [SAMPLE_ARGS.get(t.name, obj) for t in s.result.params]
                apply_value(reply, args)
        fresh = "fresh-message"
        while fresh in in_spec:
            fresh += "-x"
        with pytest.raises(EvaluationError) as exc:
            send(obj, fresh)
        assert exc.value.message == f"Unknown {iface.name} service requested: {fresh}"
    # generated wrappers parse alongside the filled templates
    parse_source(generate_wrappers(iface, iface.name))


# -- 8 ----------------------------------------------------------------------------

@pytest.mark.acceptance(8)
@settings(max_examples=1000, deadline=None)
@given(data)
def test_reader_round_trip(d):
    assert read_one(print_datum(d)) == d

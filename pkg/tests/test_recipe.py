import re

import pytest
from hypothesis import given, settings

from conftest import CORPUS, SPECS, evaluate
from objrecipe import EvaluationError, apply_value, parse_source, send
from objrecipe.recipe import (
    BaseType,
    FunctionType,
    SpecError,
    emit_interface_comment,
    find_managers,
    generate_class_template,
    generate_wrappers,
    lint_manager,
    parse_interface_comment,
    parse_spec_text,
    verify_dispatch,
)
from strategies import spec_texts

GS = parse_spec_text((SPECS / "gs.spec").read_text())
P3 = parse_spec_text((SPECS / "3dposn.spec").read_text())
FIG6 = (CORPUS / "fig6-gs.rkts").read_text()
FIG2 = (CORPUS / "fig2-fig3-3dposn-interface.rkts").read_text()


def sq_class():
    start = FIG6.index(";; number symbol symbol -> sq")
    end = FIG6.index(";; Reconstructed class.")
    return FIG6[start:end]


def drop_clause(text, msg, within=None):
    """Remove the one-line ``['msg ...]`` clause, optionally only inside ``within``."""
    pat = re.compile(r"^\s*\['" + re.escape(msg) + r"\s.*\n", re.M)
    if within is None:
        new, n = pat.subn("", text, count=1)
    else:
        region = text[text.index(within):]
        head = text[: text.index(within)]
        region, n = pat.subn("", region, count=1)
        new = head + region
    assert n == 1
    return new


def codes(diags, severity=None):
    return [d.code for d in diags if severity is None or d.severity == severity]


# -- parse_spec -------------------------------------------------------------------

def test_gs_spec():
    assert list(GS.interfaces["gs"].messages) == ["is-sq?", "is-rect?", "is-circ?", "area", "bigger?"]
    assert GS.interfaces["gs"].service("bigger?").result == FunctionType((BaseType("gs"),), BaseType("boolean"))
    assert GS.unions["gs"].variants == ("make-sq", "make-rect", "make-circ")
    assert list(GS.classes["make-rect"].field_names) == ["width", "length", "mode", "color"]


def test_3dposn_spec():
    i = P3.interfaces["3Dposn"]
    assert list(i.messages) == ["getx", "gety", "getz", "d2o", "d2p"]
    assert str(i.service("d2p").result) == "3Dposn -> number"
    assert P3.classes["make-3Dposn"].getter_messages == ["getx", "gety", "getz"]


def test_duplicate_message_rejected():
    with pytest.raises(SpecError) as exc:
        parse_spec_text("(define-interface gs (service area number) (service area number))")
    assert exc.value.code == "duplicate-message"


def test_single_variant_union_rejected():
    text = (SPECS / "gs.spec").read_text().replace("(make-sq make-rect make-circ)", "(make-sq)")
    with pytest.raises(SpecError, match="at least two variants"):
        parse_spec_text(text)


def test_class_with_unknown_interface_rejected():
    with pytest.raises(SpecError) as exc:
        parse_spec_text("(define-class make-a implements nope (fields (x number)))")
    assert exc.value.code == "unknown-interface"


# -- interface comment ------------------------------------------------------------

def test_gs_comment_header():
    assert emit_interface_comment(GS.interfaces["gs"]).splitlines()[0] == ";; A gs is an interface offering:"


def test_single_service_comment():
    i = parse_spec_text("(define-interface foo (service bar number))").interfaces["foo"]
    assert emit_interface_comment(i) == ";; A foo is an interface offering:\n;;  'bar: number\n"


def test_3dposn_comment():
    lines = emit_interface_comment(P3.interfaces["3Dposn"]).splitlines()
    assert len(lines) == 6
    assert lines[-1].endswith("'d2p: 3Dposn -> number")
    # messages are right-aligned on their colon
    assert len({ln.index(":") for ln in lines[1:]}) == 1


@settings(max_examples=100, deadline=None)
@given(spec_texts())
def test_comment_idempotent(text):
    i = next(iter(parse_spec_text(text).interfaces.values()))
    once = emit_interface_comment(i)
    assert emit_interface_comment(parse_interface_comment(once)) == once


# -- templates and wrappers -------------------------------------------------------

def template_clause_symbols(text):
    (site,) = find_managers(parse_source(text))
    return site.clause_symbols


def test_sq_template_clauses():
    text = generate_class_template(GS.classes["make-sq"], GS.interfaces["gs"])
    assert template_clause_symbols(text) == [
        "get-length", "get-mode", "get-color", "is-sq?", "is-rect?", "is-circ?", "area", "bigger?",
    ]
    assert '(error (format "Unknown gs service requested: ~s" m))' in text
    assert text.startswith(";; number symbol symbol -> sq\n")
    assert "(define (make-sq length mode color)" in text


def test_3dposn_template_has_helper_stub():
    text = generate_class_template(P3.classes["make-3Dposn"], P3.interfaces["3Dposn"])
    assert template_clause_symbols(text) == ["getx", "gety", "getz", "d2o", "d2p"]
    assert "(define (serve-d2p a-3dposn) ...)" in text
    assert ";; 3Dposn -> number" in text


def test_zero_field_template():
    s = parse_spec_text(
        "(define-interface unit (service ping number))"
        "(define-class make-unit implements unit (fields))"
    )
    text = generate_class_template(s.classes["make-unit"], s.interfaces["unit"])
    assert template_clause_symbols(text) == ["ping"]
    env, _ = evaluate(text)
    with pytest.raises(EvaluationError, match="template placeholder reached"):
        send(env.lookup("make-unit"), "ping")
    with pytest.raises(EvaluationError, match="Unknown unit service requested: zap"):
        send(env.lookup("make-unit"), "zap")


def test_template_placeholder_raises():
    text = generate_class_template(GS.classes["make-sq"], GS.interfaces["gs"])
    env, _ = evaluate(text)
    obj = apply_value(env.lookup("make-sq"), [1, "x", "y"])
    assert send(obj, "get-mode") == "x"
    with pytest.raises(EvaluationError, match="template placeholder reached"):
        send(obj, "area")


def test_gs_wrappers():
    text = generate_wrappers(GS.interfaces["gs"], "gs")
    assert "(define (gs-area a-gs) (a-gs 'area))" in text
    assert "(define (gs-bigger? this that) ((this 'bigger?) that))" in text
    assert "(define (gs-sq? a-gs) (a-gs 'is-sq?))" in text


def test_3dposn_wrappers():
    text = generate_wrappers(P3.interfaces["3Dposn"], "3Dposn")
    assert "(define (3Dposn-x a-3dposn) (a-3dposn 'getx))" in text
    assert "(define (dist-origin a-3dposn) (a-3dposn 'd2o))" in text
    assert "(define (3Dposn-distance this that) ((this 'd2p) that))" in text


def test_wrapper_with_several_extra_parameters():
    s = parse_spec_text("(define-interface t (service f (-> number number number)))")
    assert "(define (t-f this that-1 that-2) ((this 'f) that-1 that-2))" in generate_wrappers(s.interfaces["t"], "t")


@settings(max_examples=100, deadline=None)
@given(spec_texts())
def test_generated_text_parses(text):
    s = parse_spec_text(text)
    for i in s.interfaces.values():
        parse_source(generate_wrappers(i, i.name))
        parse_source(emit_interface_comment(i))
    for c in s.classes.values():
        parse_source(generate_class_template(c, s.interfaces[c.implements]))


@settings(max_examples=100, deadline=None)
@given(spec_texts())
def test_template_completeness_and_clause_set(text):
    s = parse_spec_text(text)
    for c in s.classes.values():
        i = s.interfaces[c.implements]
        tmpl = generate_class_template(c, i)
        diags = lint_manager(parse_source(tmpl), i, s.classes)
        assert not set(codes(diags)) & {"missing-message", "missing-else"}
        assert set(template_clause_symbols(tmpl)) == set(i.messages) | set(c.getter_messages)


def test_wrapper_soundness_on_gs_corpus():
    env, _ = evaluate(FIG6)
    objs = [env.lookup(n) for n in ("SQR1", "RECT1", "CIRC1")]
    for name in ("gs-sq?", "gs-rect?", "gs-circ?", "gs-area"):
        for o in objs:
            apply_value(env.lookup(name), [o])
    for a in objs:
        for b in objs:
            assert isinstance(apply_value(env.lookup("gs-bigger?"), [a, b]), bool)


# -- lint -------------------------------------------------------------------------

def test_sq_class_lint_clean():
    assert lint_manager(parse_source(sq_class()), GS.interfaces["gs"], GS.classes) == []


def test_sq_class_without_area():
    diags = lint_manager(parse_source(drop_clause(sq_class(), "area")), GS.interfaces["gs"], GS.classes)
    assert codes(diags) == ["missing-message"]
    assert "'area" in diags[0].message


def test_3dposn_manager_without_else():
    text = FIG2.replace("[else (error", "['move-r (error")
    assert text != FIG2
    diags = lint_manager(parse_source(text), P3.interfaces["3Dposn"], P3.classes)
    assert "missing-else" in codes(diags, "error")


def test_extra_and_shadowed_clauses_warn():
    text = sq_class().replace("['is-sq?     #true]", "['is-sq? #true] ['is-sq? #false] ['spin 1]")
    diags = lint_manager(parse_source(text), GS.interfaces["gs"], GS.classes)
    assert sorted(codes(diags, "warning")) == ["extra-message", "shadowed-clause"]
    assert codes(diags, "error") == []


def test_no_manager_found():
    diags = lint_manager(parse_source("(define (f x) x)"), GS.interfaces["gs"])
    assert [(d.severity, d.code) for d in diags] == [("warning", "no-manager-found")]


def test_getters_inferred_without_class_spec():
    # the getters are 'getx etc.; they return a class parameter directly
    text = (CORPUS / "3dposn-distance.rkts").read_text()
    diags = lint_manager(parse_source(text), P3.interfaces["3Dposn"])
    assert codes(diags) == []


# -- verify_dispatch --------------------------------------------------------------

def check_union(text):
    return verify_dispatch(parse_source(text), GS.unions["gs"], GS.interfaces["gs"], GS.classes)


def test_gs_corpus_dispatch_clean():
    assert check_union(FIG6) == []


def test_circ_without_bigger():
    diags = check_union(drop_clause(FIG6, "bigger?", within="(define (make-circ"))
    assert codes(diags) == ["missing-variant-message"]
    assert "make-circ" in diags[0].message and "'bigger?" in diags[0].message


def test_missing_constructor():
    text = FIG6.replace("(define (make-circ radius", "(define (make-oval radius")
    diags = check_union(text)
    assert "missing-constructor" in codes(diags, "error")
    assert "make-circ" in diags[0].message


def test_dynamic_check_finds_else_routed_message():
    # the clause exists but an earlier one routes the message to the error branch
    text = FIG6.replace(
        "['get-radius radius]",
        "['get-radius radius] ['get-mode (error (format \"Unknown gs service requested: ~s\" m))]",
    )
    diags = check_union(text)
    assert codes(diags) == ["missing-variant-message"]
    assert "make-circ" in diags[0].message and "'get-mode" in diags[0].message

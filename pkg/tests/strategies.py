"""Shared hypothesis strategies: reader data and well-formed specs."""

from fractions import Fraction

from hypothesis import strategies as st

from objrecipe.syntax import KEYWORDS, Datum
from objrecipe.syntax.reader import parse_number
from objrecipe.values import Symbol

# -- data -------------------------------------------------------------------------

_first = st.sampled_from("abcdefghijklmnopqrstuvwxyzABCXYZλ!$%&*/:<=>?^_~")
_rest = st.text(alphabet="abcxyz0123456789-!?*<>=/+._λ", max_size=8)
symbols = st.builds(lambda a, b: a + b, _first, _rest).filter(
    lambda s: s != "quote" and parse_number(s) is None
).map(Symbol)

atoms = st.one_of(
    st.integers(-10**30, 10**30).map(Fraction),
    st.builds(Fraction, st.integers(-1000, 1000), st.integers(1, 1000)),
    st.floats(allow_nan=False),
    st.booleans(),
    st.text(max_size=12),
    symbols,
).map(Datum)


def _quoted(d):
    return Datum((Datum(Symbol("quote")), d))


data = st.recursive(
    atoms,
    lambda children: st.one_of(
        st.lists(children, max_size=5).map(lambda xs: Datum(tuple(xs))),
        children.map(_quoted),
    ),
    max_leaves=20,
)

# -- specs ------------------------------------------------------------------------

BASE_TYPES = ["number", "symbol", "boolean", "string"]

_names = st.builds(
    lambda a, b: a + b,
    st.sampled_from("abcdefghijkmnpqrstuvwxyz"),
    st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789-?", max_size=6),
).filter(lambda s: s not in KEYWORDS and parse_number(s) is None and not s.startswith("make"))


@st.composite
def service_types(draw, iface):
    if draw(st.booleans()):
        return draw(st.sampled_from(BASE_TYPES))
    params = draw(st.lists(st.sampled_from(BASE_TYPES + [iface]), min_size=1, max_size=3))
    result = draw(st.sampled_from(BASE_TYPES))
    return f"(-> {' '.join(params)} {result})"


@st.composite
def spec_texts(draw, min_services=1, max_services=8, max_fields=4):
    """Spec text with one interface, 2 or 3 classes and a union over them."""
    iface = draw(_names)
    messages = draw(st.lists(_names, min_size=min_services, max_size=max_services, unique=True))
    lines = [f"(define-interface {iface}"]
    for msg in messages:
        lines.append(f"  (service {msg} {draw(service_types(iface))})")
    lines[-1] += ")"
    variants = draw(st.lists(_names, min_size=2, max_size=3, unique=True))
    ctors = []
    for v in variants:
        ctor = f"make-{v}"
        ctors.append(ctor)
        fields = draw(st.lists(_names, max_size=max_fields, unique=True).filter(
            lambda fs: not {f"get-{f}" for f in fs} & set(messages)
        ))
        body = " ".join(f"({f} {draw(st.sampled_from(BASE_TYPES))})" for f in fields)
        lines.append(f"(define-class {ctor} implements {iface} (fields {body}))")
    lines.append(f"(define-union {iface} ({' '.join(ctors)}))")
    return "\n".join(lines) + "\n"

"""Tokenizer, datum reader and datum printer."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from ..values import Symbol, format_number, quote_string


class TokenKind(Enum):
    OPEN = "open-paren"
    CLOSE = "close-paren"
    QUOTE = "quote-mark"
    NUMBER = "number-literal"
    STRING = "string-literal"
    BOOLEAN = "boolean-literal"
    IDENTIFIER = "identifier"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int


class SourceError(Exception):
    """A problem with program text, reported with a 1-based location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ReadError(SourceError):
    pass


Atom = Union[Fraction, float, bool, str, Symbol]

_DELIMITERS = set("()[]\";'")
_ILLEGAL = set("{}|`,")
_BOOLEANS = {"#true": True, "#t": True, "#false": False, "#f": False}
_CLOSERS = {"(": ")", "[": "]"}

_INT = re.compile(r"[+-]?\d+\Z")
_RATIO = re.compile(r"[+-]?\d+/\d+\Z")
_DECIMAL = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?\Z")
_SPECIAL_FLOATS = {"+inf.0": float("inf"), "-inf.0": float("-inf"), "+nan.0": float("nan")}


def parse_number(text: str) -> Fraction | float | None:
    """Return the number a literal denotes, or None if it is not a number."""
    if _INT.match(text):
        return Fraction(int(text))
    if _RATIO.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise ZeroDivisionError(text)
        return Fraction(int(num), int(den))
    if _DECIMAL.match(text):
        return float(text)
    return _SPECIAL_FLOATS.get(text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for c in text[i : i + k]:
            if c == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += k

    while i < n:
        c = text[i]
        if c.isspace():
            advance(1)
        elif c == ";":
            end = text.find("\n", i)
            advance((n if end < 0 else end) - i)
        elif c in "([":
            tokens.append(Token(TokenKind.OPEN, c, line, col))
            advance(1)
        elif c in ")]":
            tokens.append(Token(TokenKind.CLOSE, c, line, col))
            advance(1)
        elif c == "'":
            tokens.append(Token(TokenKind.QUOTE, c, line, col))
            advance(1)
        elif c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise ReadError("unterminated string literal", line, col)
            tokens.append(Token(TokenKind.STRING, text[i : j + 1], line, col))
            advance(j + 1 - i)
        elif c in _ILLEGAL or (not c.isprintable()):
            raise ReadError(f"illegal character {c!r}", line, col)
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMITERS:
                if text[j] in _ILLEGAL:
                    break
                j += 1
            word = text[i:j]
            tokens.append(Token(_classify_word(word, line, col), word, line, col))
            advance(j - i)
    return tokens


def _classify_word(word: str, line: int, col: int) -> TokenKind:
    if word in _BOOLEANS:
        return TokenKind.BOOLEAN
    if word.startswith("#") and not word.startswith("#:"):
        raise ReadError(f"bad syntax `{word}`", line, col)
    try:
        if parse_number(word) is not None:
            return TokenKind.NUMBER
    except ZeroDivisionError:
        raise ReadError(f"division by zero in number literal `{word}`", line, col)
    return TokenKind.IDENTIFIER


_UNESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"'}


def _unescape(tok: Token) -> str:
    body = tok.text[1:-1]
    out = []
    k = 0
    while k < len(body):
        c = body[k]
        if c == "\\":
            nxt = body[k + 1]
            if nxt not in _UNESCAPES:
                raise ReadError(f"unknown escape sequence \\{nxt}", tok.line, tok.column)
            out.append(_UNESCAPES[nxt])
            k += 2
        else:
            out.append(c)
            k += 1
    return "".join(out)


class Datum:
    """A located datum: an atom or a tuple of child datums.

    Equality is structural and ignores locations.  Atoms compare by type as
    well as value, so the exact 1, the inexact 1.0 and ``#true`` all differ.
    """

    __slots__ = ("value", "line", "column")

    def __init__(self, value: Atom | tuple["Datum", ...], line: int = 0, column: int = 0):
        self.value = value
        self.line = line
        self.column = column

    @property
    def location(self) -> tuple[int, int]:
        return (self.line, self.column)

    @property
    def is_list(self) -> bool:
        return isinstance(self.value, tuple)

    def is_symbol(self, name: str | None = None) -> bool:
        return isinstance(self.value, Symbol) and (name is None or self.value.name == name)

    def head_is(self, *names: str) -> bool:
        v = self.value
        return isinstance(v, tuple) and bool(v) and isinstance(v[0].value, Symbol) and v[0].value.name in names

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Datum):
            return NotImplemented
        a, b = self.value, other.value
        if type(a) is not type(b):
            return False
        if isinstance(a, float) and a != a:
            return b != b
        return a == b

    def __hash__(self) -> int:
        return hash((type(self.value), self.value))

    def __repr__(self) -> str:
        return f"Datum({print_datum(self)})"


def read_datum(tokens: Sequence[Token], start: int = 0) -> tuple[Datum, int]:
    """Read one datum beginning at ``tokens[start]``.

    Returns the datum and the index of the first unread token.
    """
    if start >= len(tokens):
        raise ReadError("unexpected end of input")
    tok = tokens[start]
    if tok.kind is TokenKind.OPEN:
        items = []
        k = start + 1
        while True:
            if k >= len(tokens):
                raise ReadError(f"missing closing `{_CLOSERS[tok.text]}`", tok.line, tok.column)
            if tokens[k].kind is TokenKind.CLOSE:
                if tokens[k].text != _CLOSERS[tok.text]:
                    raise ReadError(
                        f"`{tok.text}` closed by mismatched `{tokens[k].text}`",
                        tokens[k].line,
                        tokens[k].column,
                    )
                return Datum(tuple(items), tok.line, tok.column), k + 1
            item, k = read_datum(tokens, k)
            items.append(item)
    if tok.kind is TokenKind.CLOSE:
        raise ReadError(f"unexpected `{tok.text}`", tok.line, tok.column)
    if tok.kind is TokenKind.QUOTE:
        if start + 1 >= len(tokens):
            raise ReadError("expected a datum after `'`", tok.line, tok.column)
        inner, k = read_datum(tokens, start + 1)
        quote = Datum(Symbol("quote"), tok.line, tok.column)
        return Datum((quote, inner), tok.line, tok.column), k
    if tok.kind is TokenKind.NUMBER:
        return Datum(parse_number(tok.text), tok.line, tok.column), start + 1
    if tok.kind is TokenKind.STRING:
        return Datum(_unescape(tok), tok.line, tok.column), start + 1
    if tok.kind is TokenKind.BOOLEAN:
        return Datum(_BOOLEANS[tok.text], tok.line, tok.column), start + 1
    return Datum(Symbol(tok.text), tok.line, tok.column), start + 1


def read_all(text: str) -> list[Datum]:
    tokens = tokenize(text)
    data = []
    k = 0
    while k < len(tokens):
        d, k = read_datum(tokens, k)
        data.append(d)
    return data


def read_one(text: str) -> Datum:
    data = read_all(text)
    if len(data) != 1:
        raise ReadError(f"expected exactly one datum, found {len(data)}")
    return data[0]


def print_datum(d: Datum) -> str:
    v = d.value
    if isinstance(v, tuple):
        if len(v) == 2 and v[0].is_symbol("quote"):
            return "'" + print_datum(v[1])
        return "(" + " ".join(print_datum(x) for x in v) + ")"
    if isinstance(v, bool):
        return "#true" if v else "#false"
    if isinstance(v, (Fraction, float)):
        return format_number(v)
    if isinstance(v, str):
        return quote_string(v)
    return v.name

from .forms import (
    KEYWORDS,
    And,
    App,
    Check,
    Cond,
    CondClause,
    Const,
    Definition,
    Expr,
    ExprForm,
    Form,
    If,
    Lambda,
    Local,
    Match,
    MatchClause,
    Or,
    ParseError,
    Placeholder,
    Program,
    Require,
    StructDef,
    Var,
    datum_to_value,
    iter_children,
    parse_expr,
    parse_program,
    parse_source,
    walk,
)
from .reader import (
    Datum,
    ReadError,
    SourceError,
    Token,
    TokenKind,
    print_datum,
    read_all,
    read_datum,
    read_one,
    tokenize,
)

__all__ = [
    "KEYWORDS", "And", "App", "Check", "Cond", "CondClause", "Const", "Datum",
    "Definition", "Expr", "ExprForm", "Form", "If", "Lambda", "Local", "Match",
    "MatchClause", "Or", "ParseError", "Placeholder", "Program", "ReadError",
    "Require", "SourceError", "StructDef", "Token", "TokenKind", "Var",
    "datum_to_value", "iter_children", "parse_expr", "parse_program",
    "parse_source", "print_datum", "read_all", "read_datum", "read_one",
    "tokenize", "walk",
]

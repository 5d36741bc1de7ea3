from lark import Lark, Transformer, exceptions

from buchi_rl.errors import LtlSyntaxError
from buchi_rl.ltl.models import (
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    LtlFormula,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
)

# Precedence, loosest first: ->, |, &, U (right-assoc), unary (!, X, F, G).
LTL_GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction
        | disjunction _IMPLIES implication   -> implies

    ?disjunction: conjunction
        | disjunction _OR conjunction        -> or_

    ?conjunction: until
        | conjunction _AND until             -> and_

    ?until: unary
        | unary "U" until                    -> until

    ?unary: _NOT unary                       -> not_
        | "X" unary                          -> next
        | "F" unary                          -> eventually
        | "G" unary                          -> always
        | primary

    ?primary: "true"                         -> true
        | "false"                            -> false
        | NAME                               -> atom
        | "(" implication ")"

    NAME: /[a-z][a-z0-9_]*/
    _NOT: "!" | "¬"
    _AND: "&" | "∧"
    _OR: "|" | "∨"
    _IMPLIES: "->" | "→"

    %import common.WS
    %ignore WS
"""


class LtlTransformer(Transformer):
    def true(self, _):
        return TrueConst()

    def false(self, _):
        return Not(TrueConst())

    def atom(self, children):
        return Atom(str(children[0]))

    def not_(self, children):
        return Not(children[0])

    def next(self, children):
        return Next(children[0])

    def eventually(self, children):
        return Eventually(children[0])

    def always(self, children):
        return Always(children[0])

    def and_(self, children):
        return And(children[0], children[1])

    def or_(self, children):
        return Or(children[0], children[1])

    def implies(self, children):
        return Implies(children[0], children[1])

    def until(self, children):
        return Until(children[0], children[1])


parser = Lark(LTL_GRAMMAR, parser="lalr", transformer=LtlTransformer())


def parse_ltl(text: str) -> LtlFormula:
    if not text or not text.strip():
        raise LtlSyntaxError("empty formula", 0)
    try:
        return parser.parse(text)
    except exceptions.UnexpectedCharacters as exc:
        raise LtlSyntaxError(
            f"unknown token {exc.char!r}", exc.column - 1
        ) from exc
    except exceptions.UnexpectedEOF as exc:
        raise LtlSyntaxError("unexpected end of formula", len(text)) from exc
    except exceptions.UnexpectedToken as exc:
        if exc.token.type == "$END":
            raise LtlSyntaxError("unexpected end of formula", len(text)) from exc
        raise LtlSyntaxError(
            f"unexpected {exc.token.value!r}", exc.column - 1
        ) from exc


_UNARY_SYMBOLS = {Not: "!", Next: "X ", Eventually: "F ", Always: "G "}
_BINARY_SYMBOLS = {And: "&", Or: "|", Implies: "->", Until: "U"}


def _operand(f: LtlFormula, *, binary: bool) -> str:
    text = format_ltl(f)
    if isinstance(f, (TrueConst, Atom)):
        return text
    if not binary and type(f) in _UNARY_SYMBOLS:
        return text
    return f"({text})"


def format_ltl(f: LtlFormula) -> str:
    """Print `f` so that parse_ltl reproduces the same tree."""
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, Atom):
        return f.name
    if type(f) in _UNARY_SYMBOLS:
        return _UNARY_SYMBOLS[type(f)] + _operand(f.operand, binary=False)
    symbol = _BINARY_SYMBOLS[type(f)]
    return (
        f"{_operand(f.left, binary=True)} {symbol} {_operand(f.right, binary=True)}"
    )

"""Abstract syntax, parser, printer, and structural measures for the modal language.

The language has constructors ``false``, propositions, ``&``, ``|``, ``->``,
``[]`` (box), and ``<>`` (diamond).  Negation and ``true`` are sugar:
``!a`` parses to ``a -> false`` and ``true`` to ``false -> false``; they are
never AST nodes.  Identifiers starting with an uppercase letter are
metavariables, used in axiom schemas and filled in by :func:`instantiate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

__all__ = [
    "Formula", "Bottom", "Prop", "And", "Or", "Implies", "Box", "Diamond",
    "BOT", "TOP", "neg", "ParseError", "parse", "render",
    "subformula_closure", "instantiate", "modal_depth", "node_count",
    "propositions", "metavariables", "is_metavar",
]


@dataclass(frozen=True)
class Formula:
    """Base class for formula nodes."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    body: Formula


BOT = Bottom()
TOP = Implies(BOT, BOT)


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def is_metavar(name: str) -> bool:
    """Metavariables live in the uppercase-initial namespace."""
    return name[:1].isupper()


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error with byte offset and the set of expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...]):
        super().__init__(f"{message} at offset {offset} (expected {', '.join(expected)})")
        self.offset = offset
        self.expected = expected


_PUNCT = (("->", "ARROW"), ("[]", "BOX"), ("<>", "DIA"), ("|", "BAR"),
          ("&", "AMP"), ("!", "BANG"), ("(", "LPAREN"), (")", "RPAREN"))


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                yield kind, lit, i
                i += len(lit)
                break
        else:
            if c.isalpha():
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                yield "IDENT", text[i:j], i
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", i,
                                 ("identifier", "'false'", "'true'", "'('", "'[]'", "'<>'", "'!'"))
    yield "EOF", "", n


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> None:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"unexpected {tok[1]!r}" if tok[1] else "unexpected end of input",
                             tok[2], (what,))

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "ARROW":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "BAR":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "AMP":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, _, _ = self.peek()
        if kind == "BOX":
            self.take()
            return Box(self.unary())
        if kind == "DIA":
            self.take()
            return Diamond(self.unary())
        if kind == "BANG":
            self.take()
            return neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, offset = self.take()
        if kind == "IDENT":
            if value == "false":
                return BOT
            if value == "true":
                return TOP
            return Prop(value)
        if kind == "LPAREN":
            f = self.implication()
            self.expect("RPAREN", "')'")
            return f
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input",
                         offset, ("identifier", "'false'", "'true'", "'('", "'[]'", "'<>'", "'!'"))


def parse(text: str) -> Formula:
    """Parse the ASCII syntax.  Precedence: unary > ``&`` > ``|`` > ``->``,
    with ``->`` right-associative and ``&``/``|`` left-associative."""
    if not text.isascii():
        raise ParseError("non-ASCII input", 0, ("ASCII text",))
    p = _Parser(text)
    f = p.implication()
    tok = p.peek()
    if tok[0] != "EOF":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], ("end of input",))
    return f


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _emit(f: Formula) -> tuple[str, int]:
    if isinstance(f, Bottom):
        return "false", _PREC_UNARY
    if isinstance(f, Prop):
        return f.name, _PREC_UNARY
    if isinstance(f, Box):
        return "[]" + _wrap(f.body, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, Diamond):
        return "<>" + _wrap(f.body, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _PREC_AND)} & {_wrap(f.right, _PREC_UNARY)}", _PREC_AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _PREC_OR)} | {_wrap(f.right, _PREC_AND)}", _PREC_OR
    if isinstance(f, Implies):
        if f == TOP:
            return "true", _PREC_UNARY
        if f.right == BOT:
            return "!" + _wrap(f.left, _PREC_UNARY), _PREC_UNARY
        return f"{_wrap(f.left, _PREC_OR)} -> {_wrap(f.right, _PREC_IMP)}", _PREC_IMP
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    s, prec = _emit(f)
    return f"({s})" if prec < min_prec else s


def render(f: Formula) -> str:
    """Emit minimally parenthesized syntax; ``parse(render(f)) == f``."""
    return _emit(f)[0]


# ---------------------------------------------------------------------------
# Structural measures and substitution
# ---------------------------------------------------------------------------

def subformula_closure(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f``, including ``f`` itself."""
    acc: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in acc:
            continue
        acc.add(g)
        if isinstance(g, (And, Or, Implies)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, (Box, Diamond)):
            stack.append(g.body)
    return frozenset(acc)


class InstantiationError(ValueError):
    pass


def instantiate(schema: Formula, binding: Mapping[str, Formula]) -> Formula:
    """Homomorphic substitution of metavariables by formulas."""
    if isinstance(schema, Bottom):
        return schema
    if isinstance(schema, Prop):
        if is_metavar(schema.name):
            if schema.name not in binding:
                raise InstantiationError(f"unbound metavariable {schema.name}")
            return binding[schema.name]
        return schema
    if isinstance(schema, And):
        return And(instantiate(schema.left, binding), instantiate(schema.right, binding))
    if isinstance(schema, Or):
        return Or(instantiate(schema.left, binding), instantiate(schema.right, binding))
    if isinstance(schema, Implies):
        return Implies(instantiate(schema.left, binding), instantiate(schema.right, binding))
    if isinstance(schema, Box):
        return Box(instantiate(schema.body, binding))
    if isinstance(schema, Diamond):
        return Diamond(instantiate(schema.body, binding))
    raise TypeError(f"not a formula: {schema!r}")


def modal_depth(f: Formula) -> int:
    """Maximal nesting of box/diamond."""
    if isinstance(f, (Bottom, Prop)):
        return 0
    if isinstance(f, (And, Or, Implies)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)  # Box | Diamond


def node_count(f: Formula) -> int:
    if isinstance(f, (Bottom, Prop)):
        return 1
    if isinstance(f, (And, Or, Implies)):
        return 1 + node_count(f.left) + node_count(f.right)
    return 1 + node_count(f.body)


def _names(f: Formula, want_meta: bool) -> frozenset[str]:
    if isinstance(f, Prop):
        return frozenset([f.name]) if is_metavar(f.name) == want_meta else frozenset()
    if isinstance(f, (And, Or, Implies)):
        return _names(f.left, want_meta) | _names(f.right, want_meta)
    if isinstance(f, (Box, Diamond)):
        return _names(f.body, want_meta)
    return frozenset()


def propositions(f: Formula) -> tuple[str, ...]:
    """Proposition names occurring in ``f``, sorted."""
    return tuple(sorted(_names(f, want_meta=False)))


def metavariables(f: Formula) -> tuple[str, ...]:
    return tuple(sorted(_names(f, want_meta=True)))

"""Tokenizer and polynomial-expression parser shared by the ring API and the CLI."""

import re
from dataclasses import dataclass
from fractions import Fraction


class ParseError(ValueError):
    """Syntax or scoping error with a 1-based source position."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, ID, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|->|[-+*/^(),;=\[\]{}:])
    """,
    re.VERBOSE,
)


def tokenize(text):
    """Split ``text`` into NUM/ID/OP tokens with line and column."""
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "num":
            tokens.append(Token("NUM", m.group(), line, col))
        elif kind == "id":
            tokens.append(Token("ID", m.group(), line, col))
        elif kind == "op":
            tokens.append(Token("OP", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at(self, text, kind=None):
        tok = self.peek()
        return tok.text == text and (kind is None or tok.kind == kind) and tok.kind != "EOF"

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        tok = self.peek()
        if tok.text != text or tok.kind == "EOF":
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.line, tok.col)
        return self.next()

    def expect_kind(self, kind, what):
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", tok.line, tok.col)
        return self.next()


def parse_expression(stream, ring_vars, build):
    """Parse a polynomial expression from ``stream``.

    ``build`` supplies constructors: ``build.const(Fraction)`` and
    ``build.var(index)``; the results must support ``+ - *`` and integer
    powers.  Division is allowed only by nonzero rational constants.
    """
    index = {v: i for i, v in enumerate(ring_vars)}

    def expr():
        neg = False
        if stream.at("-", "OP"):
            stream.next()
            neg = True
        elif stream.at("+", "OP"):
            stream.next()
        acc = term()
        if neg:
            acc = -acc
        while stream.at("+", "OP") or stream.at("-", "OP"):
            op = stream.next().text
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while stream.at("*", "OP") or stream.at("/", "OP"):
            tok = stream.next()
            rhs = power()
            if tok.text == "*":
                acc = acc * rhs
            else:
                c = build.as_constant(rhs)
                if c is None or c == 0:
                    raise ParseError("division only by nonzero rational constants", tok.line, tok.col)
                acc = acc * build.const(1 / Fraction(c))
        return acc

    def power():
        base = atom()
        if stream.at("^", "OP") or stream.at("**", "OP"):
            stream.next()
            e = stream.peek()
            if e.kind != "NUM":
                raise ParseError("exponent must be a non-negative integer", e.line, e.col)
            stream.next()
            base = base ** int(e.text)
            if stream.at("^", "OP") or stream.at("**", "OP"):
                t2 = stream.peek()
                raise ParseError("chained exponents need parentheses", t2.line, t2.col)
        return base

    def atom():
        tok = stream.peek()
        if tok.kind == "NUM":
            stream.next()
            return build.const(Fraction(int(tok.text)))
        if tok.kind == "ID":
            if tok.text not in index:
                raise ParseError(f"unknown variable {tok.text!r}", tok.line, tok.col)
            stream.next()
            return build.var(index[tok.text])
        if stream.at("(", "OP"):
            stream.next()
            val = expr()
            stream.expect(")")
            return val
        if stream.at("-", "OP"):
            stream.next()
            return -atom()
        found = tok.text or "end of input"
        raise ParseError(f"expected a polynomial, found {found!r}", tok.line, tok.col)

    return expr()

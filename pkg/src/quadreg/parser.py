"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is ignored between tokens)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' uint)?
    base   := number | 'x[' uint ',' uint ']' | '(' expr ')'
    number := uint ('/' uint)?

Juxtaposition is rejected: ``2x[1,1]`` is an error, write ``2*x[1,1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import FrameError, PolyRing, Polynomial

MAX_EXPONENT = 1000


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


# -- AST --

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    s: int
    t: int
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


# -- tokens --

@dataclass(frozen=True)
class Token:
    kind: str  # "int", "x", one of "+-*/^(),[]", or "end"
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch == "x":
            out.append(Token("x", ch, line, col))
        elif ch in "+-*/^(),[]":
            out.append(Token(ch, ch, line, col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        i += 1
        col += 1
    out.append(Token("end", "", line, col))
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def take(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            shown = "end of input" if tok.kind == "end" else repr(tok.text)
            self.fail(f"expected {kind!r}, found {shown}")
        self.pos += 1
        return tok

    def uint(self) -> int:
        return int(self.take("int").text)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("int", "x", "("):
                self.fail("juxtaposition is not multiplication; use '*'")
            self.fail(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "*":
            self.take("*")
            node = Mul(node, self.factor())
        return node

    def factor(self):
        if self.tok.kind == "-":
            self.take("-")
            return Neg(self.factor())
        base = self.base()
        if self.tok.kind == "^":
            self.take("^")
            tok = self.tok
            e = self.uint()
            if e > MAX_EXPONENT:
                self.fail(f"exponent {e} exceeds the limit {MAX_EXPONENT}", tok)
            return Pow(base, e)
        return base

    def base(self):
        tok = self.tok
        if tok.kind == "int":
            num = self.uint()
            if self.tok.kind == "/":
                self.take("/")
                dtok = self.tok
                den = self.uint()
                if den == 0:
                    self.fail("division by zero", dtok)
                return Num(Fraction(num, den))
            return Num(Fraction(num))
        if tok.kind == "x":
            self.take("x")
            self.take("[")
            s = self.uint()
            self.take(",")
            t = self.uint()
            self.take("]")
            return Var(s, t, tok.line, tok.col)
        if tok.kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        shown = "end of input" if tok.kind == "end" else repr(tok.text)
        self.fail(f"expected a number, variable or '(', found {shown}")


def parse_expr(src: str):
    """Parse ``src`` into an AST."""
    return _Parser(src).parse()


def evaluate_ast(node, ring: PolyRing) -> Polynomial:
    if isinstance(node, Num):
        c = node.value
        if ring.field.characteristic and c.denominator % ring.field.characteristic == 0:
            raise ZeroDivisionError(f"{c} has no image in {ring.field.label}")
        return ring.constant(c)
    if isinstance(node, Var):
        frame = ring.frame
        if not (1 <= node.s <= frame.n and 1 <= node.t <= frame.m):
            raise ParseError(
                f"x[{node.s},{node.t}] is outside the frame n={frame.n}, m={frame.m}", node.line, node.col
            )
        return ring.var(node.s, node.t)
    if isinstance(node, (Add, Sub)):
        # walk the left spine iteratively so long sums do not recurse deeply
        spine = []
        while isinstance(node, (Add, Sub)):
            spine.append(node)
            node = node.left
        acc = evaluate_ast(node, ring)
        for op in reversed(spine):
            rhs = evaluate_ast(op.right, ring)
            acc = acc + rhs if isinstance(op, Add) else acc - rhs
        return acc
    if isinstance(node, Neg):
        return -evaluate_ast(node.operand, ring)
    if isinstance(node, Mul):
        return evaluate_ast(node.left, ring) * evaluate_ast(node.right, ring)
    if isinstance(node, Pow):
        return evaluate_ast(node.base, ring) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(src: str, ring: PolyRing) -> Polynomial:
    try:
        return evaluate_ast(parse_expr(src), ring)
    except FrameError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def parse_lines(text: str, ring: PolyRing) -> list[Polynomial]:
    """One polynomial per non-blank line; ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        try:
            out.append(parse_poly(body, ring))
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[1], lineno, exc.col) from None
    return out

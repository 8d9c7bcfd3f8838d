"""Parser for noncommutative polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '.') factor)*
    factor := atom ['^' INT]
    atom   := VAR | INT | '(' expr ')' | '[' expr ',' expr ']'
            | 'S' '(' INT ';' expr (',' expr)* ')'
    VAR    := 'x' INT

'.' is accepted as a product so that canonical renderings such as
``2*x1.x2 + x3`` parse back.  Integers act only as scalars; a nonzero
constant is rejected because the algebra has no unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from .freealg import Poly, commutator
from .symmetric import MAX_SYM_ARITY, sym


class ExprError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Comm:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sym:
    d: int
    args: Tuple["Node", ...]


Node = Union[Var, Int, BinOp, Pow, Comm, Sym]

_TOKEN = re.compile(r"\s*(?:x(\d+)|(\d+)|(S)|([-+*.^()\[\],;]))")


def tokenize(text: str) -> List[Tuple[str, object, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprError(f"unknown symbol {text[bad]!r}", bad)
        start = pos + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1) is not None:
            out.append(("VAR", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("INT", int(m.group(2)), start))
        elif m.group(3) is not None:
            out.append(("S", "S", start))
        else:
            out.append((m.group(4), m.group(4), start))
        pos = m.end()
    out.append(("EOF", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        if not text.strip():
            raise ExprError("empty expression", 0)
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "EOF" else repr(tok[1])
            raise ExprError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise ExprError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] in ("*", "."):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("INT")
            if tok[1] < 1:
                raise ExprError("powers must be at least 1", tok[2])
            node = Pow(node, tok[1])
        return node

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "VAR":
            self.take()
            if val < 1:
                raise ExprError(f"unknown symbol x{val}", pos)
            return Var(val)
        if kind == "INT":
            self.take()
            return Int(val)
        if kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "[":
            self.take()
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            return Comm(a, b)
        if kind == "S":
            self.take()
            self.take("(")
            d_tok = self.take("INT")
            self.take(";")
            args = [self.expr()]
            while self.peek()[0] == ",":
                self.take()
                args.append(self.expr())
            self.take(")")
            if d_tok[1] != len(args):
                raise ExprError(f"S({d_tok[1]}; ...) given {len(args)} arguments", d_tok[2])
            if not 1 <= d_tok[1] <= MAX_SYM_ARITY:
                raise ExprError(f"S arity must lie in 1..{MAX_SYM_ARITY}", d_tok[2])
            return Sym(d_tok[1], tuple(args))
        what = "end of input" if kind == "EOF" else repr(val)
        raise ExprError(f"unexpected {what}", pos)


def parse_expr(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(node: Node, p: int) -> Poly:
    val = _eval(node, p)
    if isinstance(val, int):
        if val % p:
            raise ExprError("a nonzero constant is not an element of the nonunital algebra")
        return Poly.zero(p)
    return val


def _eval(node: Node, p: int):
    if isinstance(node, Var):
        return Poly.var(node.index, p)
    if isinstance(node, Int):
        return node.value % p
    if isinstance(node, BinOp):
        a, b = _eval(node.left, p), _eval(node.right, p)
        if node.op == "*":
            if isinstance(a, int) and isinstance(b, int):
                return a * b % p
            return a * b
        if isinstance(a, int) != isinstance(b, int):
            raise ExprError("integers may only appear as scalar multipliers")
        if isinstance(a, int):
            return (a + b if node.op == "+" else a - b) % p
        return a + b if node.op == "+" else a - b
    if isinstance(node, Pow):
        a = _eval(node.base, p)
        return pow(a, node.exp, p) if isinstance(a, int) else a ** node.exp
    if isinstance(node, Comm):
        a, b = _eval(node.left, p), _eval(node.right, p)
        if isinstance(a, int) or isinstance(b, int):
            raise ExprError("commutator arguments must be polynomials")
        return commutator(a, b)
    if isinstance(node, Sym):
        args = [_eval(a, p) for a in node.args]
        if any(isinstance(a, int) for a in args):
            raise ExprError("S arguments must be polynomials")
        return sym(args)
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(text: str, p: int) -> Poly:
    return evaluate(parse_expr(text), p)


_PREC = {"+": 1, "-": 1, "*": 2}


def render_expr(node: Node) -> str:
    """Text that parses back to an identical tree."""
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Int):
        return str(node.value)
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left = render_expr(node.left)
        if isinstance(node.left, BinOp) and _PREC[node.left.op] < prec:
            left = f"({left})"
        right = render_expr(node.right)
        if isinstance(node.right, BinOp) and _PREC[node.right.op] <= prec:
            right = f"({right})"
        sep = "*" if node.op == "*" else f" {node.op} "
        return f"{left}{sep}{right}"
    if isinstance(node, Pow):
        base = render_expr(node.base)
        if isinstance(node.base, (BinOp, Pow)):
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, Comm):
        return f"[{render_expr(node.left)}, {render_expr(node.right)}]"
    if isinstance(node, Sym):
        return f"S({node.d}; " + ", ".join(render_expr(a) for a in node.args) + ")"
    raise TypeError(f"not an expression node: {node!r}")

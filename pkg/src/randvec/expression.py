"""A tiny recursive-descent parser for single-variable expressions in ``x``.

Grammar (``^`` binds tighter than unary minus and is right-associative)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'x' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Pi, Neg, BinOp, Call]


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            start = pos + len(source[pos:]) - len(source[pos:].lstrip())
            raise ExpressionError(f"unexpected character {source[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _is_op(self, *ops):
        kind, text, _ = self.tok
        return kind == "op" and text in ops

    def _expect(self, op):
        kind, text, pos = self.tok
        if kind != "op" or text != op:
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionError(f"expected {op!r}, found {found}", pos)
        self.i += 1

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.tok
        if kind != "end":
            raise ExpressionError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op("+", "-"):
            op = self._take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is_op("*", "/"):
            op = self._take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self._is_op("-"):
            self._take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._is_op("^"):
            self._take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, text, pos = self._take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text == "pi":
                return Pi()
            if text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(text, arg)
            raise ExpressionError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self._expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionError(f"unexpected {found}", pos)


def parse(source: str) -> Node:
    if not source or not source.strip():
        raise ExpressionError("empty expression", 0)
    return _Parser(source).parse()


def evaluate(node: Node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Pi):
        return np.pi
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, x))
    a = evaluate(node.left, x)
    b = evaluate(node.right, x)
    with np.errstate(all="ignore"):
        if node.op == "+":
            return np.add(a, b)
        if node.op == "-":
            return np.subtract(a, b)
        if node.op == "*":
            return np.multiply(a, b)
        if node.op == "/":
            return np.divide(np.asarray(a, dtype=float), b)
        return np.power(np.asarray(a, dtype=float), b)


def pretty(node: Node) -> str:
    """Fully parenthesised source that parses back to the same tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    return f"({pretty(node.left)} {node.op} {pretty(node.right)})"


@dataclass(frozen=True)
class Expression:
    source: str
    tree: Node

    def __call__(self, x):
        with np.errstate(all="ignore"):
            v = evaluate(self.tree, np.asarray(x, dtype=float))
        v = np.asarray(v, dtype=float)
        if np.ndim(x) == 0:
            return float(v)
        return np.broadcast_to(v, np.shape(x)).copy()


def parse_expression(source: str) -> Expression:
    return Expression(source, parse(source))

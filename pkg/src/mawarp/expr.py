"""Arithmetic expression language for curvature prescriptions K(x, y, z).

Grammar (infix, ^ right-associative and binding tighter than unary minus):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | 'y' | 'z' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := exp | log | sin | cos | sinh | cosh | sqrt

Evaluation goes through :mod:`mawarp.scalars`, so an expression evaluates on
floats, numpy grids and truncated power series alike.  Differentiation is
symbolic on the AST with constant folding, which keeps derivative trees small
and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import scalars as sc
from .errors import ExpressionError

VARIABLES = ("x", "y", "z")
FUNCTION_NAMES = tuple(sc.FUNCTIONS)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str                      # + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Fun:
    name: str
    arg: "Node"


Node = Union[Num, Var, Neg, Bin, Fun]


# -- tokenizer ----------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str      # num | name | op | lparen | rparen | end
    text: str
    pos: int


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                float(text[i:j])
            except ValueError:
                raise ExpressionError(f"bad number {text[i:j]!r}", pos=i)
            tokens.append(_Token("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", pos=i)
    tokens.append(_Token("end", "", n))
    return tokens


# -- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.k = 0

    def peek(self) -> _Token:
        return self.tokens[self.k]

    def take(self) -> _Token:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ExpressionError(f"expected {want!r}, found {tok.text or 'end'!r}",
                                  pos=tok.pos)
        return self.take()

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = Bin(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            return Bin("^", base, self.factor())
        return base

    def atom(self) -> Node:
        tok = self.take()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in FUNCTION_NAMES:
                self.expect("lparen")
                arg = self.expr()
                self.expect("rparen")
                return Fun(tok.text, arg)
            raise ExpressionError(f"unknown name {tok.text!r}", pos=tok.pos)
        if tok.kind == "lparen":
            node = self.expr()
            self.expect("rparen")
            return node
        raise ExpressionError(f"unexpected token {tok.text or 'end'!r}", pos=tok.pos)


def parse_expression(text: str) -> Node:
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    end = parser.peek()
    if end.kind != "end":
        raise ExpressionError(f"trailing input {end.text!r}", pos=end.pos)
    return node


# -- evaluation -------------------------------------------------------------------

def evaluate(node: Node, x, y, z):
    env = {"x": x, "y": y, "z": z}
    return _eval(node, env)


def _eval(node: Node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Fun):
        return sc.FUNCTIONS[node.name](_eval(node.arg, env))
    left = _eval(node.left, env)
    right = _eval(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    if node.op == "^":
        if isinstance(node.right, Num) and float(node.right.value).is_integer():
            return sc.powi(left, int(node.right.value))
        return sc.exp(right * sc.log(left))
    raise ExpressionError(f"unknown operator {node.op!r}")


# -- symbolic differentiation -------------------------------------------------------

def _is_const(node: Node, value=None) -> bool:
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if _is_const(a) and _is_const(b):
        return Num(a.value + b.value)
    return Bin("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_const(b, 0.0):
        return a
    if _is_const(a) and _is_const(b):
        return Num(a.value - b.value)
    if _is_const(a, 0.0):
        return Neg(b)
    return Bin("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Num(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b):
        return Num(a.value * b.value)
    return Bin("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0):
        return Num(0.0)
    if _is_const(b, 1.0):
        return a
    return Bin("/", a, b)


_DERIVATIVE_RULES = {
    "exp": lambda arg: Fun("exp", arg),
    "log": lambda arg: _div(Num(1.0), arg),
    "sin": lambda arg: Fun("cos", arg),
    "cos": lambda arg: Neg(Fun("sin", arg)),
    "sinh": lambda arg: Fun("cosh", arg),
    "cosh": lambda arg: Fun("sinh", arg),
    "sqrt": lambda arg: _div(Num(0.5), Fun("sqrt", arg)),
}


def differentiate(node: Node, var: str) -> Node:
    """Exact partial derivative of the AST with respect to x, y or z."""
    if var not in VARIABLES:
        raise ExpressionError(f"cannot differentiate in {var!r}")
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0 if node.name == var else 0.0)
    if isinstance(node, Neg):
        inner = differentiate(node.arg, var)
        return Num(0.0) if _is_const(inner, 0.0) else _sub(Num(0.0), inner)
    if isinstance(node, Fun):
        outer = _DERIVATIVE_RULES[node.name](node.arg)
        return _mul(outer, differentiate(node.arg, var))
    da = differentiate(node.left, var)
    db = differentiate(node.right, var)
    if node.op == "+":
        return _add(da, db)
    if node.op == "-":
        return _sub(da, db)
    if node.op == "*":
        return _add(_mul(da, node.right), _mul(node.left, db))
    if node.op == "/":
        num = _sub(_mul(da, node.right), _mul(node.left, db))
        return _div(num, _mul(node.right, node.right))
    if node.op == "^":
        if isinstance(node.right, Num):
            expo = node.right.value
            down = Bin("^", node.left, Num(expo - 1.0))
            return _mul(_mul(Num(expo), down), da)
        # general power a^b = exp(b log a)
        as_exp = Fun("exp", _mul(node.right, Fun("log", node.left)))
        inner = _add(_mul(db, Fun("log", node.left)),
                     _div(_mul(node.right, da), node.left))
        return _mul(as_exp, inner)
    raise ExpressionError(f"unknown operator {node.op!r}")


def to_text(node: Node) -> str:
    """Re-serialize an AST (fully parenthesized; parses back to itself)."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, Fun):
        return f"{node.name}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"

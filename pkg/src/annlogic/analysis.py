"""Hypothesis handling and inspection aids: a propositional-logic parser,
conversion to minterm bit vectors, confusion-matrix comparison of
expressions, and trend grids over one or two attributes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .encoding import FuzzifiedObject, minterm_transform
from .logiccode import BitTensor, LogicExpressionBits, ScalingParams, approx_forward


class HypothesisSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


class UnknownAttributeError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "HypothesisAst"


@dataclass(frozen=True)
class And:
    left: "HypothesisAst"
    right: "HypothesisAst"


@dataclass(frozen=True)
class Or:
    left: "HypothesisAst"
    right: "HypothesisAst"


@dataclass(frozen=True)
class Xor:
    left: "HypothesisAst"
    right: "HypothesisAst"


HypothesisAst = Union[Atom, Not, And, Or, Xor]

_KEYWORDS = {"and": "and", "or": "or", "xor": "xor", "not": "not",
             "&": "and", "|": "or", "!": "not", "~": "not"}


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()&|!~":
            tokens.append(c)
            i += 1
        elif c.isalnum() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise HypothesisSyntaxError(f"unexpected character {c!r}", len(tokens) + 1)
    return tokens


class _Parser:
    """expr := term (('or'|'xor') term)* ; term := factor ('and' factor)* ;
    factor := 'not' factor | '(' expr ')' | atom.  Keywords are
    case-insensitive; '!', '&', '|' are aliases."""

    def __init__(self, tokens: list[str], names: list[str]):
        self.tokens = tokens
        self.names = names
        self.pos = 0

    def _kind(self, token: str) -> str | None:
        return _KEYWORDS.get(token.lower())

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise HypothesisSyntaxError("unexpected end of input", self.pos + 1)
        self.pos += 1
        return tok

    def parse(self) -> HypothesisAst:
        ast = self.expr()
        if self.peek() is not None:
            raise HypothesisSyntaxError(
                f"unexpected token {self.peek()!r}", self.pos + 1
            )
        return ast

    def expr(self) -> HypothesisAst:
        node = self.term()
        while self.peek() is not None and self._kind(self.peek()) in ("or", "xor"):
            op = self._kind(self.take())
            rhs = self.term()
            node = Or(node, rhs) if op == "or" else Xor(node, rhs)
        return node

    def term(self) -> HypothesisAst:
        node = self.factor()
        while self.peek() is not None and self._kind(self.peek()) == "and":
            self.take()
            node = And(node, self.factor())
        return node

    def factor(self) -> HypothesisAst:
        tok = self.peek()
        if tok is None:
            raise HypothesisSyntaxError("unexpected end of input", self.pos + 1)
        if self._kind(tok) == "not":
            self.take()
            return Not(self.factor())
        if tok == "(":
            self.take()
            node = self.expr()
            if self.peek() != ")":
                raise HypothesisSyntaxError("expected ')'", self.pos + 1)
            self.take()
            return node
        if tok == ")" or self._kind(tok) is not None:
            raise HypothesisSyntaxError(f"unexpected token {tok!r}", self.pos + 1)
        self.take()
        if tok not in self.names:
            raise UnknownAttributeError(
                f"unknown attribute {tok!r}; known: {', '.join(self.names)}"
            )
        return Atom(tok)


def parse_hypothesis(text: str, names: list[str]) -> HypothesisAst:
    return _Parser(_tokenize(text), list(names)).parse()


def _eval_bool(ast: HypothesisAst, assignment: dict[str, bool]) -> bool:
    if isinstance(ast, Atom):
        return assignment[ast.name]
    if isinstance(ast, Not):
        return not _eval_bool(ast.child, assignment)
    if isinstance(ast, And):
        return _eval_bool(ast.left, assignment) and _eval_bool(ast.right, assignment)
    if isinstance(ast, Or):
        return _eval_bool(ast.left, assignment) or _eval_bool(ast.right, assignment)
    if isinstance(ast, Xor):
        return _eval_bool(ast.left, assignment) != _eval_bool(ast.right, assignment)
    raise TypeError(f"not an AST node: {ast!r}")


def ast_to_minterms(ast: HypothesisAst, names: list[str]) -> LogicExpressionBits:
    """Truth-table the formula over all 2^n assignments (attribute 1 on
    the most significant index bit)."""
    n = len(names)
    bits = []
    for k in range(2**n):
        assignment = {
            name: bool((k >> (n - 1 - j)) & 1) for j, name in enumerate(names)
        }
        bits.append(int(_eval_bool(ast, assignment)))
    return LogicExpressionBits(tuple(bits), n)


@dataclass(frozen=True)
class ComparisonMetrics:
    v11: int
    v10: int
    v01: int
    v00: int
    accuracy: float
    precision: float
    recall: float
    precision_degenerate: bool
    recall_degenerate: bool
    implies_forward: bool
    implies_backward: bool
    equivalent: bool


def compare(e: LogicExpressionBits, h: LogicExpressionBits) -> ComparisonMetrics:
    """Confusion-matrix counts over active/inactive minterm sets.
    v10 counts minterms active in e but not in h; forward implication
    (e implies h) holds iff v10 = 0."""
    if e.n != h.n:
        raise ValueError("attribute count mismatch")
    size = 2**e.n
    ea, ha = e.active_set(), h.active_set()
    v11 = len(ea & ha)
    v10 = len(ea - ha)
    v01 = len(ha - ea)
    v00 = size - v11 - v10 - v01
    accuracy = (v11 + v00) / size
    precision_degenerate = v11 + v01 == 0
    recall_degenerate = v11 + v10 == 0
    precision = 0.0 if precision_degenerate else v11 / (v11 + v01)
    recall = 0.0 if recall_degenerate else v11 / (v11 + v10)
    return ComparisonMetrics(
        v11, v10, v01, v00, accuracy, precision, recall,
        precision_degenerate, recall_degenerate,
        implies_forward=v10 == 0,
        implies_backward=v01 == 0,
        equivalent=accuracy == 1.0,
    )


@dataclass(frozen=True)
class TrendGrid:
    varied: tuple[int, ...]
    axis: tuple[float, ...]
    fixed: tuple[float, ...]
    levels: tuple[int, ...]
    values: np.ndarray  # shape (res,) for one varied attribute, (res, res) for two


def trend_grid(
    bt: BitTensor,
    params: ScalingParams,
    vary: list[int],
    fixed: dict[int, float] | None = None,
    levels: list[int] | None = None,
    resolution: int = 21,
) -> TrendGrid:
    """Evaluate the level-restricted approximation over a uniform [0,1]
    grid of one or two varied attributes; the rest sit at fixed degrees
    (default 0.5)."""
    n = bt.n
    if not 1 <= len(vary) <= 2 or len(set(vary)) != len(vary):
        raise ValueError("vary must name one or two distinct attributes")
    if any(not 0 <= j < n for j in vary):
        raise ValueError("varied attribute index out of range")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    fixed = fixed or {}
    base = [float(fixed.get(j, 0.5)) for j in range(n)]
    if levels is None:
        levels = list(range(bt.bcl_max + 1))
    axis = np.linspace(0.0, 1.0, resolution)

    def value_at(degrees):
        mt = minterm_transform(FuzzifiedObject(tuple(degrees)))
        return approx_forward(bt, mt, levels)

    if len(vary) == 1:
        values = np.empty(resolution)
        for ia, a in enumerate(axis):
            d = list(base)
            d[vary[0]] = a
            values[ia] = value_at(d)
    else:
        values = np.empty((resolution, resolution))
        for ia, a in enumerate(axis):
            for ib, b in enumerate(axis):
                d = list(base)
                d[vary[0]] = a
                d[vary[1]] = b
                values[ia, ib] = value_at(d)
    return TrendGrid(tuple(vary), tuple(axis), tuple(base), tuple(levels), values)

"""Binary logic trees over minterm bit vectors.

A tree is just another representation of an expression's active-minterm
set: it is induced like a decision tree from the 2^n (bit code, active?)
rows, but evaluated by summing, over all paths to active leaves, the
products of the degrees (solid edge) or their complements (dashed edge).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .encoding import FuzzifiedObject
from .logiccode import LogicExpressionBits


@dataclass(frozen=True)
class Leaf:
    active: bool


@dataclass(frozen=True)
class Split:
    attribute: int  # 0-based
    low: "QldtNode"  # negated branch
    high: "QldtNode"  # non-negated branch


QldtNode = Union[Leaf, Split]


def _entropy(pos: int, total: int) -> float:
    if total == 0 or pos in (0, total):
        return 0.0
    p = pos / total
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def build_qldt(e: LogicExpressionBits, names: list[str] | None = None) -> QldtNode:
    """Induce a lossless tree from the expression's truth table.  Splits
    maximize information gain, ties go to the lowest attribute index;
    pure subtrees and splits with identical children collapse."""
    n = e.n
    rows = [(k, e.active[k]) for k in range(2**n)]
    return _grow(rows, n, frozenset())


def _grow(rows, n, used) -> QldtNode:
    labels = [y for _, y in rows]
    pos = sum(labels)
    if pos == 0:
        return Leaf(False)
    if pos == len(rows):
        return Leaf(True)
    base = _entropy(pos, len(rows))
    best_gain, best_attr = -1.0, -1
    for j in range(n):
        if j in used:
            continue
        lo = [(k, y) for k, y in rows if not (k >> (n - 1 - j)) & 1]
        hi = [(k, y) for k, y in rows if (k >> (n - 1 - j)) & 1]
        gain = base
        for part in (lo, hi):
            gain -= len(part) / len(rows) * _entropy(sum(y for _, y in part), len(part))
        if gain > best_gain + 1e-12:
            best_gain, best_attr = gain, j
    j = best_attr
    lo = _grow([(k, y) for k, y in rows if not (k >> (n - 1 - j)) & 1], n, used | {j})
    hi = _grow([(k, y) for k, y in rows if (k >> (n - 1 - j)) & 1], n, used | {j})
    if lo == hi:
        return lo
    return Split(j, lo, hi)


def eval_qldt(t: QldtNode, f: FuzzifiedObject) -> float:
    """Sum over root-to-active-leaf paths of the product of edge degrees
    (high edge: m_j, low edge: 1 - m_j)."""
    if isinstance(t, Leaf):
        return 1.0 if t.active else 0.0
    if t.attribute >= f.arity:
        raise ValueError(f"attribute index {t.attribute} out of range")
    m = f.degrees[t.attribute]
    return (1.0 - m) * eval_qldt(t.low, f) + m * eval_qldt(t.high, f)


def render(t: QldtNode, names: list[str] | None = None, format: str = "dot") -> str:
    """Deterministic text rendering; dashed (DOT) or '~'-prefixed (ASCII)
    low edges, solid/plain high edges, low before high."""
    if format == "dot":
        return _render_dot(t, names)
    if format == "ascii":
        return _render_ascii(t, names)
    raise ValueError(f"unknown render format {format!r}")


def _name(j: int, names) -> str:
    return names[j] if names else f"a{j + 1}"


def _render_dot(t: QldtNode, names) -> str:
    lines = ["digraph qldt {"]
    counter = [0]

    def emit(node) -> int:
        nid = counter[0]
        counter[0] += 1
        if isinstance(node, Leaf):
            label = "active" if node.active else "inactive"
            lines.append(f'  n{nid} [label="{label}", shape=box];')
        else:
            lines.append(f'  n{nid} [label="{_name(node.attribute, names)}"];')
            low_id = emit(node.low)
            high_id = emit(node.high)
            lines.append(f"  n{nid} -> n{low_id} [style=dashed];")
            lines.append(f"  n{nid} -> n{high_id} [style=solid];")
        return nid

    emit(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _render_ascii(t: QldtNode, names) -> str:
    lines = []

    def emit(node, prefix: str, indent: int):
        pad = "  " * indent
        if isinstance(node, Leaf):
            lines.append(f"{pad}{prefix}{'active' if node.active else 'inactive'}")
            return
        lines.append(f"{pad}{prefix}{_name(node.attribute, names)}")
        emit(node.low, "~", indent + 1)
        emit(node.high, "", indent + 1)

    emit(t, "", 0)
    return "\n".join(lines) + "\n"

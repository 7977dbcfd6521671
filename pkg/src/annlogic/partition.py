"""Partition cells of the network: cell numbering from ReLU status,
dataset partition reports, exact per-cell linear minterm-weight maps,
composition from single-active-node cells, and Shapley attribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import MintermVector
from .network import ReluStatus, SimpleAnn, relu_status


@dataclass(frozen=True)
class CellId:
    """Cell number p in [0, 2^l); bit m of p (MSB-first) is the status of
    ReLU node m."""

    p: int
    l: int

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("need at least one ReLU node")
        if not 0 <= self.p < 2**self.l:
            raise ValueError(f"cell number {self.p} out of range for l={self.l}")

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.p >> (self.l - 1 - m)) & 1 for m in range(self.l))

    def __str__(self):
        return f"ANN_{self.p}"


@dataclass(frozen=True)
class CellWeights:
    """The 2^n real minterm weights of one cell's exact linear map."""

    weights: tuple[float, ...]
    cell: CellId | None = None

    def __post_init__(self):
        k = len(self.weights)
        if k == 0 or k & (k - 1):
            raise ValueError("weight vector length must be a power of two")
        if not all(math.isfinite(w) for w in self.weights):
            raise ValueError("weights must be finite")

    @property
    def n(self) -> int:
        return len(self.weights).bit_length() - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class CellReportRow:
    cell: CellId
    count_label1: int
    count_label0: int

    @property
    def total(self) -> int:
        return self.count_label1 + self.count_label0


@dataclass(frozen=True)
class PartitionReport:
    rows: tuple[CellReportRow, ...]

    @property
    def total(self) -> int:
        return sum(r.total for r in self.rows)


@dataclass(frozen=True)
class ShapleyResult:
    values: tuple[float, ...]


def cell_number(status: ReluStatus) -> CellId:
    """Pack the status bits MSB-first into the cell number."""
    bits = status.bits
    if not bits:
        raise ValueError("empty ReLU status")
    p = 0
    for b in bits:
        p = (p << 1) | b
    return CellId(p, len(bits))


def partition_dataset(
    ann: SimpleAnn, samples: list[tuple[MintermVector, int]]
) -> PartitionReport:
    """Assign every sample to its cell; report non-empty cells sorted by
    descending total count (ties by cell number)."""
    counts: dict[int, list[int]] = {}
    for mt, y in samples:
        p = cell_number(relu_status(ann, mt)).p
        counts.setdefault(p, [0, 0])[1 - y] += 1
    rows = [
        CellReportRow(CellId(p, ann.relu_count), c1, c0)
        for p, (c1, c0) in counts.items()
    ]
    rows.sort(key=lambda r: (-r.total, r.cell.p))
    return PartitionReport(tuple(rows))


def extract_cell_weights(ann: SimpleAnn, cell: CellId) -> CellWeights:
    """Exact linear map of the reduced network: ReLU node m becomes
    multiplication by status bit m.  Evaluated on all standard basis
    vectors at once."""
    if cell.l != ann.relu_count:
        raise ValueError(
            f"cell width {cell.l} does not match ReLU count {ann.relu_count}"
        )
    h = np.eye(ann.input_size)
    for w in ann.pre_layers:
        h = w @ h
    h = np.asarray(cell.bits, dtype=float)[:, None] * h
    for w in ann.post_layers:
        h = w @ h
    return CellWeights(tuple(float(v) for v in h[0]), cell)


def compose_cell_weights(singles: list[CellWeights], cell: CellId) -> CellWeights:
    """Sum the weights of the single-active-node cells whose node is
    active in `cell`; cell 0 is the zero map."""
    by_cell = {}
    for cw in singles:
        if cw.cell is None or bin(cw.cell.p).count("1") != 1:
            raise ValueError("singles must carry single-active-node cell ids")
        by_cell[cw.cell.p] = cw
    size = len(singles[0].weights) if singles else None
    total = None
    for m in range(cell.l):
        if not cell.bits[m]:
            continue
        p = 1 << (cell.l - 1 - m)
        if p not in by_cell:
            raise ValueError(f"missing single-node cell {p}")
        w = by_cell[p].as_array()
        total = w if total is None else total + w
    if total is None:
        if size is None:
            raise ValueError("cannot size cell 0 weights without any singles")
        total = np.zeros(size)
    return CellWeights(tuple(float(v) for v in total), cell)


def shapley(cw: CellWeights, n: int | None = None) -> ShapleyResult:
    """Exact Shapley values of the attributes under the coalition value
    v(S) = weight of the minterm whose non-negated attributes are S."""
    if n is None:
        n = cw.n
    if len(cw.weights) != 2**n:
        raise ValueError("weight length must be 2^n")
    w = cw.as_array()

    def minterm_of(subset_mask: int) -> int:
        # subset bit j (0-based attribute) -> index bit n-1-j (MSB-first)
        k = 0
        for j in range(n):
            if subset_mask >> j & 1:
                k |= 1 << (n - 1 - j)
        return k

    fact = [math.factorial(m) for m in range(n + 1)]
    values = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        sh = 0.0
        for mask in range(1 << (n - 1)):
            s = 0
            size = 0
            for idx, j in enumerate(others):
                if mask >> idx & 1:
                    s |= 1 << j
                    size += 1
            coef = fact[n - 1 - size] * fact[size] / fact[n]
            sh += coef * (w[minterm_of(s | (1 << i))] - w[minterm_of(s)])
        values.append(float(sh))
    return ShapleyResult(tuple(values))

"""From cell weights to logic: scaling onto [0,1], fixed-depth binary
codes, per-level logic expressions, arithmetic expression evaluation,
energy accounting, level-restricted accuracy, and attribute projection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import MintermVector
from .partition import CellId, CellWeights

DEFAULT_BCL_MAX = 3


@dataclass(frozen=True)
class ScalingParams:
    """Affine map f(x) = (x - min)/(max - min); constant 1 when min == max."""

    min: float
    max: float
    scaled_threshold: float

    def apply(self, x):
        if self.max == self.min:
            return np.ones_like(np.asarray(x, dtype=float))
        return (np.asarray(x, dtype=float) - self.min) / (self.max - self.min)


@dataclass(frozen=True)
class ScaledCellWeights:
    weights: tuple[float, ...]
    params: ScalingParams
    cell: CellId | None = None

    def __post_init__(self):
        if any(not (0.0 <= w <= 1.0) for w in self.weights):
            raise ValueError("scaled weights must lie in [0,1]")

    @property
    def n(self) -> int:
        return len(self.weights).bit_length() - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class BitTensor:
    """bits[bcl][k]: the 2^-bcl digit of the rounded scaled weight of
    minterm k, for bcl = 0 .. bcl_max."""

    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        widths = {len(row) for row in self.bits}
        if len(widths) != 1:
            raise ValueError("ragged bit tensor")

    @property
    def bcl_max(self) -> int:
        return len(self.bits) - 1

    @property
    def n(self) -> int:
        return len(self.bits[0]).bit_length() - 1

    def reconstruction(self) -> np.ndarray:
        levels = np.array([2.0**-bcl for bcl in range(len(self.bits))])
        return levels @ np.asarray(self.bits, dtype=float)


@dataclass(frozen=True)
class LogicExpressionBits:
    """A logic expression as its set of active minterms."""

    active: tuple[int, ...]
    n: int

    def __post_init__(self):
        if len(self.active) != 2**self.n:
            raise ValueError("bit vector length must be 2^n")
        if any(b not in (0, 1) for b in self.active):
            raise ValueError("bits must be 0 or 1")

    def complement(self) -> "LogicExpressionBits":
        return LogicExpressionBits(tuple(1 - b for b in self.active), self.n)

    def active_set(self) -> set[int]:
        return {k for k, b in enumerate(self.active) if b}


@dataclass(frozen=True)
class LevelEnergy:
    bcl: int
    set_bits: int
    absolute: float
    relative_percent: float


@dataclass(frozen=True)
class EnergyReport:
    weight_sum: float
    levels: tuple[LevelEnergy, ...]
    bitcode_sum: float
    degenerate: bool = False


def scale_weights(
    cells: list[CellWeights], threshold: float, scope: str = "joint"
) -> list[ScaledCellWeights]:
    """Scale minterm weights onto [0,1].  'joint' scope (the default over
    the supplied cells) shares one min/max; 'per-cell' scales each cell by
    its own extremes."""
    if not cells:
        raise ValueError("no cells to scale")
    if scope not in ("joint", "per-cell"):
        raise ValueError(f"unknown scaling scope {scope!r}")

    def scale_one(cw: CellWeights, lo: float, hi: float) -> ScaledCellWeights:
        params = ScalingParams(lo, hi, float(params_apply(lo, hi, threshold)))
        scaled = params.apply(cw.as_array())
        clipped = np.clip(scaled, 0.0, 1.0)
        return ScaledCellWeights(tuple(float(v) for v in clipped), params, cw.cell)

    def params_apply(lo, hi, x):
        return 1.0 if hi == lo else (x - lo) / (hi - lo)

    if scope == "joint":
        allw = np.concatenate([cw.as_array() for cw in cells])
        lo, hi = float(allw.min()), float(allw.max())
        return [scale_one(cw, lo, hi) for cw in cells]
    return [
        scale_one(cw, float(cw.as_array().min()), float(cw.as_array().max()))
        for cw in cells
    ]


def bitcode(sw: ScaledCellWeights, bcl_max: int = DEFAULT_BCL_MAX) -> BitTensor:
    """Round each weight to the nearest multiple of 2^-bcl_max (ties up)
    and expand it MSB-first over levels 2^0 .. 2^-bcl_max."""
    if bcl_max < 0:
        raise ValueError("bcl_max must be non-negative")
    step = 2**bcl_max
    quantized = [int(np.floor(w * step + 0.5)) for w in sw.weights]
    rows = []
    for bcl in range(bcl_max + 1):
        rows.append(tuple((q >> (bcl_max - bcl)) & 1 for q in quantized))
    return BitTensor(tuple(rows))


def level_expression(bt: BitTensor, bcl: int) -> LogicExpressionBits:
    """The logic expression of one bit-code level: its slice of the tensor."""
    if not 0 <= bcl <= bt.bcl_max:
        raise ValueError(f"level {bcl} out of range 0..{bt.bcl_max}")
    return LogicExpressionBits(bt.bits[bcl], bt.n)


def eval_expression(e: LogicExpressionBits, mt: MintermVector) -> float:
    """Arithmetic evaluation: the sum of the minterm values at active
    positions (disjunction of mutually exclusive events)."""
    if mt.n != e.n:
        raise ValueError("attribute count mismatch")
    return float(np.dot(e.active, mt.as_array()))


def approx_forward(
    bt: BitTensor, mt: MintermVector, levels: list[int] | None = None
) -> float:
    """Sum over the chosen levels of 2^-bcl times the level expression's
    evaluation; all levels by default."""
    if levels is None:
        levels = list(range(bt.bcl_max + 1))
    if any(not 0 <= bcl <= bt.bcl_max for bcl in levels):
        raise ValueError("level outside 0..bcl_max")
    return float(
        sum(2.0**-bcl * eval_expression(level_expression(bt, bcl), mt)
            for bcl in levels)
    )


def energy_report(sw: ScaledCellWeights, bt: BitTensor) -> EnergyReport:
    if len(sw.weights) != len(bt.bits[0]):
        raise ValueError("weight/bit tensor length mismatch")
    weight_sum = float(sw.as_array().sum())
    degenerate = weight_sum == 0.0
    levels = []
    for bcl, row in enumerate(bt.bits):
        count = int(sum(row))
        absolute = 2.0**-bcl * count
        relative = 0.0 if degenerate else absolute / weight_sum * 100.0
        levels.append(LevelEnergy(bcl, count, absolute, relative))
    bitcode_sum = float(bt.reconstruction().sum())
    return EnergyReport(weight_sum, tuple(levels), bitcode_sum, degenerate)


def level_accuracy(
    bt: BitTensor,
    params: ScalingParams,
    samples: list[tuple[MintermVector, int]],
    levels: list[int] | None = None,
) -> float:
    """Fraction of samples whose thresholded level-restricted evaluation
    matches the label."""
    if not samples:
        raise ValueError("empty sample set")
    tau = params.scaled_threshold
    hits = sum(
        int((approx_forward(bt, mt, levels) > tau) == bool(y)) for mt, y in samples
    )
    return hits / len(samples)


def project(cw: CellWeights, keep: list[int]) -> CellWeights:
    """Marginalize the minterm weights onto the kept attributes (0-based
    indices) by summing over the dropped attributes' bit combinations.
    Callers typically rescale afterwards."""
    n = cw.n
    if not keep:
        raise ValueError("keep set must be non-empty")
    if len(set(keep)) != len(keep) or any(not 0 <= j < n for j in keep):
        raise ValueError("keep must be distinct attribute indices below n")
    kept = sorted(keep)
    m = len(kept)
    out = np.zeros(2**m)
    w = cw.as_array()
    for k in range(2**n):
        kappa = 0
        for pos, j in enumerate(kept):
            bit = (k >> (n - 1 - j)) & 1
            kappa |= bit << (m - 1 - pos)
        out[kappa] += w[k]
    return CellWeights(tuple(float(v) for v in out), None)

"""Fuzzification of raw attributes and the minterm transform.

Raw attribute values are mapped into [0,1] degrees by a per-attribute
monotone function, then expanded into the 2^n minterm values that feed
the network.  Attribute 1 sits on the most significant bit of the
minterm index throughout the package.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

MAX_ATTRIBUTES = 12  # 2^12 = 4096 minterms; configurable per call


class ArityMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class RawObject:
    """One row of raw tabular data, in application units."""

    values: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("raw attribute values must be finite")

    @property
    def arity(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LabeledSample:
    object: RawObject
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class FuzzifierSpec:
    """Per-attribute monotone maps onto [0,1].

    kind 'minmax': m(x) = (x - lo) / (hi - lo), clamped; a degenerate
    attribute (lo == hi) maps to the constant 1.
    kind 'logistic': m(x) = 1 / (1 + exp(-steepness * (x - midpoint))).
    """

    kind: str
    lo: tuple[float, ...] = field(default=())
    hi: tuple[float, ...] = field(default=())
    midpoint: tuple[float, ...] = field(default=())
    steepness: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("minmax", "logistic"):
            raise ValueError(f"unknown fuzzifier kind {self.kind!r}")
        if self.kind == "minmax":
            if len(self.lo) != len(self.hi):
                raise ValueError("lo/hi length mismatch")
            if any(l > h for l, h in zip(self.lo, self.hi)):
                raise ValueError("lo must not exceed hi")
        else:
            if len(self.midpoint) != len(self.steepness):
                raise ValueError("midpoint/steepness length mismatch")

    @property
    def arity(self) -> int:
        return len(self.lo) if self.kind == "minmax" else len(self.midpoint)

    def to_dict(self) -> dict:
        if self.kind == "minmax":
            return {"kind": "minmax", "lo": list(self.lo), "hi": list(self.hi)}
        return {
            "kind": "logistic",
            "midpoint": list(self.midpoint),
            "steepness": list(self.steepness),
        }

    @staticmethod
    def from_dict(d: dict) -> "FuzzifierSpec":
        kind = d.get("kind")
        if kind == "minmax":
            return FuzzifierSpec("minmax", lo=tuple(d["lo"]), hi=tuple(d["hi"]))
        if kind == "logistic":
            return FuzzifierSpec(
                "logistic",
                midpoint=tuple(d["midpoint"]),
                steepness=tuple(d["steepness"]),
            )
        raise ValueError(f"unknown fuzzifier kind {kind!r}")


@dataclass(frozen=True)
class FuzzifiedObject:
    degrees: tuple[float, ...]

    def __post_init__(self):
        if any(not (0.0 <= d <= 1.0) for d in self.degrees):
            raise ValueError("degrees must lie in [0,1]")

    @property
    def arity(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class MintermVector:
    """The 2^n minterm values of one fuzzified object; they sum to 1."""

    values: tuple[float, ...]
    n: int

    def __post_init__(self):
        if len(self.values) != 2**self.n:
            raise ValueError("minterm vector length must be 2^n")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def fit_fuzzifier(samples: list[LabeledSample], kind: str = "minmax") -> FuzzifierSpec:
    """Fit per-attribute monotone maps from training data.

    min-max uses the per-attribute dataset min/max; logistic centres at
    the mean with steepness 1/std (std 0 falls back to steepness 1).
    """
    if not samples:
        raise ValueError("cannot fit a fuzzifier on an empty dataset")
    arities = {s.object.arity for s in samples}
    if len(arities) != 1:
        raise ArityMismatchError("samples have inconsistent attribute counts")
    cols = np.array([s.object.values for s in samples], dtype=float)
    if kind == "minmax":
        lo = cols.min(axis=0)
        hi = cols.max(axis=0)
        for j in np.nonzero(lo == hi)[0]:
            warnings.warn(
                f"attribute {j + 1} is constant ({lo[j]}); degree fixed at 1",
                stacklevel=2,
            )
        return FuzzifierSpec("minmax", lo=tuple(lo), hi=tuple(hi))
    if kind == "logistic":
        mid = cols.mean(axis=0)
        std = cols.std(axis=0)
        steep = np.where(std > 0, 1.0 / np.where(std > 0, std, 1.0), 1.0)
        return FuzzifierSpec("logistic", midpoint=tuple(mid), steepness=tuple(steep))
    raise ValueError(f"unknown fuzzifier kind {kind!r}")


def fuzzify(x: RawObject, spec: FuzzifierSpec) -> FuzzifiedObject:
    """Map one raw object to degrees in [0,1]; out-of-range inputs clamp."""
    if x.arity != spec.arity:
        raise ArityMismatchError(
            f"object has {x.arity} attributes, fuzzifier expects {spec.arity}"
        )
    vals = np.asarray(x.values, dtype=float)
    if spec.kind == "minmax":
        lo = np.asarray(spec.lo)
        hi = np.asarray(spec.hi)
        span = hi - lo
        degrees = np.where(span > 0, (vals - lo) / np.where(span > 0, span, 1.0), 1.0)
    else:
        mid = np.asarray(spec.midpoint)
        steep = np.asarray(spec.steepness)
        degrees = 1.0 / (1.0 + np.exp(-steep * (vals - mid)))
    degrees = np.clip(degrees, 0.0, 1.0)
    return FuzzifiedObject(tuple(float(d) for d in degrees))


def minterm_transform(f: FuzzifiedObject, max_n: int = MAX_ATTRIBUTES) -> MintermVector:
    """Expand n degrees into the 2^n minterm values (products of degrees
    and complements), attribute 1 on the most significant index bit."""
    n = f.arity
    if n > max_n:
        raise ValueError(f"{n} attributes exceed the maximum of {max_n}")
    mt = np.array([1.0])
    for m in f.degrees:
        mt = np.kron(mt, np.array([1.0 - m, m]))
    return MintermVector(tuple(float(v) for v in mt), n)


def minterm_bits(k: int, n: int) -> list[int]:
    """Big-endian bit code of minterm k; entry j-1 is attribute j's bit."""
    if not 0 <= k < 2**n:
        raise ValueError(f"minterm index {k} out of range for n={n}")
    return [(k >> (n - 1 - j)) & 1 for j in range(n)]

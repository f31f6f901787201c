"""Symbolic model functions and their JSON wire format.

A spec describes a convex, coordinatewise-increasing function f on the
negative orthant (log coordinates of a toric psh function).  Specs evaluate on
arbitrary point batches, which is what the asymptotic-slope machinery needs:
it probes them far deeper than any fixed grid.

JSON schema (consumed by the CLI)::

    {"kind": "linear",       "lambda": [v1, ..., vn]}
    {"kind": "radial_power", "alpha": a}                        # 1D: -(-x)^a
    {"kind": "max_linear",   "pieces": [[...], ...], "offsets": [...]}
    {"kind": "sum",          "terms": [ <spec>, ... ]}
    {"kind": "samples",      "grid": {"axes": [[...], ...]}, "values": [...]}

"inf" is accepted as the +inf literal inside "values".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lattice import GridNd

_NEG = -math.inf


def _dot_extended(slopes: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """<slopes, x> with the 0 * (-inf) = 0 convention for zero slopes."""
    if np.isfinite(pts).all():
        return pts @ slopes
    with np.errstate(invalid="ignore"):
        terms = np.where(slopes == 0.0, 0.0, pts * slopes)
    return terms.sum(axis=-1)


class FunctionSpec:
    """Base class; subclasses implement evaluate() on (..., n) point arrays."""

    kind = "abstract"

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class LinearSpec(FunctionSpec):
    """f(x) = <slopes, x>; the toric side is u = sum nu_i log|z_i|."""

    slopes: tuple

    kind = "linear"

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))
        if not self.slopes:
            raise ParameterError("linear spec needs at least one slope")
        if any(s < 0 for s in self.slopes):
            raise ParameterError("linear slopes must be nonnegative (increasing functions)")

    @property
    def dimension(self) -> int:
        return len(self.slopes)

    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.float64)
        return _dot_extended(np.array(self.slopes), pts)

    def to_json(self):
        return {"kind": "linear", "lambda": list(self.slopes)}


@dataclass(frozen=True)
class RadialPowerSpec(FunctionSpec):
    """1D power profile f(x) = -(-x)^alpha, 0 < alpha <= 1 (u = -(-log|z|)^alpha)."""

    alpha: float

    kind = "radial_power"

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def dimension(self) -> int:
        return 1

    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.float64)
        x = pts[..., 0] if pts.ndim > 1 else pts
        if np.any(x > 0):
            raise ParameterError("radial_power is defined on x <= 0")
        return -np.power(-x, self.alpha)

    def to_json(self):
        return {"kind": "radial_power", "alpha": self.alpha}


@dataclass(frozen=True)
class MaxLinearSpec(FunctionSpec):
    """f(x) = max_i (<p_i, x> + o_i), a convex increasing piecewise-linear model."""

    pieces: tuple
    offsets: tuple = None

    kind = "max_linear"

    def __post_init__(self):
        pieces = tuple(tuple(float(v) for v in p) for p in self.pieces)
        if not pieces:
            raise ParameterError("max_linear spec needs at least one piece")
        n = len(pieces[0])
        if any(len(p) != n for p in pieces):
            raise ParameterError("all pieces must share the same dimension")
        if any(v < 0 for p in pieces for v in p):
            raise ParameterError("piece slopes must be nonnegative")
        offsets = self.offsets
        if offsets is None:
            offsets = (0.0,) * len(pieces)
        offsets = tuple(float(o) for o in offsets)
        if len(offsets) != len(pieces):
            raise ParameterError("offsets must match the number of pieces")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "offsets", offsets)

    @property
    def dimension(self) -> int:
        return len(self.pieces[0])

    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.float64)
        mat = np.array(self.pieces)  # (k, n)
        vals = np.stack(
            [_dot_extended(mat[i], pts) + self.offsets[i] for i in range(mat.shape[0])],
            axis=-1,
        )
        return vals.max(axis=-1)

    def to_json(self):
        return {
            "kind": "max_linear",
            "pieces": [list(p) for p in self.pieces],
            "offsets": list(self.offsets),
        }


@dataclass(frozen=True)
class SumSpec(FunctionSpec):
    """f = sum of component specs of equal dimension."""

    terms: tuple

    kind = "sum"

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ParameterError("sum spec needs at least one term")
        n = terms[0].dimension
        if any(t.dimension != n for t in terms):
            raise ParameterError("sum terms must share the same dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def dimension(self) -> int:
        return self.terms[0].dimension

    def evaluate(self, points):
        out = self.terms[0].evaluate(points)
        for t in self.terms[1:]:
            out = out + t.evaluate(points)
        return out

    def to_json(self):
        return {"kind": "sum", "terms": [t.to_json() for t in self.terms]}


@dataclass(frozen=True)
class SamplesSpec(FunctionSpec):
    """Tabulated values on a grid, multilinearly interpolated.

    Points outside the grid are linearly extrapolated per axis, so asymptotic
    probes see the boundary slopes continued.  Non-finite input coordinates are
    clamped to a deep proxy; the result is a large negative value rather than
    an exact -inf marker.
    """

    grid: GridNd
    values: np.ndarray

    kind = "samples"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(self.grid.shape)
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    def evaluate(self, points):
        from scipy.interpolate import RegularGridInterpolator

        pts = np.asarray(points, dtype=np.float64)
        flat = pts.reshape(-1, self.dimension).copy()
        for i, axis in enumerate(self.grid.axes):
            span = axis[-1] - axis[0]
            deep = axis[0] - 1e6 * span
            col = flat[:, i]
            col[~np.isfinite(col)] = deep
        interp = RegularGridInterpolator(
            self.grid.axes, self.values, method="linear", bounds_error=False, fill_value=None
        )
        out = interp(flat)
        return out.reshape(pts.shape[:-1])

    def to_json(self):
        vals = ["inf" if not np.isfinite(v) else float(v) for v in self.values.ravel()]
        return {
            "kind": "samples",
            "grid": {"axes": [list(map(float, a)) for a in self.grid.axes]},
            "values": vals,
        }


def spec_from_json(obj: dict) -> FunctionSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParameterError("function spec JSON must be an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "linear":
            return LinearSpec(slopes=tuple(obj["lambda"]))
        if kind == "radial_power":
            return RadialPowerSpec(alpha=float(obj["alpha"]))
        if kind == "max_linear":
            return MaxLinearSpec(
                pieces=tuple(tuple(p) for p in obj["pieces"]),
                offsets=tuple(obj["offsets"]) if "offsets" in obj else None,
            )
        if kind == "sum":
            return SumSpec(terms=tuple(spec_from_json(t) for t in obj["terms"]))
        if kind == "samples":
            axes = tuple(np.asarray(a, dtype=np.float64) for a in obj["grid"]["axes"])
            raw = [math.inf if v == "inf" else float(v) for v in obj["values"]]
            return SamplesSpec(grid=GridNd(axes=axes), values=np.asarray(raw))
    except KeyError as exc:
        raise ParameterError(f"function spec JSON missing field {exc}") from exc
    raise ParameterError(f"unknown function spec kind {kind!r}")


def load_spec(path) -> FunctionSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_json(json.load(fh))

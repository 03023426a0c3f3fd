"""Exact piecewise-constant elements of L2(R).

A step function is a breakpoint list plus one value per piece, zero
outside the support.  Inner products reduce to sums of value products
times interval lengths, so the identities checked downstream hold to
machine precision instead of quadrature accuracy.  Every constructor
canonicalizes: near-coincident breakpoints are merged (the single
documented inexactness), adjacent equal values are fused, and zero-valued
boundary pieces are stripped, which makes structural equality meaningful.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .errors import DomainError

#: breakpoints closer than this (relative) are merged during canonicalization
BREAKPOINT_MERGE_TOL = 1e-14


def _canonicalize(breakpoints, values):
    bps = [float(b) for b in breakpoints]
    vals = [float(v) for v in values]
    if len(bps) != len(vals) + 1 and not (len(bps) == 0 and len(vals) == 0):
        raise DomainError("need exactly one value per interval between breakpoints")
    if any(not math.isfinite(b) for b in bps) or any(not math.isfinite(v) for v in vals):
        raise DomainError("breakpoints and values must be finite")
    if any(b > a for a, b in zip(bps[1:], bps)):
        raise DomainError("breakpoints must be nondecreasing")

    # snap near-coincident breakpoints together, dropping the sliver pieces;
    # kept breakpoints always form a contiguous partition
    kept_b, kept_v = (bps[:1], [])
    for i, v in enumerate(vals):
        hi = bps[i + 1]
        if hi - kept_b[-1] <= BREAKPOINT_MERGE_TOL * max(1.0, abs(hi), abs(kept_b[-1])):
            continue
        kept_b.append(hi)
        kept_v.append(v)

    # fuse adjacent pieces carrying equal values
    fused_b, fused_v = kept_b[:1], []
    for hi, v in zip(kept_b[1:], kept_v):
        if fused_v and fused_v[-1] == v:
            fused_b[-1] = hi
        else:
            fused_b.append(hi)
            fused_v.append(v)

    # strip zero-valued boundary pieces
    while fused_v and fused_v[0] == 0.0:
        fused_b.pop(0); fused_v.pop(0)
    while fused_v and fused_v[-1] == 0.0:
        fused_b.pop(); fused_v.pop()
    if not fused_v:
        return (), ()
    return tuple(fused_b), tuple(fused_v)


@dataclass(frozen=True)
class StepFunction:
    """Canonical compactly supported step function; immutable and exact."""

    breakpoints: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        bps, vals = _canonicalize(self.breakpoints, self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls((), ())

    @classmethod
    def indicator(cls, lo: float, hi: float, value: float = 1.0) -> "StepFunction":
        if hi < lo:
            raise DomainError(f"indicator needs lo <= hi, got [{lo}, {hi}]")
        return cls((lo, hi), (value,))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> tuple[float, float] | None:
        if self.is_zero:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, x: float) -> float:
        """Value at x (right-continuous; zero outside the support)."""
        if self.is_zero or x < self.breakpoints[0] or x >= self.breakpoints[-1]:
            return 0.0
        return self.values[bisect_right(self.breakpoints, x) - 1]

    # -- linear structure ----------------------------------------------------

    def _combined(self, other: "StepFunction", op) -> "StepFunction":
        if self.is_zero and other.is_zero:
            return StepFunction.zero()
        cuts = sorted(set(self.breakpoints) | set(other.breakpoints))
        vals = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = lo + (hi - lo) / 2.0
            vals.append(op(self(mid), other(mid)))
        return StepFunction(tuple(cuts), tuple(vals))

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return self._combined(other, lambda a, b: a + b)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        if other.is_zero:
            return self
        return self._combined(other, lambda a, b: a - b)

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(-v for v in self.values))

    def __mul__(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    # -- geometry ------------------------------------------------------------

    def shift(self, t: float) -> "StepFunction":
        """Translate by t: the function x -> f(x - t)."""
        return StepFunction(tuple(b + t for b in self.breakpoints), self.values)

    def reflect(self) -> "StepFunction":
        """The function x -> f(-x); an exact involution."""
        return StepFunction(tuple(-b for b in reversed(self.breakpoints)),
                            tuple(reversed(self.values)))

    def dilate(self, t: float) -> "StepFunction":
        """The unitary dilation x -> exp(t/2) * f(exp(t) * x)."""
        scale = math.exp(-t)
        amp = math.exp(t / 2.0)
        return StepFunction(tuple(b * scale for b in self.breakpoints),
                            tuple(v * amp for v in self.values))

    # -- inner products --------------------------------------------------------

    def inner(self, other: "StepFunction") -> float:
        """Exact L2 inner product: sum of value products over intersections."""
        if self.is_zero or other.is_zero:
            return 0.0
        total = 0.0
        i = j = 0
        while i < len(self.values) and j < len(other.values):
            lo = max(self.breakpoints[i], other.breakpoints[j])
            hi = min(self.breakpoints[i + 1], other.breakpoints[j + 1])
            if hi > lo:
                total += self.values[i] * other.values[j] * (hi - lo)
            if self.breakpoints[i + 1] <= other.breakpoints[j + 1]:
                i += 1
            else:
                j += 1
        return total

    def norm_sq(self) -> float:
        return self.inner(self)

    def distance_sq(self, other: "StepFunction") -> float:
        return (self - other).norm_sq()

    # -- serialization -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "StepFunction":
        return cls(tuple(data["breakpoints"]), tuple(data["values"]))


def inner(f: StepFunction, g: StepFunction) -> float:
    return f.inner(g)


def shift(f: StepFunction, t: float) -> StepFunction:
    return f.shift(t)


def reflect(f: StepFunction) -> StepFunction:
    return f.reflect()


def dilate(f: StepFunction, t: float) -> StepFunction:
    return f.dilate(t)

"""Finite evaluation grids on the real line."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError

# stop is included in start:stop:step when within this fraction of a step
_SPEC_SNAP = 1e-12


@dataclass(frozen=True)
class Grid:
    """A nonempty, strictly increasing, finite list of real points.

    Every Hilbert-space statement in the library is probed on such finite
    grids; Gram matrices, quotients and verdicts are all indexed by one.
    """

    points: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) == 0:
            raise DomainError("grid must contain at least one point")
        pts = tuple(float(p) for p in self.points)
        if not all(math.isfinite(p) for p in pts):
            raise DomainError("grid points must be finite")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, values: Iterable[float]) -> "Grid":
        """Build a grid from unsorted values (sorted, duplicates rejected)."""
        return cls(tuple(sorted(float(v) for v in values)))

    @classmethod
    def from_spec(cls, text: str) -> "Grid":
        """Parse ``start:stop:step`` or an explicit comma-separated list.

        The lattice is ``start + k*step``; ``stop`` is included when it lies
        within ``1e-12 * step`` of a lattice point, so column counts are
        predictable for CSV output.
        """
        text = text.strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise DomainError(f"grid spec {text!r}: expected start:stop:step")
            try:
                start, stop, step = (float(p) for p in parts)
            except ValueError as exc:
                raise DomainError(f"grid spec {text!r}: {exc}") from None
            if step <= 0:
                raise DomainError(f"grid spec {text!r}: step must be positive")
            if stop < start:
                raise DomainError(f"grid spec {text!r}: stop < start")
            ratio = (stop - start) / step
            k = math.floor(ratio)
            if abs((stop - start) - round(ratio) * step) <= _SPEC_SNAP * step:
                k = round(ratio)
            return cls(tuple(start + i * step for i in range(k + 1)))
        try:
            values = [float(p) for p in text.split(",") if p.strip()]
        except ValueError as exc:
            raise DomainError(f"grid spec {text!r}: {exc}") from None
        return cls.of(values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    def positive(self) -> tuple[float, ...]:
        """The points lying in (0, inf)."""
        return tuple(p for p in self.points if p > 0)

    def min_spacing(self) -> float:
        if len(self.points) < 2:
            return math.inf
        return min(b - a for a, b in zip(self.points, self.points[1:]))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[float]:
        return iter(self.points)

"""Centered Gaussian processes on the line and their invariance diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grids import Grid
from .kernels import (BrownianOneSided, BrownianTwoSided, FractionalBrownian,
                      Kernel, Normalized, NormalizedOneSided, eval_kernel)


@dataclass(frozen=True)
class ProcessSpec:
    """A centered Gaussian process identified with its covariance kernel."""

    name: str
    kernel: Kernel

    def params(self) -> dict:
        return {"process": self.name, **self.kernel.params()}


BROWNIAN_TWO_SIDED = ProcessSpec("bm2", BrownianTwoSided())
BROWNIAN_ONE_SIDED = ProcessSpec("bm1", BrownianOneSided())
NORMALIZED_ONE_SIDED = ProcessSpec("normalized1", NormalizedOneSided())


def fractional_brownian(hurst: float) -> ProcessSpec:
    return ProcessSpec("fbm", FractionalBrownian(hurst))


def custom(kernel: Kernel) -> ProcessSpec:
    return ProcessSpec("custom", kernel)


def covariance(p: ProcessSpec, s: float, t: float) -> float:
    """Closed-form covariance of the process at a pair of times."""
    return eval_kernel(p.kernel, s, t)


def increment_form(p: ProcessSpec, s: float, t: float) -> float:
    """``E[(X_t - X_s)^2] = C(t,t) + C(s,s) - 2 C(s,t)``.

    Mathematically nonnegative; round-off may produce values down to about
    -1e-12, which callers should treat as zero.
    """
    return covariance(p, t, t) + covariance(p, s, s) - 2.0 * covariance(p, s, t)


@dataclass(frozen=True)
class StationarityVerdict:
    passed: bool
    max_deviation: float
    n_comparisons: int
    degenerate: bool = False  # fewer than 2 admissible shifted pairs

    def to_json_dict(self) -> dict:
        return {"pass": self.passed, "max_deviation": self.max_deviation,
                "n_comparisons": self.n_comparisons, "degenerate": self.degenerate}


def _increment_matrix(p: ProcessSpec, pts: np.ndarray) -> np.ndarray:
    C = p.kernel.pairwise(pts, pts)
    d = np.diag(C)
    return d[:, None] + d[None, :] - 2.0 * C


def check_stationary_increments(p: ProcessSpec, grid: Grid,
                                tol: float = 1e-12) -> StationarityVerdict:
    """Invariance of the increment form under translations.

    Shifts are taken from the pairwise differences of the grid; a shifted
    pair enters the comparison only when both shifted times stay inside the
    process domain.  Deviations are scaled by ``max(1, |D|)``.
    """
    pts = grid.array
    base = _increment_matrix(p, pts)
    shifts = np.unique(pts[:, None] - pts[None, :])
    shifts = shifts[shifts != 0.0]
    worst = 0.0
    count = 0
    for h in shifts:
        moved = pts + h
        ok = np.array([p.kernel.contains(float(x)) for x in moved])
        if ok.sum() < 2:
            continue
        sub = np.ix_(ok, ok)
        shifted = _increment_matrix(p, moved[ok])
        dev = np.abs(shifted - base[sub]) / np.maximum(1.0, np.abs(base[sub]))
        worst = max(worst, float(dev.max()))
        count += int(ok.sum() * (ok.sum() - 1) // 2)
    return StationarityVerdict(worst <= tol, worst, count, degenerate=count < 2)


def normalize_covariance(p: ProcessSpec) -> ProcessSpec:
    """The process rescaled to unit variance: kernel ``C/sqrt(C(s,s)C(t,t))``.

    Evaluation raises, naming the point, wherever the original variance
    vanishes (e.g. t = 0 for Brownian motion).
    """
    return ProcessSpec(f"normalized({p.name})", Normalized(p.kernel))


def check_dilation_stationarity(grid: Grid, scales, tol: float = 1e-12,
                                p: ProcessSpec = NORMALIZED_ONE_SIDED,
                                ) -> StationarityVerdict:
    """Invariance of the covariance under ``t -> a*t`` for each scale ``a``.

    Defaults to the dilation-normalized one-sided process, whose kernel is
    scale invariant; applying it to the raw one-sided kernel shows the
    failure ``min(a*s, a*t) = a*min(s, t)``.
    """
    pts = grid.array
    if np.any(pts <= 0):
        raise DomainError("dilation stationarity runs on a grid in (0, inf)")
    base = p.kernel.pairwise(pts, pts)
    worst = 0.0
    count = 0
    for a in scales:
        if not a > 0:
            raise DomainError("dilation scales must be positive")
        scaled = p.kernel.pairwise(a * pts, a * pts)
        dev = np.abs(scaled - base) / np.maximum(1.0, np.abs(base))
        worst = max(worst, float(dev.max()))
        count += len(pts) * (len(pts) + 1) // 2
    return StationarityVerdict(worst <= tol, worst, count, degenerate=count < 2)

"""Covariance kernels, Gram matrices and reflected Gram matrices.

The closed-form kernels here are the covariances of two-sided Brownian
motion, fractional Brownian motion, one-sided Brownian motion and its
dilation-normalized variant, together with the exponential family
``exp(-lam*|s-t|)`` and the Gaussian radial kernel
``exp(-||x-y||^2/2)`` on finite-dimensional vectors.  A tabulated kernel
covers everything measured rather than derived.

All kernels are real and symmetric; Gram matrices are explicitly
symmetrized as ``(M + M^T)/2`` so downstream eigensolves see an exactly
symmetric matrix.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, IngestionError
from .grids import Grid

# relative asymmetry above this aborts tabulated-kernel ingestion
TABULATED_ASYMMETRY_TOL = 1e-6
# tolerance for matching a point against a tabulated grid entry
_LOOKUP_RTOL = 1e-12


class Kernel:
    """Base class: a symmetric real kernel with a scalar and a batched form."""

    name: str = "kernel"
    #: kernels of the form K(s,t) = K(s+h, t+h); these admit the shift
    #: semigroup on the line and hence the quotient contraction analysis
    translation_covariant: bool = False

    def contains(self, t: float) -> bool:
        """Whether a scalar point lies in the kernel's domain."""
        return math.isfinite(t)

    def value(self, s, t) -> float:
        raise NotImplementedError

    def pairwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Matrix of kernel values over two point sets (broadcasting form)."""
        raise NotImplementedError

    def params(self) -> dict:
        """JSON-ready parameter summary (used by CLI envelopes and sidecars)."""
        return {"variant": self.name}

    def _require(self, *points: float) -> None:
        for p in points:
            if not self.contains(p):
                raise DomainError(
                    f"point {p!r} outside the domain of kernel '{self.name}'")


@dataclass(frozen=True)
class Exponential(Kernel):
    """``K(s,t) = exp(-lam*|s-t|)`` on the whole line, ``lam >= 0``."""

    lam: float
    name = "exponential"
    translation_covariant = True

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError("exponential kernel requires lam >= 0")

    def value(self, s, t) -> float:
        self._require(s, t)
        return math.exp(-self.lam * abs(s - t))

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        return np.exp(-self.lam * np.abs(xs[:, None] - ys[None, :]))

    def params(self):
        return {"variant": self.name, "lam": self.lam}


@dataclass(frozen=True)
class BrownianTwoSided(Kernel):
    """Two-sided Brownian covariance ``(|s| + |t| - |s-t|)/2`` on the line."""

    name = "brownian-two-sided"
    translation_covariant = True

    def value(self, s, t) -> float:
        self._require(s, t)
        return 0.5 * (abs(s) + abs(t) - abs(s - t))

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        return 0.5 * (np.abs(xs)[:, None] + np.abs(ys)[None, :]
                      - np.abs(xs[:, None] - ys[None, :]))


@dataclass(frozen=True)
class FractionalBrownian(Kernel):
    """Fractional Brownian covariance with Hurst index ``hurst`` in (0,1).

    ``K(s,t) = (|s|^(2H) + |t|^(2H) - |s-t|^(2H))/2``; at ``H = 1/2`` this
    reduces exactly to the two-sided Brownian kernel.
    """

    hurst: float
    name = "fractional-brownian"
    translation_covariant = True

    def __post_init__(self):
        if not (0.0 < self.hurst < 1.0):
            raise DomainError("fractional Brownian kernel requires hurst in (0, 1)")

    def value(self, s, t) -> float:
        self._require(s, t)
        h2 = 2.0 * self.hurst
        return 0.5 * (abs(s) ** h2 + abs(t) ** h2 - abs(s - t) ** h2)

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        h2 = 2.0 * self.hurst
        return 0.5 * (np.abs(xs)[:, None] ** h2 + np.abs(ys)[None, :] ** h2
                      - np.abs(xs[:, None] - ys[None, :]) ** h2)

    def params(self):
        return {"variant": self.name, "hurst": self.hurst}


@dataclass(frozen=True)
class BrownianOneSided(Kernel):
    """One-sided Brownian covariance ``min(s, t)`` on (0, inf)."""

    name = "brownian-one-sided"

    def contains(self, t: float) -> bool:
        return math.isfinite(t) and t > 0

    def value(self, s, t) -> float:
        self._require(s, t)
        return min(s, t)

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        return np.minimum(xs[:, None], ys[None, :])


@dataclass(frozen=True)
class NormalizedOneSided(Kernel):
    """Dilation-invariant kernel ``sqrt(min(s,t)/max(s,t))`` on (0, inf)."""

    name = "normalized-one-sided"

    def contains(self, t: float) -> bool:
        return math.isfinite(t) and t > 0

    def value(self, s, t) -> float:
        self._require(s, t)
        return math.sqrt(min(s, t) / max(s, t))

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        return np.sqrt(np.minimum(xs[:, None], ys[None, :])
                       / np.maximum(xs[:, None], ys[None, :]))


@dataclass(frozen=True)
class GaussianFock(Kernel):
    """``K(x,y) = exp(-||x-y||^2/2)`` on finite-dimensional real vectors.

    Scalars are accepted as one-dimensional vectors, so this kernel also
    works over an ordinary :class:`~rpkit.grids.Grid`.
    """

    name = "gaussian-fock"

    def value(self, s, t) -> float:
        x = np.atleast_1d(np.asarray(s, dtype=float))
        y = np.atleast_1d(np.asarray(t, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise DomainError(
                f"kernel '{self.name}' requires equal-length vectors, "
                f"got shapes {x.shape} and {y.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError(f"kernel '{self.name}' requires finite vectors")
        d = x - y
        return math.exp(-0.5 * float(d @ d))

    def pairwise(self, xs, ys):
        xs, ys = np.atleast_2d(np.asarray(xs, float).T).T, np.atleast_2d(np.asarray(ys, float).T).T
        d2 = ((xs[:, None, :] - ys[None, :, :]) ** 2).sum(axis=-1)
        return np.exp(-0.5 * d2)


class Tabulated(Kernel):
    """A kernel given by a symmetric matrix of values over a fixed grid.

    The matrix is symmetrized on ingestion; the largest relative asymmetry
    is recorded and anything above ``TABULATED_ASYMMETRY_TOL`` is rejected.
    Evaluation is defined only at tabulated grid points.
    """

    name = "tabulated"

    def __init__(self, grid: Grid, entries: np.ndarray):
        entries = np.asarray(entries, dtype=float)
        n = len(grid)
        if entries.shape != (n, n):
            raise IngestionError(
                f"tabulated kernel matrix must be {n}x{n}, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise IngestionError("tabulated kernel matrix must be finite")
        scale = max(1.0, float(np.abs(entries).max()))
        asym = float(np.abs(entries - entries.T).max()) / scale
        if asym > TABULATED_ASYMMETRY_TOL:
            raise IngestionError(
                f"tabulated kernel asymmetry {asym:.3e} exceeds "
                f"{TABULATED_ASYMMETRY_TOL:.0e} relative")
        self.grid = grid
        self.entries = (entries + entries.T) / 2.0
        self.entries.setflags(write=False)
        self.asymmetry = asym

    def _index(self, t: float) -> int:
        pts = self.grid.array
        hits = np.nonzero(np.abs(pts - t) <= _LOOKUP_RTOL * np.maximum(1.0, np.abs(pts)))[0]
        if hits.size == 0:
            raise DomainError(
                f"point {t!r} is not a grid point of the tabulated kernel")
        return int(hits[0])

    def contains(self, t: float) -> bool:
        if not math.isfinite(t):
            return False
        pts = self.grid.array
        return bool(np.any(np.abs(pts - t) <= _LOOKUP_RTOL * np.maximum(1.0, np.abs(pts))))

    def value(self, s, t) -> float:
        return float(self.entries[self._index(s), self._index(t)])

    def pairwise(self, xs, ys):
        xi = [self._index(float(x)) for x in np.asarray(xs, float).ravel()]
        yi = [self._index(float(y)) for y in np.asarray(ys, float).ravel()]
        return self.entries[np.ix_(xi, yi)]

    def params(self):
        return {"variant": self.name, "n": len(self.grid), "asymmetry": self.asymmetry}

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        """Read a tabulated kernel: header row and first column carry the grid."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
        if len(rows) < 2:
            raise IngestionError(f"{path}: tabulated kernel CSV needs a header and data")
        try:
            header = [float(x) for x in rows[0][1:]]
            col = [float(r[0]) for r in rows[1:]]
            body = [[float(x) for x in r[1:]] for r in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise IngestionError(f"{path}: malformed tabulated kernel CSV ({exc})") from None
        if header != col:
            raise IngestionError(f"{path}: header grid and first-column grid differ")
        return cls(Grid(tuple(header)), np.asarray(body, dtype=float))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([""] + ["%.17g" % p for p in self.grid])
            for i, p in enumerate(self.grid):
                writer.writerow(["%.17g" % p] + ["%.17g" % v for v in self.entries[i]])


@dataclass(frozen=True)
class Normalized(Kernel):
    """``K(s,t)/sqrt(K(s,s)K(t,t))`` with an exactly unit diagonal.

    Raises at evaluation when the base kernel has nonpositive variance at a
    requested point, naming the point.
    """

    base: Kernel
    name = "normalized"

    def contains(self, t: float) -> bool:
        return self.base.contains(t)

    def _variance(self, t: float) -> float:
        v = self.base.value(t, t)
        if v <= 0.0:
            raise DomainError(
                f"cannot normalize kernel '{self.base.name}': "
                f"zero variance at point {t!r}")
        return v

    def value(self, s, t) -> float:
        if s == t:
            self._variance(t)
            return 1.0
        return self.base.value(s, t) / math.sqrt(self._variance(s) * self._variance(t))

    def pairwise(self, xs, ys):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        dx = np.array([self._variance(float(x)) for x in xs])
        dy = np.array([self._variance(float(y)) for y in ys])
        out = self.base.pairwise(xs, ys) / np.sqrt(dx[:, None] * dy[None, :])
        out[xs[:, None] == ys[None, :]] = 1.0
        return out

    def params(self):
        return {"variant": self.name, "base": self.base.params()}


# ---------------------------------------------------------------------------
# reflections and Gram matrices
# ---------------------------------------------------------------------------

def negate(t: float) -> float:
    """The line reflection t -> -t."""
    return -t


def invert(t: float) -> float:
    """The multiplicative reflection t -> 1/t on (0, inf)."""
    if t == 0:
        raise DomainError("the multiplicative reflection is undefined at 0")
    return 1.0 / t


def identity(t: float) -> float:
    return t


@dataclass(frozen=True)
class ReflectionSetup:
    """An involution on grid points plus the designated positive sub-grid."""

    positive_part: Grid
    reflection: Callable[[float], float] = negate

    def __post_init__(self):
        for p in self.positive_part:
            q = self.reflection(self.reflection(p))
            if abs(q - p) > 1e-12 * max(1.0, abs(p)):
                raise DomainError(
                    f"reflection is not an involution at point {p!r} "
                    f"(tau(tau(p)) = {q!r})")

    def reflected_points(self) -> tuple[float, ...]:
        return tuple(self.reflection(p) for p in self.positive_part)


@dataclass(eq=False)
class GramMatrix:
    """A symmetric matrix of kernel evaluations over a grid."""

    entries: np.ndarray
    grid: Grid
    symmetrized: bool = False

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        n = len(self.grid)
        if self.entries.shape != (n, n):
            raise DomainError(
                f"Gram matrix shape {self.entries.shape} does not match grid size {n}")

    @property
    def n(self) -> int:
        return len(self.grid)

    @classmethod
    def symmetrize(cls, entries: np.ndarray, grid: Grid) -> "GramMatrix":
        entries = np.asarray(entries, dtype=float)
        return cls((entries + entries.T) / 2.0, grid, symmetrized=True)


def eval_kernel(spec: Kernel, s, t) -> float:
    """Evaluate a kernel at a pair of points (scalars, or vectors for the
    Gaussian radial kernel); symmetric in (s, t)."""
    return spec.value(s, t)


def gram(spec: Kernel, grid: Grid) -> GramMatrix:
    """The symmetrized matrix of kernel values over all grid pairs."""
    for p in grid:
        if not spec.contains(p):
            raise DomainError(
                f"grid point {p!r} outside the domain of kernel '{spec.name}'")
    pts = grid.array
    return GramMatrix.symmetrize(spec.pairwise(pts, pts), grid)


def reflected_gram(spec: Kernel, setup: ReflectionSetup) -> GramMatrix:
    """The matrix ``K(tau(x_i), x_j)`` over the positive part, symmetrized.

    Positive semidefiniteness of this matrix is the finite-sample form of
    reflection positivity of the kernel for (X, X_+, tau).
    """
    refl = setup.reflected_points()
    for p in setup.positive_part:
        if not spec.contains(p):
            raise DomainError(
                f"grid point {p!r} outside the domain of kernel '{spec.name}'")
    for q in refl:
        if not spec.contains(q):
            raise DomainError(
                f"reflected point {q!r} outside the domain of kernel '{spec.name}'")
    M = spec.pairwise(np.asarray(refl, float), setup.positive_part.array)
    return GramMatrix.symmetrize(M, setup.positive_part)

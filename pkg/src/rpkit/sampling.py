"""Seeded Gaussian path sampling against a target covariance.

Sampling is dense: the covariance Gram matrix is Cholesky-factorized with
an escalating diagonal jitter (fractional Brownian Grams on fine grids are
near-singular), and paths are ``Z @ L.T`` for standard normal ``Z``.  The
generator is pinned to numpy's counter-based Philox, keyed through
``SeedSequence``, so ensembles are bit-reproducible from
``(seed, grid, n_paths, process)`` and recorded as such.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .definiteness import DEFAULT_TOL, ToleranceConfig, check_positive_semidefinite
from .errors import DomainError, SamplingError
from .grids import Grid
from .jsonio import canonical_json
from .kernels import gram
from .processes import ProcessSpec

GENERATOR = "philox:seedsequence"
#: dense sampling is O(n^3); larger grids need the (out of scope) fast path
MAX_DENSE_GRID = 4096

_JITTER_START = 1e-12
_JITTER_MAX = 1e-6
# process variants whose kernels are positive semidefinite by construction;
# anything else gets an explicit check before factorization
_KNOWN_PSD = {"bm2", "fbm", "bm1", "normalized1"}


@dataclass(eq=False)
class PathEnsemble:
    """Sampled paths (one per row) over a grid, with full provenance."""

    grid: Grid
    paths: np.ndarray
    seed: int
    process: ProcessSpec
    generator: str = GENERATOR

    @property
    def n_paths(self) -> int:
        return self.paths.shape[0]

    def sidecar_dict(self) -> dict:
        return {"seed": self.seed, "process": self.process.name,
                "params": self.process.kernel.params(),
                "n_paths": self.n_paths, "generator": self.generator,
                "grid": list(self.grid.points)}

    def to_csv(self, path) -> None:
        """Header row of grid points, one path per row; %.17g formatting."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["%.17g" % p for p in self.grid])
            for row in self.paths:
                writer.writerow(["%.17g" % v for v in row])

    def write_sidecar(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(self.sidecar_dict()))
            fh.write("\n")


def _cholesky_with_jitter(entries: np.ndarray) -> np.ndarray:
    if not np.any(entries):
        return np.zeros_like(entries)  # exactly-zero kernel: zero paths
    try:
        return np.linalg.cholesky(entries)
    except np.linalg.LinAlgError:
        pass
    base = float(np.mean(np.diag(entries)))
    eps = _JITTER_START
    n = entries.shape[0]
    while eps <= _JITTER_MAX:
        try:
            return np.linalg.cholesky(entries + eps * base * np.eye(n))
        except np.linalg.LinAlgError:
            eps *= 10.0
    min_ev = float(np.linalg.eigvalsh((entries + entries.T) / 2.0)[0])
    raise SamplingError(
        f"Cholesky failed even with jitter up to {_JITTER_MAX:g} relative "
        f"(min eigenvalue {min_ev:.6e})", min_eigenvalue=min_ev)


def sample_paths(p: ProcessSpec, grid: Grid, n_paths: int, seed: int,
                 tol: ToleranceConfig = DEFAULT_TOL) -> PathEnsemble:
    """Draw i.i.d. centered Gaussian paths with the process covariance.

    Custom kernels are PSD-validated before factorization; sampling never
    clips eigenvalues silently, since clipping would change the law.
    """
    if n_paths < 1:
        raise DomainError("n_paths must be at least 1")
    if len(grid) > MAX_DENSE_GRID:
        raise DomainError(f"grid size {len(grid)} exceeds the dense-sampling "
                          f"cap of {MAX_DENSE_GRID}")
    G = gram(p.kernel, grid)
    if p.name not in _KNOWN_PSD:
        verdict = check_positive_semidefinite(G, tol)
        if not verdict.passed:
            raise SamplingError(
                f"covariance of process '{p.name}' is not positive "
                f"semidefinite on this grid "
                f"(min eigenvalue {verdict.min_eigenvalue:.6e})",
                min_eigenvalue=verdict.min_eigenvalue)
    L = _cholesky_with_jitter(G.entries)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    Z = rng.standard_normal((n_paths, len(grid)))
    return PathEnsemble(grid, Z @ L.T, int(seed), p)


@dataclass(eq=False)
class EmpiricalCovariance:
    matrix: np.ndarray
    max_abs_deviation: float

    def to_json_dict(self) -> dict:
        return {"max_abs_deviation": self.max_abs_deviation}


def empirical_covariance(e: PathEnsemble,
                         subtract_mean: bool = False) -> EmpiricalCovariance:
    """``X^T X / M`` against the target Gram; the process is centered by
    construction, so mean subtraction is off by default."""
    if e.n_paths < 2:
        raise DomainError("empirical covariance needs at least 2 paths")
    X = e.paths
    if subtract_mean:
        X = X - X.mean(axis=0, keepdims=True)
    emp = X.T @ X / e.n_paths
    target = gram(e.process.kernel, e.grid).entries
    return EmpiricalCovariance(emp, float(np.abs(emp - target).max()))

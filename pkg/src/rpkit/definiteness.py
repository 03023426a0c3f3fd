"""Positive/negative definiteness verdicts and low-rank feature factorization.

Verdicts are produced by symmetric eigensolves rather than Cholesky
attempts so that a failure always comes with the magnitude of the
violation.  Negative definiteness under the constraint ``sum(c) = 0`` is
decided by projecting with ``P = I - J/n`` and examining the largest
eigenvalue of ``P G P``, which is equivalent to the constrained quadratic
form and costs a single eigensolve.

All tolerances are relative, scaled by ``max(1, |lambda|_max)`` of the
spectrum actually examined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefinitenessError, EigensolveError
from .kernels import GramMatrix


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances for definiteness, rank and reconstruction checks.

    Defaults are sized for double-precision eigensolve noise on matrices
    up to a few thousand rows.
    """

    psd_tol: float = 1e-9
    nd_tol: float = 1e-9
    rank_tol: float = 1e-10
    recon_tol: float = 1e-8

    def __post_init__(self):
        for name in ("psd_tol", "nd_tol", "rank_tol", "recon_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a positive-semidefiniteness check."""

    passed: bool
    min_eigenvalue: float
    tolerance: float  # the absolute threshold actually applied

    def to_json_dict(self) -> dict:
        return {"pass": self.passed, "min_eigenvalue": self.min_eigenvalue,
                "tolerance": self.tolerance}


@dataclass(frozen=True)
class NdVerdict:
    """Outcome of a constrained negative-definiteness check."""

    passed: bool
    max_projected_eigenvalue: float
    tolerance: float
    degenerate: bool = False  # n < 2: the constraint set is {0}

    def to_json_dict(self) -> dict:
        return {"pass": self.passed,
                "max_projected_eigenvalue": self.max_projected_eigenvalue,
                "tolerance": self.tolerance, "degenerate": self.degenerate}


def _eigh(entries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolveError(
            f"symmetric eigensolve failed: {exc} "
            f"(n={entries.shape[0]}, max|entry|={np.abs(entries).max():.3e}, "
            f"finite={bool(np.all(np.isfinite(entries)))})",
            size=entries.shape[0],
            max_abs_entry=float(np.abs(entries).max()),
        ) from exc


def _eigvalsh(entries: np.ndarray) -> np.ndarray:
    return _eigh(entries)[0]


def _require_symmetric(g: GramMatrix) -> np.ndarray:
    entries = np.asarray(g.entries, dtype=float)
    if not np.array_equal(entries, entries.T):
        # tolerate pure round-off asymmetry, reject anything structural
        scale = max(1.0, float(np.abs(entries).max()))
        if float(np.abs(entries - entries.T).max()) > 1e-12 * scale:
            raise DefinitenessError("matrix is not symmetric; symmetrize first")
        entries = (entries + entries.T) / 2.0
    return entries


def check_positive_semidefinite(g: GramMatrix,
                                tol: ToleranceConfig = DEFAULT_TOL) -> PsdVerdict:
    """Pass iff the smallest eigenvalue is above ``-psd_tol * max(1, |l|_max)``."""
    entries = _require_symmetric(g)
    evs = _eigvalsh(entries)
    scale = max(1.0, float(np.abs(evs).max()))
    threshold = tol.psd_tol * scale
    return PsdVerdict(bool(evs[0] >= -threshold), float(evs[0]), threshold)


def check_negative_definite(g: GramMatrix,
                            tol: ToleranceConfig = DEFAULT_TOL) -> NdVerdict:
    """Negative definiteness on the constraint set ``sum(c) = 0``.

    With ``P = I - J/n`` the constrained form ``c^T G c <= 0`` over
    ``{sum c = 0}`` holds iff ``lambda_max(P G P) <= 0``; the check allows
    ``nd_tol`` relative slack.  For ``n < 2`` the constraint set is trivial
    and the verdict passes with the degenerate flag set.
    """
    entries = _require_symmetric(g)
    n = entries.shape[0]
    if n < 2:
        return NdVerdict(True, 0.0, tol.nd_tol, degenerate=True)
    P = np.eye(n) - np.full((n, n), 1.0 / n)
    M = P @ entries @ P
    M = (M + M.T) / 2.0
    evs = _eigvalsh(M)
    scale = max(1.0, float(np.abs(evs).max()))
    threshold = tol.nd_tol * scale
    return NdVerdict(bool(evs[-1] <= threshold), float(evs[-1]), threshold)


def factorize_rkhs(g: GramMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Feature matrix ``Gamma`` (n x rank) with ``Gamma @ Gamma.T`` equal to
    the eigenvalue-clipped input within ``recon_tol``.

    Row ``i`` is the finite-sample feature vector of grid point ``i``; the
    input must pass the positive-semidefiniteness check first.
    """
    verdict = check_positive_semidefinite(g, tol)
    if not verdict.passed:
        raise DefinitenessError(
            f"matrix is not positive semidefinite "
            f"(min eigenvalue {verdict.min_eigenvalue:.6e})",
            min_eigenvalue=verdict.min_eigenvalue)
    entries = _require_symmetric(g)
    evs, vecs = _eigh(entries)
    lam_max = float(evs[-1])
    scale = max(1.0, float(np.abs(evs).max()))
    if lam_max <= tol.psd_tol * scale:
        return np.zeros((entries.shape[0], 0))
    keep = evs > tol.rank_tol * lam_max
    order = np.argsort(evs[keep])[::-1]
    lam = evs[keep][order]
    V = vecs[:, keep][:, order]
    gamma = V * np.sqrt(lam)[None, :]
    clipped = (V * lam[None, :]) @ V.T
    if float(np.abs(gamma @ gamma.T - clipped).max()) > tol.recon_tol * scale:
        raise EigensolveError("feature factorization failed to reproduce the "
                              "clipped matrix within tolerance")
    return gamma

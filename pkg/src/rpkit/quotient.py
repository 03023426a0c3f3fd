"""The Osterwalder-Schrader quotient of a reflected Gram matrix.

A reflected Gram matrix ``G_tau[i,j] = K(tau(x_i), x_j)`` carries the inner
products of the quotient space: its numerical rank is the desk-scale
dimension of the quotient, and the scaled eigenvector rows give coordinates
in an orthonormal basis.  The shift semigroup descends to a contraction on
those coordinates, which is computed here by least squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .definiteness import DEFAULT_TOL, ToleranceConfig, _eigh
from .errors import DomainError, QuotientDescentError, ReflectionPositivityError
from .kernels import GramMatrix, Kernel, ReflectionSetup, negate, reflected_gram


@dataclass(eq=False)
class OSQuotient:
    """Numerical rank, spectrum and coordinate factor of a reflected Gram.

    ``factor`` has shape (rank, n); its columns are the coordinates of the
    grid vectors in an orthonormal basis of the quotient, so
    ``factor.T @ factor`` reproduces the eigenvalue-clipped input.
    ``clipped_mass`` is the total absolute mass of discarded negative
    eigenvalues (round-off level for genuinely reflection positive data).
    """

    rank: int
    eigenvalues: np.ndarray  # all eigenvalues, descending
    factor: np.ndarray
    clipped_mass: float

    def to_json_dict(self) -> dict:
        return {"rank": self.rank,
                "eigenvalues": [float(v) for v in self.eigenvalues],
                "clipped_mass": self.clipped_mass}


@dataclass(frozen=True)
class ContractionReport:
    """Operator norm of the shift map on the quotient."""

    operator_norm: float
    contraction: bool
    rank: int

    def to_json_dict(self) -> dict:
        return {"operator_norm": self.operator_norm,
                "contraction": self.contraction, "rank": self.rank}


def os_quotient(g_tau: GramMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> OSQuotient:
    """Factor a reflected Gram matrix through its numerical null space.

    Raises :class:`ReflectionPositivityError` when the matrix has an
    eigenvalue below ``-psd_tol`` relative: the data is then not reflection
    positive and no quotient exists.
    """
    entries = np.asarray(g_tau.entries, dtype=float)
    entries = (entries + entries.T) / 2.0
    evs, vecs = _eigh(entries)
    scale = max(1.0, float(np.abs(evs).max()))
    if evs[0] < -tol.psd_tol * scale:
        raise ReflectionPositivityError(
            f"reflected Gram matrix is not positive semidefinite: "
            f"min eigenvalue {float(evs[0]):.6e} below -{tol.psd_tol:g} relative",
            min_eigenvalue=float(evs[0]))
    n = entries.shape[0]
    desc = evs[::-1].copy()
    lam_max = float(evs[-1])
    clipped_mass = float(np.abs(evs[evs < 0]).sum())
    if lam_max <= tol.psd_tol * scale:
        return OSQuotient(0, desc, np.zeros((0, n)), clipped_mass)
    keep = evs > tol.rank_tol * lam_max
    order = np.argsort(evs[keep])[::-1]
    lam = evs[keep][order]
    V = vecs[:, keep][:, order]
    factor = np.sqrt(lam)[:, None] * V.T
    return OSQuotient(int(lam.size), desc, factor, clipped_mass)


def hat_contraction(spec: Kernel, setup: ReflectionSetup, shift: float,
                    tol: ToleranceConfig = DEFAULT_TOL) -> ContractionReport:
    """Operator norm of the shift-by-``shift`` map on the quotient.

    Only translation-covariant kernels on the line admit this analysis.
    The coordinates of the shifted grid vectors are recovered from the
    cross-Gram ``K(tau(x_i), x_j + shift)`` by least squares; if they fail
    to lie in the quotient's coordinate span within ``recon_tol`` the shift
    does not descend and an error is raised.
    """
    if not spec.translation_covariant:
        raise DomainError(
            f"kernel '{spec.name}' is not translation covariant; "
            "the shift semigroup analysis does not apply")
    if not shift > 0:
        raise DomainError("shift must be positive")
    for p in setup.positive_part:
        q = setup.reflection(p)
        if abs(q + p) > 1e-12 * max(1.0, abs(p)):
            raise DomainError("the quotient contraction analysis requires the "
                              "line reflection t -> -t")
    quot = os_quotient(reflected_gram(spec, setup), tol)
    if quot.rank == 0:
        return ContractionReport(0.0, True, 0)
    pts = setup.positive_part.array
    refl = np.asarray(setup.reflected_points(), dtype=float)
    lam = quot.eigenvalues[:quot.rank]
    Q = quot.factor
    # cross inner products <q(K_{x_i}), q(K_{x_j + shift})>
    B = spec.pairwise(refl, pts + shift)
    Y = (Q @ B) / lam[:, None]
    # rows of Y must lie in the row space of Q for the shift to descend
    proj = Q.T @ (Q / lam[:, None])
    resid = float(np.abs(Y - Y @ proj).max())
    scale = max(1.0, float(lam[0]))
    if resid > tol.recon_tol * scale:
        raise QuotientDescentError(
            f"shift does not descend to the quotient "
            f"(least-squares inconsistency {resid:.3e})")
    A = (Y @ Q.T) / lam[None, :]
    norm = float(np.linalg.norm(A, 2))
    return ContractionReport(norm, norm <= 1.0 + tol.psd_tol, quot.rank)

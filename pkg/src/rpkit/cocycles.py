"""Brownian-type cocycles realized as step functions.

The two-sided family ``b_t = sgn(t) * 1_[t^0, t v 0]`` is a 1-cocycle for
the translation action on L2(R): ``b_{s+t} = b_s + S_s b_t`` holds exactly
in the interval algebra.  The one-sided indicator family ``b_t = 1_[0,t]``
(t > 0) is its restriction to the positive semigroup and satisfies the
same additive identity; its dilation structure lives in the normalized
orbit ``a^{-1/2} * 1_[0,a]``, which the dilation operators permute.

Squared norms give the distance function ``psi(t) = |t|`` and the duality
with the covariance ``<b_s, b_t>`` is verified with exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .stepfun import StepFunction


class CocycleSpec(Enum):
    BROWNIAN = "brownian"
    ONE_SIDED_INDICATOR = "one-sided-indicator"


BROWNIAN = CocycleSpec.BROWNIAN
ONE_SIDED_INDICATOR = CocycleSpec.ONE_SIDED_INDICATOR


def cocycle(spec: CocycleSpec, t: float) -> StepFunction:
    """The step function attached to group element ``t``.

    Two-sided: ``sgn(t)`` times the indicator of the interval between 0 and
    ``t`` (zero function at ``t = 0``).  One-sided: the indicator of
    ``[0, t]`` for ``t > 0``.
    """
    if not math.isfinite(t):
        raise DomainError("cocycle parameter must be finite")
    if spec is CocycleSpec.ONE_SIDED_INDICATOR:
        if not t > 0:
            raise DomainError("the one-sided indicator family requires t > 0")
        return StepFunction.indicator(0.0, t)
    if t == 0.0:
        return StepFunction.zero()
    if t > 0:
        return StepFunction.indicator(0.0, t)
    return StepFunction.indicator(t, 0.0, value=-1.0)


def psi_of(spec: CocycleSpec, t: float) -> float:
    """``psi(t) = ||b_t||^2``; exactly ``|t|`` for both families.

    ``t = 0`` maps to 0 in the one-sided family too (the identity element
    carries the zero vector under any cocycle normalization).
    """
    if t == 0.0:
        return 0.0
    return cocycle(spec, t).norm_sq()


def translate(spec: CocycleSpec, f: StepFunction, s: float) -> StepFunction:
    """The orthogonal action the family is a cocycle for (translation)."""
    return f.shift(s)


@dataclass(frozen=True)
class IdentityVerdict:
    passed: bool
    distance: float

    def to_json_dict(self) -> dict:
        return {"pass": self.passed, "distance": self.distance}


def check_cocycle_identity(spec: CocycleSpec, s: float, t: float,
                           tol: float = 1e-12) -> IdentityVerdict:
    """Exact-interval comparison of ``b_{s+t}`` against ``b_s + S_s b_t``.

    The distance is expected to be exactly zero; ``tol`` only covers the
    documented breakpoint-merge slack.
    """
    if spec is CocycleSpec.ONE_SIDED_INDICATOR and not (s > 0 and t > 0):
        raise DomainError("one-sided cocycle identity requires s, t > 0")
    lhs = cocycle(spec, s + t)
    rhs = cocycle(spec, s) + translate(spec, cocycle(spec, t), s)
    distance = math.sqrt(max(lhs.distance_sq(rhs), 0.0))
    return IdentityVerdict(distance <= tol, distance)


@dataclass(frozen=True)
class DualityVerdict:
    passed: bool
    max_error: float
    covariance: float

    def to_json_dict(self) -> dict:
        return {"pass": self.passed, "max_error": self.max_error,
                "covariance": self.covariance}


def check_duality(spec: CocycleSpec, s: float, t: float,
                  tol: float = 1e-12) -> DualityVerdict:
    """Verify both halves of the covariance / distance-function duality.

    (i) ``<b_s, b_t> = (psi(s) + psi(t) - psi(t - s)) / 2`` and
    (ii) ``psi(t - s) = ||b_s - b_t||^2``, with ``psi`` evaluated through
    its even extension.
    """
    if spec is CocycleSpec.ONE_SIDED_INDICATOR and not (s > 0 and t > 0):
        raise DomainError("one-sided duality check requires s, t > 0")
    beta_s, beta_t = cocycle(spec, s), cocycle(spec, t)
    cov = beta_s.inner(beta_t)
    psi_diff = psi_of(spec, abs(t - s))
    err1 = abs(cov - 0.5 * (psi_of(spec, s) + psi_of(spec, t) - psi_diff))
    err2 = abs(psi_diff - (beta_s - beta_t).norm_sq())
    worst = max(err1, err2)
    return DualityVerdict(worst <= tol, worst, cov)


@dataclass(frozen=True)
class TrivialityVerdict:
    all_orthogonal: bool
    max_abs_inner: float
    degenerate: bool = False

    def to_json_dict(self) -> dict:
        return {"all_orthogonal": self.all_orthogonal,
                "max_abs_inner": self.max_abs_inner, "degenerate": self.degenerate}


def check_hat_triviality(spec: CocycleSpec, s_grid, tol: float = 1e-12,
                         ) -> TrivialityVerdict:
    """Orthogonality ``<b_s, b_{-t}> = 0`` across a positive grid.

    For the two-sided family this is the finite-sample marker that the
    quotient space of the associated affine action is trivial; an empty
    grid passes vacuously with the degenerate flag set.
    """
    if spec is not CocycleSpec.BROWNIAN:
        raise DomainError("the orthogonality diagnostic applies to the "
                          "two-sided family only")
    points = [float(s) for s in s_grid]
    if not points:
        return TrivialityVerdict(True, 0.0, degenerate=True)
    if any(not p > 0 for p in points):
        raise DomainError("the orthogonality diagnostic needs points in (0, inf)")
    worst = max(abs(cocycle(spec, s).inner(cocycle(spec, -t)))
                for s in points for t in points)
    return TrivialityVerdict(worst <= tol, worst)


def normalized_indicator(a: float) -> StepFunction:
    """The dilation-normalized one-sided vector ``a^{-1/2} * 1_[0,a]``.

    The dilation unitaries permute this orbit: dilating the unit indicator
    by ``t`` gives the vector at ``exp(-t)``, and pairing the orbit with the
    unit indicator reproduces ``exp(-|t|/2)``.
    """
    if not a > 0:
        raise DomainError("the normalized indicator requires a > 0")
    return StepFunction.indicator(0.0, a, value=a ** -0.5)

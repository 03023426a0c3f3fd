"""Reflection-negative functions on the line.

A symmetric function ``psi`` is reflection negative for the half-line
picture exactly when both kernels ``psi(s - t)`` (on the whole grid) and
``psi(s + t)`` (on the positive part) are negative definite, and this is
in turn equivalent to ``psi`` restricted to (0, inf) being a Bernstein
function: nonnegative with derivatives alternating in sign.  The module
verifies all three faces numerically and adds the exponential bridge to
positive definiteness plus forward evaluation / inversion of the
representation

    psi(t) = a + b*|t| + sum_i w_i * (1 - exp(-lam_i * |t|)),

with a discrete measure standing in for the integral.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .definiteness import (DEFAULT_TOL, NdVerdict, PsdVerdict, ToleranceConfig,
                           check_negative_definite, check_positive_semidefinite)
from .errors import DomainError, IngestionError
from .grids import Grid
from .kernels import GramMatrix

# fitted atoms below this fraction of the largest weight are treated as noise
WEIGHT_FLOOR_REL = 1e-10
# condition number of the active column set above which a fit is flagged
CONDITION_FLAG = 1e12


# ---------------------------------------------------------------------------
# candidate functions
# ---------------------------------------------------------------------------

class PsiSpec:
    """Base class for candidate reflection-negative functions (all even)."""

    name: str = "psi"

    def value(self, t: float) -> float:
        raise NotImplementedError

    def values(self, ts) -> np.ndarray:
        return np.array([self.value(float(t)) for t in np.asarray(ts, float).ravel()])

    def params(self) -> dict:
        return {"variant": self.name}


@dataclass(frozen=True)
class Power(PsiSpec):
    """``psi(t) = |t|^alpha`` with ``alpha >= 0``.

    At ``alpha = 0`` the value at 0 is taken to be 0 (and 1 elsewhere),
    so the even-function normalization ``psi(0) = 0`` survives the limit.
    """

    alpha: float
    name = "power"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError("power law requires a finite exponent alpha >= 0")

    def value(self, t: float) -> float:
        t = abs(t)
        if t == 0.0:
            return 0.0
        return t ** self.alpha

    def values(self, ts):
        ts = np.abs(np.asarray(ts, dtype=float))
        out = np.where(ts == 0.0, 0.0, np.power(np.where(ts == 0.0, 1.0, ts), self.alpha))
        return out

    def params(self):
        return {"variant": self.name, "alpha": self.alpha}


@dataclass(frozen=True)
class AbsoluteValue(PsiSpec):
    """``psi(t) = |t|``."""

    name = "abs"

    def value(self, t: float) -> float:
        return abs(t)

    def values(self, ts):
        return np.abs(np.asarray(ts, dtype=float))


@dataclass(frozen=True)
class LKTriple:
    """Constant, drift and discrete-measure data of the representation above.

    ``atoms`` is a finite list of ``(lam_i > 0, w_i > 0)`` pairs with
    distinct rates; finiteness of the list makes the usual integrability
    condition automatic.
    """

    a: float = 0.0
    b: float = 0.0
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if not (self.a >= 0 and self.b >= 0):
            raise DomainError("the constant and drift terms must be nonnegative")
        lams = [lam for lam, _ in self.atoms]
        if any(not (lam > 0) for lam in lams):
            raise DomainError("atom rates must be strictly positive")
        if any(not (w > 0) for _, w in self.atoms):
            raise DomainError("atom weights must be strictly positive")
        if len(set(lams)) != len(lams):
            raise DomainError("atom rates must be distinct")
        object.__setattr__(self, "atoms",
                           tuple((float(l), float(w)) for l, w in self.atoms))

    def to_json_dict(self) -> dict:
        return {"a": self.a, "b": self.b,
                "atoms": [{"lambda": l, "weight": w} for l, w in self.atoms]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "LKTriple":
        try:
            atoms = tuple((float(at["lambda"]), float(at["weight"]))
                          for at in data.get("atoms", []))
            return cls(float(data.get("a", 0.0)), float(data.get("b", 0.0)), atoms)
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"malformed triple JSON: {exc}") from None

    @classmethod
    def from_json_file(cls, path) -> "LKTriple":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def lk_eval(triple: LKTriple, t: float) -> float:
    """Forward evaluation of the representation; ``lk_eval(0) = a``."""
    t = abs(t)
    out = triple.a + triple.b * t
    for lam, w in triple.atoms:
        out += w * (1.0 - math.exp(-lam * t))
    return out


@dataclass(frozen=True)
class LKPsi(PsiSpec):
    """A candidate function given directly by its representation data."""

    triple: LKTriple
    name = "lk"

    def value(self, t: float) -> float:
        return lk_eval(self.triple, t)

    def values(self, ts):
        ts = np.abs(np.asarray(ts, dtype=float))
        out = self.triple.a + self.triple.b * ts
        for lam, w in self.triple.atoms:
            out = out + w * (1.0 - np.exp(-lam * ts))
        return out

    def params(self):
        return {"variant": self.name, **self.triple.to_json_dict()}


class TabulatedPsi(PsiSpec):
    """Sample values at fixed points; no interpolation is performed.

    Keys are stored by absolute value so the even extension is built in;
    conflicting values at ``t`` and ``-t`` are rejected.
    """

    name = "tabulated"

    def __init__(self, pairs):
        table: dict[float, float] = {}
        for t, v in pairs:
            key = abs(float(t))
            if key in table and table[key] != float(v):
                raise IngestionError(
                    f"conflicting tabulated values at +/-{key!r}")
            table[key] = float(v)
        if not table:
            raise IngestionError("tabulated function needs at least one sample")
        self._table = table

    def value(self, t: float) -> float:
        key = abs(float(t))
        try:
            return self._table[key]
        except KeyError:
            raise DomainError(
                f"point {t!r} is not among the tabulated sample points "
                "(no interpolation)") from None

    def params(self):
        return {"variant": self.name, "n": len(self._table)}


def eval_psi(spec: PsiSpec, t: float) -> float:
    """Evaluate a candidate function; even by construction."""
    return spec.value(t)


def read_psi_samples(path) -> list[tuple[float, float]]:
    """Two-column CSV ``(t, psi)``; a single non-numeric header row is allowed."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 0:
                    continue  # header
                raise IngestionError(f"{path}: malformed sample row {row!r}") from None
    if not rows:
        raise IngestionError(f"{path}: no samples found")
    return rows


# ---------------------------------------------------------------------------
# Bernstein verification by alternating forward differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernsteinReport:
    """Worst scaled violation of the alternating-difference criterion.

    ``worst_violation`` aggregates the order-0 nonnegativity values and the
    signed forward differences ``(-1)^(k-1) * diff^k`` for k = 1..k_max,
    each divided by ``max(1, max|psi|)``; the report passes iff it stays
    above ``-tolerance``.
    """

    max_order_checked: int
    worst_violation: float
    tolerance: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {"pass": self.passed, "max_order_checked": self.max_order_checked,
                "worst_violation": self.worst_violation, "tolerance": self.tolerance}


def check_bernstein(spec: PsiSpec, t_grid: Grid, h: float | None = None,
                    k_max: int = 8, tol: float = 1e-7) -> BernsteinReport:
    """Verify ``psi >= 0`` and the alternating finite-difference conditions.

    The forward differences with step ``h`` stand in for the derivative
    sign conditions; the characterization is exact in the ``h -> 0`` limit.
    ``h`` defaults to a tenth of the smallest grid spacing.
    """
    if any(p <= 0 for p in t_grid):
        raise DomainError("the Bernstein check runs on a grid in (0, inf)")
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    if h is None:
        spacing = t_grid.min_spacing()
        h = (spacing if math.isfinite(spacing) else float(t_grid.points[0])) / 10.0
    if not h > 0:
        raise DomainError("the difference step h must be positive")
    ts = t_grid.array
    table = spec.values(ts[:, None] + h * np.arange(k_max + 1)[None, :])
    table = np.asarray(table, dtype=float).reshape(len(ts), k_max + 1)
    scale = max(1.0, float(np.abs(table).max()))
    worst = float(table[:, 0].min()) / scale  # order-0: psi itself must be >= 0
    diffs = table
    for k in range(1, k_max + 1):
        diffs = diffs[:, 1:] - diffs[:, :-1]
        signed = diffs[:, 0] if k % 2 == 1 else -diffs[:, 0]
        worst = min(worst, float(signed.min()) / scale)
    return BernsteinReport(k_max, worst, tol, worst >= -tol)


# ---------------------------------------------------------------------------
# reflection negativity and the exponential bridge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReflectionNegativityVerdict:
    passed: bool
    nd_on_line: NdVerdict
    nd_on_semigroup: NdVerdict

    def to_json_dict(self) -> dict:
        return {"pass": self.passed,
                "nd_on_line": self.nd_on_line.passed,
                "nd_on_semigroup": self.nd_on_semigroup.passed,
                "line_detail": self.nd_on_line.to_json_dict(),
                "semigroup_detail": self.nd_on_semigroup.to_json_dict()}


def _positive_subgrid(grid: Grid) -> Grid:
    pos = grid.positive()
    if not pos:
        raise DomainError("grid has an empty positive part; the semigroup-side "
                          "check needs points in (0, inf)")
    return Grid(pos)


def check_reflection_negative(spec: PsiSpec, grid: Grid,
                              tol: ToleranceConfig = DEFAULT_TOL,
                              ) -> ReflectionNegativityVerdict:
    """Negative definiteness of ``psi(s - t)`` on the grid and of
    ``psi(s + t)`` on its positive part."""
    pos = _positive_subgrid(grid)
    pts, pps = grid.array, pos.array
    n_line = GramMatrix.symmetrize(
        spec.values(pts[:, None] - pts[None, :]).reshape(len(pts), len(pts)), grid)
    n_semi = GramMatrix.symmetrize(
        spec.values(pps[:, None] + pps[None, :]).reshape(len(pps), len(pps)), pos)
    v_line = check_negative_definite(n_line, tol)
    v_semi = check_negative_definite(n_semi, tol)
    return ReflectionNegativityVerdict(v_line.passed and v_semi.passed, v_line, v_semi)


@dataclass(frozen=True)
class SchoenbergVerdict:
    lam: float
    passed: bool
    pd_on_line: PsdVerdict
    pd_on_semigroup: PsdVerdict

    def to_json_dict(self) -> dict:
        return {"lambda": self.lam, "pass": self.passed,
                "pd_on_line": self.pd_on_line.passed,
                "pd_on_semigroup": self.pd_on_semigroup.passed}


def schoenberg_bridge(spec: PsiSpec, lambdas, grid: Grid,
                      tol: ToleranceConfig = DEFAULT_TOL) -> list[SchoenbergVerdict]:
    """Positive semidefiniteness of ``exp(-lam * psi)`` in both pictures.

    Exponentiating a reflection-negative function must give a reflection
    positive one for every ``lam > 0``; each requested ``lam`` gets its own
    verdict on the line and semigroup sides.
    """
    pos = _positive_subgrid(grid)
    pts, pps = grid.array, pos.array
    n_line = spec.values(pts[:, None] - pts[None, :]).reshape(len(pts), len(pts))
    n_semi = spec.values(pps[:, None] + pps[None, :]).reshape(len(pps), len(pps))
    out = []
    for lam in lambdas:
        if not lam > 0:
            raise DomainError("the exponential bridge requires lam > 0")
        v_line = check_positive_semidefinite(
            GramMatrix.symmetrize(np.exp(-lam * n_line), grid), tol)
        v_semi = check_positive_semidefinite(
            GramMatrix.symmetrize(np.exp(-lam * n_semi), pos), tol)
        out.append(SchoenbergVerdict(float(lam), v_line.passed and v_semi.passed,
                                     v_line, v_semi))
    return out


# ---------------------------------------------------------------------------
# fitting the representation from samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LKFitResult:
    """Fitted triple plus the l2 residual and conditioning diagnostics.

    ``nonunique`` flags a rank-deficient or badly conditioned active column
    set (condition number above ``CONDITION_FLAG``): the optimum is then
    only approximately identifiable, as happens when the constant column
    and very small rates compete over a short sample range.
    """

    triple: LKTriple
    residual: float
    condition_number: float
    nonunique: bool

    def to_json_dict(self) -> dict:
        cond = self.condition_number if math.isfinite(self.condition_number) else None
        return {"triple": self.triple.to_json_dict(), "residual": self.residual,
                "condition_number": cond, "nonunique": self.nonunique}


def lk_fit(samples, lambda_grid, include_a: bool = True, include_b: bool = True,
           weight_floor_rel: float = WEIGHT_FLOOR_REL) -> LKFitResult:
    """Nonnegative least squares inversion of the representation.

    Columns are the constant (optional), the drift ``t`` (optional) and one
    ``1 - exp(-lam*t)`` profile per candidate rate; the fit is the exact
    constrained optimum returned by an active-set solver.  Atoms whose
    fitted weight falls below ``weight_floor_rel`` times the largest weight
    are dropped as numerical noise.
    """
    pairs = [(float(t), float(v)) for t, v in samples]
    if len(pairs) < 2:
        raise DomainError("the fit needs at least two samples")
    ts = np.array([t for t, _ in pairs])
    psis = np.array([v for _, v in pairs])
    if np.any(ts <= 0):
        raise DomainError("sample points must be strictly positive")
    if len(set(ts.tolist())) != len(ts):
        raise DomainError("sample points must be distinct")
    lams = [float(l) for l in lambda_grid]
    if any(not (l > 0) for l in lams):
        raise DomainError("candidate rates must be strictly positive")
    if len(set(lams)) != len(lams):
        raise DomainError("candidate rates must be distinct")

    cols, tags = [], []
    if include_a:
        cols.append(np.ones_like(ts)); tags.append(("a", None))
    if include_b:
        cols.append(ts); tags.append(("b", None))
    for lam in lams:
        cols.append(1.0 - np.exp(-lam * ts)); tags.append(("atom", lam))
    A = np.column_stack(cols)
    x, residual = nnls(A, psis)

    a = b = 0.0
    atoms = []
    for coeff, (kind, lam) in zip(x, tags):
        if kind == "a":
            a = float(coeff)
        elif kind == "b":
            b = float(coeff)
        elif coeff > 0:
            atoms.append((lam, float(coeff)))
    if atoms:
        floor = weight_floor_rel * max(w for _, w in atoms)
        atoms = [(l, w) for l, w in atoms if w > floor]

    active = [j for j, coeff in enumerate(x) if coeff > 0]
    if active:
        sv = np.linalg.svd(A[:, active], compute_uv=False)
        cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    else:
        cond = 1.0
    return LKFitResult(LKTriple(a, b, tuple(atoms)), float(residual), cond,
                       cond > CONDITION_FLAG)

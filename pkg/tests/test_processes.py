import math

import numpy as np
import pytest

from rpkit import (BROWNIAN_ONE_SIDED, BROWNIAN_TWO_SIDED, NORMALIZED_ONE_SIDED,
                   DomainError, Grid, Tabulated, check_dilation_stationarity,
                   check_stationary_increments, covariance, custom,
                   fractional_brownian, increment_form, normalize_covariance)

FBM03 = fractional_brownian(0.3)


# --- covariance ----------------------------------------------------------------

def test_brownian_covariance_is_min_on_positives():
    assert covariance(BROWNIAN_TWO_SIDED, 3.0, 5.0) == 3.0


def test_brownian_covariance_opposite_signs():
    assert covariance(BROWNIAN_TWO_SIDED, -2.0, 3.0) == 0.0


def test_fbm_diagonal_power_law():
    for t in (0.5, 1.0, 2.0):
        assert covariance(FBM03, t, t) == pytest.approx(abs(t) ** 0.6, rel=1e-15)


def test_custom_delegates_to_kernel():
    grid = Grid((1.0, 2.0))
    p = custom(Tabulated(grid, np.array([[1.0, 0.25], [0.25, 4.0]])))
    assert covariance(p, 1.0, 2.0) == 0.25
    with pytest.raises(DomainError):
        covariance(p, 1.5, 2.0)


# --- increments ------------------------------------------------------------------

def test_brownian_increment_is_distance():
    for s, t in ((1.0, 2.0), (-1.5, 0.5), (2.0, 2.0), (-3.0, -0.25)):
        assert increment_form(BROWNIAN_TWO_SIDED, s, t) == abs(s - t)


def test_fbm_increment_is_power_distance():
    for s, t in ((1.0, 2.5), (-1.0, 1.0), (0.25, 0.75)):
        assert increment_form(FBM03, s, t) == pytest.approx(abs(s - t) ** 0.6,
                                                            rel=1e-12, abs=1e-14)


def test_increment_vanishes_on_diagonal():
    for p in (BROWNIAN_TWO_SIDED, FBM03, BROWNIAN_ONE_SIDED):
        assert increment_form(p, 1.25, 1.25) == 0.0


def test_increment_never_negative(rng):
    for p in (BROWNIAN_TWO_SIDED, FBM03, fractional_brownian(0.7)):
        for _ in range(50):
            s, t = rng.uniform(-4, 4, size=2)
            assert increment_form(p, s, t) >= -1e-12


# --- stationary increments ---------------------------------------------------------

def test_brownian_two_sided_stationary_increments():
    verdict = check_stationary_increments(BROWNIAN_TWO_SIDED,
                                          Grid((-1.0, 0.5, 1.0, 2.0)))
    assert verdict.passed
    assert not verdict.degenerate


def test_fbm_stationary_increments():
    verdict = check_stationary_increments(FBM03, Grid((0.25, 0.5, 1.0, 1.75)))
    assert verdict.passed


def test_one_sided_brownian_increments_stationary_where_defined():
    # D(s,t) = |s-t| survives the domain restriction to (0, inf)
    verdict = check_stationary_increments(BROWNIAN_ONE_SIDED, Grid((1.0, 2.0, 3.0)))
    assert verdict.passed


def test_rank_one_squared_kernel_fails():
    # K(s,t) = s^2 t^2 gives D(s,t) = (s^2 - t^2)^2, not shift invariant
    pts = (1.0, 2.0, 3.0, 4.0)
    entries = np.array([[(s * t) ** 2 for t in pts] for s in pts], dtype=float)
    p = custom(Tabulated(Grid(pts), entries))
    verdict = check_stationary_increments(p, Grid(pts))
    assert not verdict.passed
    # oracle at (s,t,h) = (1,2,1): D(2,3) = 25 vs D(1,2) = 9
    d12 = increment_form(p, 1.0, 2.0)
    d23 = increment_form(p, 2.0, 3.0)
    assert (d12, d23) == (9.0, 25.0)


def test_degenerate_when_no_admissible_shifts():
    grid = Grid((1.0, 8.0))
    # only shifts +-7 exist; 8+7 and 1-7 leave the tabulated domain
    entries = np.array([[1.0, 0.5], [0.5, 8.0]])
    p = custom(Tabulated(grid, entries))
    verdict = check_stationary_increments(p, grid)
    assert verdict.degenerate


# --- normalization -------------------------------------------------------------------

def test_normalized_one_sided_closed_form():
    norm = normalize_covariance(BROWNIAN_ONE_SIDED)
    for s, t in ((1.0, 4.0), (0.5, 2.0), (3.0, 3.0)):
        expected = math.sqrt(min(s, t) / max(s, t))
        assert covariance(norm, s, t) == pytest.approx(expected, rel=1e-15)
        assert covariance(NORMALIZED_ONE_SIDED, s, t) == pytest.approx(expected,
                                                                       rel=1e-15)


def test_normalized_diagonal_exactly_one(rng):
    norm = normalize_covariance(fractional_brownian(0.4))
    for t in rng.uniform(0.1, 5.0, size=10):
        assert covariance(norm, float(t), float(t)) == 1.0


def test_normalization_names_zero_variance_point():
    norm = normalize_covariance(BROWNIAN_TWO_SIDED)
    with pytest.raises(DomainError, match="0.0"):
        covariance(norm, 0.0, 1.0)


def test_normalized_gram_stays_psd(rng):
    from rpkit import check_positive_semidefinite, gram
    norm = normalize_covariance(fractional_brownian(0.35))
    pts = np.sort(rng.uniform(0.2, 3.0, size=6))
    grid = Grid(tuple(pts))
    assert check_positive_semidefinite(gram(norm.kernel, grid)).passed


# --- dilation invariance ----------------------------------------------------------------

def test_normalized_one_sided_dilation_invariant():
    verdict = check_dilation_stationarity(Grid((1.0, 2.0, 4.0)), [0.5, 3.0])
    assert verdict.passed


def test_dilation_scale_one_trivially_invariant():
    verdict = check_dilation_stationarity(Grid((1.0, 2.0, 4.0)), [1.0],
                                          p=BROWNIAN_ONE_SIDED)
    assert verdict.passed


def test_unnormalized_min_kernel_not_dilation_invariant():
    verdict = check_dilation_stationarity(Grid((1.0, 2.0, 4.0)), [2.0],
                                          p=BROWNIAN_ONE_SIDED)
    assert not verdict.passed
    # min(2s, 2t) = 2 min(s,t) doubles the covariance instead of fixing it
    assert verdict.max_deviation > 0.4


def test_dilation_needs_positive_grid():
    with pytest.raises(DomainError):
        check_dilation_stationarity(Grid((-1.0, 1.0)), [2.0])
    with pytest.raises(DomainError):
        check_dilation_stationarity(Grid((1.0, 2.0)), [-1.0])

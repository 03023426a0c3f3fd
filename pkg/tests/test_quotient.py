import math

import numpy as np
import pytest

from rpkit import (BrownianOneSided, BrownianTwoSided, DomainError, Exponential,
                   FractionalBrownian, GramMatrix, Grid, NormalizedOneSided,
                   ReflectionPositivityError, ReflectionSetup, invert,
                   reflected_gram)
from rpkit.quotient import hat_contraction, os_quotient


def test_exponential_quotient_is_one_dimensional():
    setup = ReflectionSetup(Grid((0.5, 1.0, 2.0)))
    quot = os_quotient(reflected_gram(Exponential(1.0), setup))
    assert quot.rank == 1
    assert quot.factor.shape == (1, 3)
    assert quot.clipped_mass <= 1e-12


def test_brownian_quotient_is_trivial():
    setup = ReflectionSetup(Grid((1.0, 2.0, 3.0)))
    quot = os_quotient(reflected_gram(BrownianTwoSided(), setup))
    assert quot.rank == 0
    assert quot.factor.shape == (0, 3)


def test_identity_matrix_full_rank():
    grid = Grid((1.0, 2.0, 3.0))
    quot = os_quotient(GramMatrix(np.eye(3), grid, symmetrized=True))
    assert quot.rank == 3


def test_factor_reproduces_clipped_matrix():
    setup = ReflectionSetup(Grid((0.25, 0.5, 1.0, 2.0)))
    G = reflected_gram(FractionalBrownian(0.3), setup)
    quot = os_quotient(G)
    recon = quot.factor.T @ quot.factor
    assert np.abs(recon - G.entries).max() <= 1e-8


def test_eigenvalues_descending_and_complete():
    setup = ReflectionSetup(Grid((0.5, 1.0, 2.0)))
    quot = os_quotient(reflected_gram(Exponential(0.5), setup))
    assert len(quot.eigenvalues) == 3
    assert all(a >= b for a, b in zip(quot.eigenvalues, quot.eigenvalues[1:]))


def test_rank_invariant_under_relabeling(rng):
    pts = np.sort(rng.uniform(0.2, 3.0, size=6))
    setup = ReflectionSetup(Grid(tuple(pts)))
    G = reflected_gram(FractionalBrownian(0.4), setup)
    base = os_quotient(G).rank
    for _ in range(5):
        perm = rng.permutation(6)
        permuted = GramMatrix(G.entries[np.ix_(perm, perm)], G.grid, symmetrized=True)
        assert os_quotient(permuted).rank == base


def test_not_reflection_positive_raises_with_eigenvalue():
    grid = Grid((0.0, 1.0))
    g = GramMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), grid, symmetrized=True)
    with pytest.raises(ReflectionPositivityError) as err:
        os_quotient(g)
    assert err.value.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)


def test_fbm_above_half_not_reflection_positive():
    # psi(t) = |t|^{2H} stops being reflection negative above H = 1/2, so the
    # reflected Gram picks up a genuinely negative eigenvalue
    setup = ReflectionSetup(Grid((0.5, 1.0, 2.0, 4.0)))
    with pytest.raises(ReflectionPositivityError):
        os_quotient(reflected_gram(FractionalBrownian(0.8), setup))


def test_invert_reflection_quotient_rank_one():
    # reflected through t -> 1/t the normalized one-sided kernel becomes
    # sqrt(s*t) on (0,1): a rank-one square
    setup = ReflectionSetup(Grid((0.2, 0.4, 0.8)), invert)
    quot = os_quotient(reflected_gram(NormalizedOneSided(), setup))
    assert quot.rank == 1


# --- the shift contraction ---------------------------------------------------

def test_contraction_norm_matches_exponential_multiplier():
    setup = ReflectionSetup(Grid((0.5, 1.0, 2.0)))
    for shift in (0.1, 0.5, 1.0, 2.0):
        report = hat_contraction(Exponential(1.0), setup, shift)
        assert report.operator_norm == pytest.approx(math.exp(-shift), abs=1e-8)
        assert report.contraction
        assert report.rank == 1


def test_contraction_norm_sweep(rng):
    setup = ReflectionSetup(Grid((0.3, 0.9, 1.7, 2.2)))
    lam = 0.8
    for shift in rng.uniform(0.1, 2.0, size=10):
        report = hat_contraction(Exponential(lam), setup, float(shift))
        assert report.operator_norm == pytest.approx(math.exp(-lam * shift), abs=1e-8)


def test_constant_kernel_shift_is_isometry():
    setup = ReflectionSetup(Grid((0.5, 1.0, 2.0)))
    report = hat_contraction(Exponential(0.0), setup, 1.3)
    assert report.operator_norm == pytest.approx(1.0, abs=1e-10)
    assert report.contraction


def test_trivial_quotient_gives_zero_norm():
    setup = ReflectionSetup(Grid((1.0, 2.0, 3.0)))
    report = hat_contraction(BrownianTwoSided(), setup, 0.7)
    assert report.operator_norm == 0.0
    assert report.contraction
    assert report.rank == 0


def test_contraction_requires_translation_covariance():
    setup = ReflectionSetup(Grid((0.5, 1.0)))
    with pytest.raises(DomainError, match="translation"):
        hat_contraction(BrownianOneSided(), setup, 0.5)


def test_contraction_requires_line_reflection():
    setup = ReflectionSetup(Grid((0.2, 0.5)), invert)
    with pytest.raises(DomainError, match="line reflection"):
        hat_contraction(Exponential(1.0), setup, 0.5)


def test_contraction_requires_positive_shift():
    setup = ReflectionSetup(Grid((0.5, 1.0)))
    with pytest.raises(DomainError):
        hat_contraction(Exponential(1.0), setup, 0.0)


def test_fbm_shift_report_is_diagnostic():
    # the reflected fBm Gram has full rank, so the analysis runs, but the
    # shift map on the covariance span is not a contraction away from H=1/2
    # (the contraction property lives on the exponential side)
    setup = ReflectionSetup(Grid((0.5, 1.0, 1.5, 2.0)))
    report = hat_contraction(FractionalBrownian(0.3), setup, 0.4)
    assert report.rank == 4
    assert report.operator_norm > 0.0

import math

import numpy as np
import pytest

from rpkit import (BrownianOneSided, BrownianTwoSided, DomainError, Exponential,
                   FractionalBrownian, GaussianFock, Grid, IngestionError,
                   NormalizedOneSided, ReflectionSetup, Tabulated, eval_kernel,
                   gram, identity, invert, negate, reflected_gram)

KERNELS_ON_LINE = [Exponential(0.7), BrownianTwoSided(), FractionalBrownian(0.3)]


# --- eval_kernel -----------------------------------------------------------

def test_brownian_two_sided_opposite_signs_vanish():
    assert eval_kernel(BrownianTwoSided(), 1.0, -1.0) == 0.0
    assert eval_kernel(BrownianTwoSided(), -2.0, 3.0) == 0.0


def test_fbm_at_half_is_min_on_positives():
    assert eval_kernel(FractionalBrownian(0.5), 2.0, 3.0) == 2.0


def test_normalized_one_sided_value():
    val = eval_kernel(NormalizedOneSided(), 1.0, 4.0)
    assert val == 0.5
    # cross-check against the other closed form (s ^ t) / sqrt(s t)
    assert val == pytest.approx(min(1.0, 4.0) / math.sqrt(1.0 * 4.0), abs=1e-15)


def test_exponential_requires_nonnegative_rate():
    with pytest.raises(DomainError):
        Exponential(-0.5)


def test_fbm_requires_hurst_in_unit_interval():
    for h in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(DomainError):
            FractionalBrownian(h)


@pytest.mark.parametrize("kernel", [BrownianOneSided(), NormalizedOneSided()])
def test_one_sided_domain_errors_name_the_kernel(kernel):
    with pytest.raises(DomainError, match=kernel.name):
        eval_kernel(kernel, -1.0, 2.0)
    with pytest.raises(DomainError, match=kernel.name):
        eval_kernel(kernel, 1.0, 0.0)


def test_gaussian_fock_on_vectors():
    k = GaussianFock()
    assert eval_kernel(k, (0.0,), (1.0,)) == pytest.approx(math.exp(-0.5), abs=1e-16)
    assert eval_kernel(k, (1.0, 2.0), (1.0, 2.0)) == 1.0
    with pytest.raises(DomainError):
        eval_kernel(k, (1.0, 2.0), (1.0,))


@pytest.mark.parametrize("kernel", KERNELS_ON_LINE + [GaussianFock()])
def test_eval_symmetric_in_arguments(kernel, rng):
    for _ in range(20):
        s, t = rng.uniform(-3, 3, size=2)
        assert eval_kernel(kernel, s, t) == eval_kernel(kernel, t, s)


# --- gram -------------------------------------------------------------------

def test_gram_brownian_one_sided_integers():
    G = gram(BrownianOneSided(), Grid((1.0, 2.0, 3.0)))
    assert np.array_equal(G.entries, [[1, 1, 1], [1, 2, 2], [1, 2, 3]])
    assert G.symmetrized


def test_gram_exponential_rate_zero_is_all_ones():
    G = gram(Exponential(0.0), Grid((-1.0, 0.0, 2.5)))
    assert np.array_equal(G.entries, np.ones((3, 3)))


def test_gram_gaussian_fock_distance_one():
    G = gram(GaussianFock(), Grid((0.0, 1.0)))
    e = math.exp(-0.5)
    assert np.allclose(G.entries, [[1.0, e], [e, 1.0]], atol=1e-16)


def test_gram_propagates_domain_error_with_point():
    with pytest.raises(DomainError, match="-1.0"):
        gram(BrownianOneSided(), Grid((-1.0, 2.0)))


@pytest.mark.parametrize("kernel", KERNELS_ON_LINE)
def test_gram_exactly_symmetric(kernel, rng):
    pts = np.sort(rng.uniform(-4, 4, size=7))
    G = gram(kernel, Grid(tuple(pts)))
    assert np.array_equal(G.entries, G.entries.T)


# --- reflected gram -----------------------------------------------------------

def test_reflected_exponential_is_rank_one_product():
    setup = ReflectionSetup(Grid((0.5, 1.5)))
    G = reflected_gram(Exponential(1.0), setup)
    expected = [[math.exp(-1.0), math.exp(-2.0)], [math.exp(-2.0), math.exp(-3.0)]]
    assert np.allclose(G.entries, expected, rtol=1e-15)


def test_reflected_brownian_two_sided_vanishes():
    setup = ReflectionSetup(Grid((1.0, 2.0)))
    G = reflected_gram(BrownianTwoSided(), setup)
    assert np.array_equal(G.entries, np.zeros((2, 2)))


def test_reflected_tabulated_identity_under_identity_reflection():
    grid = Grid((1.0, 2.0, 3.0))
    tab = Tabulated(grid, np.eye(3))
    G = reflected_gram(tab, ReflectionSetup(grid, identity))
    assert np.array_equal(G.entries, np.eye(3))


def test_reflected_points_must_stay_in_domain():
    with pytest.raises(DomainError):
        reflected_gram(BrownianOneSided(), ReflectionSetup(Grid((1.0, 2.0))))


def test_reflection_must_be_involution():
    with pytest.raises(DomainError, match="involution"):
        ReflectionSetup(Grid((1.0, 2.0)), reflection=lambda t: t + 1.0)


def test_invert_reflection_on_positive_grid():
    setup = ReflectionSetup(Grid((0.25, 0.5, 0.8)), invert)
    G = reflected_gram(NormalizedOneSided(), setup)
    # on (0,1) the reflected kernel collapses to sqrt(s*t)
    pts = np.array([0.25, 0.5, 0.8])
    assert np.allclose(G.entries, np.sqrt(pts[:, None] * pts[None, :]), rtol=1e-14)


# --- tabulated ingestion ---------------------------------------------------------

def test_tabulated_symmetrizes_and_records_asymmetry():
    grid = Grid((0.0, 1.0))
    tab = Tabulated(grid, np.array([[1.0, 0.5 + 1e-8], [0.5, 1.0]]))
    assert tab.asymmetry == pytest.approx(1e-8, rel=1e-3)
    assert tab.entries[0, 1] == tab.entries[1, 0]


def test_tabulated_rejects_large_asymmetry():
    with pytest.raises(IngestionError, match="asymmetry"):
        Tabulated(Grid((0.0, 1.0)), np.array([[1.0, 0.6], [0.5, 1.0]]))


def test_tabulated_rejects_bad_shape():
    with pytest.raises(IngestionError):
        Tabulated(Grid((0.0, 1.0)), np.eye(3))


def test_tabulated_lookup_off_grid_fails():
    tab = Tabulated(Grid((0.0, 1.0)), np.eye(2))
    with pytest.raises(DomainError):
        tab.value(0.5, 1.0)


def test_tabulated_csv_round_trip(tmp_path):
    grid = Grid((0.5, 1.0, 2.0))
    entries = gram(BrownianOneSided(), grid).entries
    tab = Tabulated(grid, entries)
    path = tmp_path / "kernel.csv"
    tab.to_csv(path)
    back = Tabulated.from_csv(path)
    assert back.grid.points == grid.points
    assert np.array_equal(back.entries, tab.entries)


def test_tabulated_csv_mismatched_grids_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(",1,2\n1,1,0\n3,0,1\n")
    with pytest.raises(IngestionError, match="differ"):
        Tabulated.from_csv(path)

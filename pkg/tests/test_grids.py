import math

import pytest

from rpkit import DomainError, Grid


def test_strictly_increasing_required():
    with pytest.raises(DomainError):
        Grid((1.0, 1.0, 2.0))
    with pytest.raises(DomainError):
        Grid((2.0, 1.0))
    with pytest.raises(DomainError):
        Grid(())


def test_finite_required():
    with pytest.raises(DomainError):
        Grid((0.0, math.inf))
    with pytest.raises(DomainError):
        Grid((math.nan,))


def test_of_sorts():
    assert Grid.of([3.0, 1.0, 2.0]).points == (1.0, 2.0, 3.0)


def test_spec_range_includes_stop_on_lattice():
    g = Grid.from_spec("-2:2:0.5")
    assert len(g) == 9
    assert g.points[0] == -2.0 and g.points[-1] == 2.0


def test_spec_range_excludes_off_lattice_stop():
    g = Grid.from_spec("0:2:0.3")
    # lattice 0, .3, .6, ..., 1.8; 2.0 is 0.2/0.3 of a step away
    assert g.points[-1] == pytest.approx(1.8)
    assert len(g) == 7


def test_spec_explicit_list():
    g = Grid.from_spec("-2,-1,-0.5,0.5,1,2")
    assert g.points == (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def test_spec_single_value():
    assert Grid.from_spec("1.5").points == (1.5,)


@pytest.mark.parametrize("bad", ["1:2", "1:2:3:4", "2:1:0.5", "0:1:0", "a,b", ""])
def test_spec_malformed(bad):
    with pytest.raises(DomainError):
        Grid.from_spec(bad)


def test_positive_part():
    g = Grid.from_spec("-2,-1,-0.5,0.5,1,2")
    assert g.positive() == (0.5, 1.0, 2.0)


def test_min_spacing():
    assert Grid((0.0, 0.5, 2.0)).min_spacing() == 0.5
    assert Grid((1.0,)).min_spacing() == math.inf

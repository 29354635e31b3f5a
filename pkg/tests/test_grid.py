import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from randvec import ConstructionError, Interval, make_grid, sample_nodes


def test_two_cells(unit):
    g = make_grid(unit, 2)
    assert g.nodes.tolist() == [0.0, 0.5, 1.0]
    assert g.step == 0.5


def test_one_cell(unit):
    assert make_grid(unit, 1).nodes.tolist() == [0.0, 1.0]


def test_quantum_grid_has_2n_plus_1_nodes(unit):
    for n in (1, 3, 10):
        assert make_grid(unit, 2 * n).nodes.size == 2 * n + 1


@pytest.mark.parametrize("n", [0, -1, 2.5, True])
def test_bad_cell_count(unit, n):
    with pytest.raises(ConstructionError):
        make_grid(unit, n)


@pytest.mark.parametrize("lo,hi", [(1, 1), (2, 1), (0, math.inf), (math.nan, 1)])
def test_bad_interval(lo, hi):
    with pytest.raises(ConstructionError):
        Interval(lo, hi)


def test_parabola_samples(unit):
    v = sample_nodes(lambda x: x - x * x, make_grid(unit, 4))
    assert v.y.tolist() == [0.0, 0.1875, 0.25, 0.1875, 0.0]
    assert (v.y_min, v.y_max) == (0.0, 0.25)


def test_constant_samples(unit):
    v = sample_nodes(lambda x: 3.0, make_grid(unit, 5))
    assert np.all(v.y == 3.0) and v.y_min == v.y_max == 3.0 and v.is_constant


def test_identity_samples(unit):
    assert sample_nodes(lambda x: x, make_grid(unit, 2)).y.tolist() == [0.0, 0.5, 1.0]


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_sample_rejected(unit, bad):
    with pytest.raises(ConstructionError):
        sample_nodes(lambda x: bad if x == 0.5 else x, make_grid(unit, 2))


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(finite, st.floats(1e-3, 1e3), st.integers(1, 500))
def test_grid_invariants(lo, width, n):
    g = make_grid(Interval(lo, lo + width), n)
    hi = g.interval.hi
    assert g.nodes[0] == lo and g.nodes[-1] == hi
    assert np.all(np.diff(g.nodes) > 0)
    assert abs(g.step * n - (hi - lo)) <= 1e-12 * max(1.0, abs(hi - lo))
    ideal = lo + np.arange(n + 1) * g.step
    assert np.max(np.abs(g.nodes - ideal)) <= 1e-12 * max(1.0, abs(lo), abs(hi))


@given(st.floats(-5, 5), st.floats(0.1, 5), st.integers(1, 40))
def test_affine_rescaling(lo, width, n):
    hi = lo + width
    f = lambda x: math.sin(x) + x * x
    on_ab = sample_nodes(f, make_grid(Interval(lo, hi), n)).y
    on_unit = sample_nodes(lambda u: f((hi - lo) * u + lo), make_grid(Interval(0, 1), n)).y
    np.testing.assert_allclose(on_ab, on_unit, rtol=0, atol=1e-12 * max(1.0, abs(lo), abs(hi)) * 10)

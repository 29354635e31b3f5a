import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import OracleKernel

from randvec import (
    ConstructionError,
    Interval,
    QuadratureSpec,
    build_kernel,
    kernel_eval,
    make_grid,
    normalize,
    sample_nodes,
    y_slice_integrals,
)
from randvec.basis import LINEAR, SQUARED_TRIG


def kernel_for(f, n, family="triangular", interval=Interval(0.0, 1.0)):
    cells = 2 * n if family == "trig" else n
    values = sample_nodes(f, make_grid(interval, cells))
    return build_kernel(values, family), values


def test_peak_at_node_pairs():
    k, v = kernel_for(lambda x: x ** 3 + x, 5)
    for x, y in zip(v.grid.nodes, v.y):
        assert kernel_eval(k, x, y) == 1.0


def test_hand_value_identity_two_cells():
    k, _ = kernel_for(lambda x: x, 2)
    assert kernel_eval(k, 0.25, 0.25) == 0.25


def test_eval_outside_raises_density_outside_zero():
    k, _ = kernel_for(lambda x: x, 2)
    with pytest.raises(ConstructionError):
        k.eval(1.5, 0.5)
    d = normalize(k)
    assert d(1.5, 0.5) == 0 and d(0.5, -1.0) == 0
    assert d(0.5, 0.5) == pytest.approx(k.eval(0.5, 0.5) / d.H)


def test_pairing_is_diagonal_and_starts_at_zero():
    k, _ = kernel_for(lambda x: x * (1 - x), 2, "trig")
    assert k.pairing[0] == (0, 0)
    assert [i for i, _ in k.pairing] == list(range(5))
    # symmetric nodes route to the left representative
    assert k.pairing[3] == (3, 1) and k.pairing[4] == (4, 0)


def test_constant_values_refused():
    with pytest.raises(ConstructionError):
        kernel_for(lambda x: 2.0, 3)


@pytest.mark.parametrize("p", [0, 1, 3, 2.5])
def test_quadrature_spec_validation(p):
    with pytest.raises(ConstructionError):
        QuadratureSpec(p)


def test_simpson_weights_integrate_cubics():
    q = QuadratureSpec(4)
    u, w = q.unit_nodes, q.unit_weights
    for deg in range(4):
        assert w @ u ** deg == pytest.approx(1 / (deg + 1), abs=1e-15)


@pytest.mark.parametrize("profile", [LINEAR, SQUARED_TRIG])
@given(st.floats(1e-6, 1), st.floats(1e-6, 1))
def test_crossover_balances_products(profile, wf, wr):
    t = profile.crossover(wf, wr)
    assert wf * profile.fall(t) == pytest.approx(wr * profile.rise(t), abs=1e-14)


FUNCS = [lambda x: x, lambda x: x * (1 - x), lambda x: np.sin(3 * x) + 0.1, lambda x: abs(x - 0.37)]


@pytest.mark.parametrize("family", ["triangular", "trig"])
@pytest.mark.parametrize("fi", range(len(FUNCS)))
def test_reference_equals_fast_and_range(family, fi):
    k, v = kernel_for(FUNCS[fi], 6, family)
    rng = np.random.default_rng(fi)
    x = rng.uniform(0, 1, 10_000)
    y = rng.uniform(k.support_y.lo, k.support_y.hi, 10_000)
    fast = k.eval(x, y)
    assert np.array_equal(fast, k.eval_reference(x, y))
    assert np.all((fast >= 0) & (fast <= 1))
    # and the kernel equals a from-scratch rebuild of the formulas
    oracle = OracleKernel(family, v.grid.nodes, v.y)
    np.testing.assert_allclose(fast, oracle.full(x, y), atol=1e-14)


def test_continuity_probe_triangular():
    k, v = kernel_for(lambda x: x * (1 - x) + 0.2 * x, 8)
    h = 1e-4
    gaps = np.diff(k.basis_y.strict_nodes)
    lip = 1 / v.grid.step + 1 / gaps.min()
    xs = np.arange(0, 1, h)
    for y in np.linspace(k.support_y.lo, k.support_y.hi, 37):
        r = k.eval(xs, y)
        assert np.max(np.abs(np.diff(r))) <= lip * h
    ys = np.arange(k.support_y.lo, k.support_y.hi, h)
    for x in np.linspace(0, 1, 37):
        r = k.eval(x, ys)
        assert np.max(np.abs(np.diff(r))) <= lip * h


def test_H_positive_identity_all_n():
    for n in range(1, 21):
        k, _ = kernel_for(lambda x: x, n)
        assert normalize(k).H > 0


@pytest.mark.parametrize("family,n", [("triangular", 8), ("trig", 4)])
def test_normalization_against_oracle(family, n):
    k, v = kernel_for(lambda x: x * (1 - x), n, family)
    d = normalize(k)
    oracle = OracleKernel(family, v.grid.nodes, v.y)
    assert abs(oracle.total_mass(panels=256) / d.H - 1) <= 1e-6


@pytest.mark.parametrize("family", ["triangular", "trig"])
def test_panel_doubling_stable(family):
    k, _ = kernel_for(lambda x: np.sin(3 * x) + x * x, 6, family)
    h1 = normalize(k, QuadratureSpec(64)).H
    h2 = normalize(k, QuadratureSpec(128)).H
    assert abs(h2 / h1 - 1) < 1e-8


def test_triangular_slices_exact():
    # piecewise polynomial integrands with located kinks: Simpson is exact
    k, v = kernel_for(lambda x: abs(x - 0.4) + x * x, 5)
    xs = np.linspace(0, 1, 53)
    i0_2, _ = k.slice_integrals(xs, QuadratureSpec(2))
    i0_64, _ = k.slice_integrals(xs, QuadratureSpec(64))
    np.testing.assert_allclose(i0_2, i0_64, rtol=1e-13)


@pytest.mark.parametrize("family", ["triangular", "trig"])
def test_slices_against_kink_oracle(family):
    k, v = kernel_for(lambda x: np.sin(3 * x) + 0.3 * x, 5, family)
    oracle = OracleKernel(family, v.grid.nodes, v.y)
    xs = np.random.default_rng(3).uniform(0, 1, 200)
    ref = oracle.slice_mass(xs, panels=256)
    # fourth-order convergence: default panels within 1e-8, matched panels within 1e-10
    np.testing.assert_allclose(k.slice_integrals(xs)[0], ref, rtol=1e-8)
    np.testing.assert_allclose(k.slice_integrals(xs, QuadratureSpec(256))[0], ref, rtol=1e-10)


def test_slice_at_left_end_in_first_sorted_cell():
    k, v = kernel_for(lambda x: x, 2)
    i0, i1 = y_slice_integrals(k, 0.0)
    assert isinstance(i0, float) and i0 > 0
    assert v.y[0] <= i1 / i0 <= v.y[1]


@pytest.mark.parametrize("family", ["triangular", "trig"])
def test_slice_mass_positive_everywhere(family):
    k, _ = kernel_for(lambda x: np.cos(5 * x), 7, family)
    i0, _ = y_slice_integrals(k, np.linspace(0, 1, 2001))
    assert np.all(i0 > 0)


@pytest.mark.parametrize("family", ["triangular", "trig"])
def test_symmetric_function_gives_symmetric_mean(family):
    # n a power of two keeps the grid exact, so mirrored nodes give equal values
    k, v = kernel_for(lambda x: x * (1 - x), 4, family)
    xs = np.linspace(0, 1, 201)
    i0, i1 = k.slice_integrals(xs)
    mean = i1 / i0
    np.testing.assert_allclose(mean, mean[::-1], atol=1e-9)
    oracle = OracleKernel(family, v.grid.nodes, v.y)
    sub = xs[::20]
    np.testing.assert_allclose(mean[::20], oracle.trapezoid_mean(sub, 100_000), atol=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-5, 5).map(float), min_size=3, max_size=9), st.sampled_from(["triangular", "trig"]))
def test_slice_mean_inside_y_range(vals, family):
    if len(set(vals)) < 2 or (family == "trig" and len(vals) % 2 == 0):
        return
    it = iter(vals)
    grid = make_grid(Interval(0, 1), len(vals) - 1)
    values = sample_nodes(lambda x: next(it), grid)
    k = build_kernel(values, family)
    i0, i1 = k.slice_integrals(np.linspace(0, 1, 97))
    assert np.all(i0 > 0)
    m = i1 / i0
    assert np.all((m >= min(vals) - 1e-12) & (m <= max(vals) + 1e-12))


def test_rounding_split_values_stay_distinct_and_resolved():
    # x - x^2 on tenths: mirrored nodes differ in the last bit, so they form separate classes
    k, v = kernel_for(lambda x: x - x * x, 5, "trig")
    gaps = np.diff(k.basis_y.strict_nodes)
    assert gaps.min() < 1e-15
    assert k.basis_y.strict_nodes.size > np.unique(np.round(v.y, 12)).size
    oracle = OracleKernel("trig", v.grid.nodes, v.y)
    xs = np.linspace(0, 1, 41)
    i0, i1 = k.slice_integrals(xs)
    np.testing.assert_allclose(i1 / i0, oracle.conditional_mean(xs), atol=1e-8)
    # a sample grid blind to the sub-ulp cell converges only at first order
    coarse = np.max(np.abs(oracle.trapezoid_mean(xs, 10_000, align=False) - i1 / i0))
    fine = np.max(np.abs(oracle.trapezoid_mean(xs, 40_000, align=False) - i1 / i0))
    assert 3 < coarse / fine < 5
    aligned = np.max(np.abs(oracle.trapezoid_mean(xs, 10_000) - i1 / i0))
    assert aligned < 1e-7

"""Conditional-expectation approximants and their error analysis."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .basis import TriangularBasisX
from .grid import ConstructionError, EquidistantGrid, Interval, NodeValues, make_grid, sample_nodes
from .kernel import (
    DEFAULT_QUADRATURE,
    JointDensity,
    MaxProductKernel,
    NumericalError,
    QuadratureSpec,
    build_kernel,
    normalize,
)
from .ordering import gap_report, sort_and_screen

log = logging.getLogger(__name__)

QUADRATURE = "quadrature"
CLOSED_FORM = "closed_form"
CONSTANT = "constant"

_MODE_ALIASES = {
    "quad": QUADRATURE,
    "quadrature": QUADRATURE,
    "closed": CLOSED_FORM,
    "closed_form": CLOSED_FORM,
}
_FAMILY_ALIASES = {"tri": "triangular", "triangular": "triangular", "trig": "trig"}

# slack on top of 3 * max sorted gap for quadrature round-off
BOUND_ALLOWANCE = 1e-6


def _family(name: str) -> str:
    try:
        return _FAMILY_ALIASES[name]
    except KeyError:
        raise ConstructionError(f"unknown basis family {name!r}") from None


def _mode(name: str | None, family: str) -> str:
    if name is None:
        return CLOSED_FORM if family == "triangular" else QUADRATURE
    try:
        return _MODE_ALIASES[name]
    except KeyError:
        raise ConstructionError(f"unknown mode {name!r}") from None


class ClosedFormWeights:
    """Interpolation weights ``A_l(x) dy_l / sum_j A_j(x) dy_j`` on hat functions.

    ``dy_l`` is the gap from node ``l`` to its predecessor in sorted order, the
    smallest node borrowing the gap of the second smallest.  All gaps are
    nonnegative, so the weights are too.
    """

    def __init__(self, basis: TriangularBasisX, y: np.ndarray):
        self.basis = basis
        self.y = np.asarray(y, dtype=float)
        order = sort_and_screen(self.y)
        perm = order.perm
        gaps = np.empty(self.y.size)
        gaps[perm[1:]] = np.diff(order.sorted_values)
        gaps[perm[0]] = gaps[perm[1]]
        gaps.setflags(write=False)
        self.gaps = gaps
        self.floor = 1e-14 * float(self.y.max() - self.y.min())

    def _cell_terms(self, x):
        k, t = self.basis.locate(x)
        a0 = self.basis.profile.fall(t)
        a1 = self.basis.profile.rise(t)
        den = a0 * self.gaps[k] + a1 * self.gaps[k + 1]
        return k, t, a0, a1, den

    def phi(self, x) -> np.ndarray:
        """Weight matrix, shape ``(len(x), n+1)``; zero rows where the denominator is below floor."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        A = self.basis.matrix(x)
        num = A * self.gaps
        den = num.sum(axis=1, keepdims=True)
        ok = den > self.floor
        return np.where(ok, num / np.where(ok, den, 1.0), 0.0)

    def denominator(self, x) -> np.ndarray:
        return self._cell_terms(np.asarray(x, dtype=float))[4]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k, t, a0, a1, den = self._cell_terms(x)
        y0, y1 = self.y[k], self.y[k + 1]
        ok = den >= self.floor
        safe = np.where(ok, den, 1.0)
        w0 = a0 * self.gaps[k] / safe
        w1 = a1 * self.gaps[k + 1] / safe
        value = w0 * y0 + w1 * y1
        if not np.all(ok):
            log.info("closed-form denominator below floor at %d point(s); using linear fallback",
                     int(np.size(ok) - np.count_nonzero(ok)))
            value = np.where(ok, value, (1.0 - t) * y0 + t * y1)
        return value


class Approximant:
    """Evaluator of ``f_n``; build with :func:`build_approximant`."""

    def __init__(
        self,
        mode: str,
        values: NodeValues,
        family: str | None = None,
        n: int | None = None,
        kernel: MaxProductKernel | None = None,
        weights: ClosedFormWeights | None = None,
        beta: float | None = None,
        quadrature: QuadratureSpec = DEFAULT_QUADRATURE,
    ):
        self.mode = mode
        self.values = values
        self.family = family
        self.n = n
        self.kernel = kernel
        self.weights = weights
        self.beta = beta
        self.quadrature = quadrature

    @property
    def grid(self) -> EquidistantGrid:
        return self.values.grid

    @property
    def interval(self) -> Interval:
        return self.values.grid.interval

    @cached_property
    def density(self) -> JointDensity | None:
        if self.kernel is None:
            return None
        return normalize(self.kernel, self.quadrature)

    def __call__(self, x):
        return eval_approximant(self, x)

    def __repr__(self):
        return f"Approximant(mode={self.mode!r}, family={self.family!r}, n={self.n})"


def build_approximant(
    f: Callable[[float], float],
    interval: Interval,
    n: int,
    family: str = "triangular",
    mode: str | None = None,
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE,
) -> Approximant:
    """Sample ``f`` and assemble the approximant of order ``n``.

    For the trig family ``n`` is the quantum number and the grid has ``2n``
    cells.  A constant sample set short-circuits to the constant path.
    """
    family = _family(family)
    mode = _mode(mode, family)
    if family == "trig" and mode == CLOSED_FORM:
        raise ConstructionError("closed_form mode is only defined for the triangular family")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ConstructionError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    cells = 2 * n if family == "trig" else n
    values = sample_nodes(f, make_grid(interval, cells))
    if values.is_constant:
        return Approximant(CONSTANT, values, family=family, n=n, beta=float(values.y[0]),
                           quadrature=quadrature)
    kernel = build_kernel(values, family)
    weights = None
    if mode == CLOSED_FORM:
        weights = ClosedFormWeights(kernel.basis_x, values.y)
    return Approximant(mode, values, family=family, n=n, kernel=kernel, weights=weights,
                       quadrature=quadrature)


def _conditional_mean(kernel: MaxProductKernel, x, quad: QuadratureSpec):
    i0, i1 = kernel.slice_integrals(x, quad)
    floor = kernel.denominator_floor
    if np.any(~(i0 >= floor)):
        raise NumericalError(f"conditional-expectation denominator below floor {floor!r}")
    return np.clip(i1 / i0, kernel.support_y.lo, kernel.support_y.hi)


def eval_approximant(appx: Approximant, x):
    x = np.asarray(x, dtype=float)
    if not np.all(appx.interval.contains(x)):
        raise ConstructionError(f"x outside [{appx.interval.lo}, {appx.interval.hi}]")
    if appx.mode == CONSTANT:
        out = np.full(x.shape, appx.beta)
    elif appx.mode == CLOSED_FORM:
        out = np.clip(appx.weights(x), appx.values.y_min, appx.values.y_max)
    else:
        out = _conditional_mean(appx.kernel, x, appx.quadrature)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ErrorReport:
    n: int
    sup_error: float
    bound_3dy: float
    probe_count: int
    max_node_residual: float
    within_bound: bool


@dataclass(frozen=True)
class ResidualReport:
    n: int
    residual_sup: float


def probe_grid(interval: Interval, probes: int) -> np.ndarray:
    """Equispaced probes with both endpoints exact."""
    if isinstance(probes, bool) or int(probes) != probes or probes < 2:
        raise ConstructionError(f"probe count must be an integer >= 2, got {probes!r}")
    xs = np.linspace(interval.lo, interval.hi, int(probes))
    xs[0], xs[-1] = interval.lo, interval.hi
    return xs


def _sample(f, xs) -> np.ndarray:
    return np.array([float(f(float(x))) for x in xs])


def error_report(appx: Approximant, f: Callable[[float], float], probes: int = 1001) -> ErrorReport:
    if probes < 101:
        raise ConstructionError(f"error_report needs at least 101 probes, got {probes}")
    xs = probe_grid(appx.interval, probes)
    diff = np.abs(eval_approximant(appx, xs) - _sample(f, xs))
    nodes = appx.grid.nodes
    node_res = np.abs(eval_approximant(appx, nodes) - appx.values.y)
    sup = float(diff.max())
    bound = 3.0 * gap_report(appx.values.y).d
    return ErrorReport(
        n=int(appx.n),
        sup_error=sup,
        bound_3dy=bound,
        probe_count=int(probes),
        max_node_residual=float(node_res.max()),
        within_bound=bool(sup <= bound + BOUND_ALLOWANCE),
    )


def residual_report(density, f: Callable[[float], float], probes: int = 1001) -> ResidualReport:
    """Sup over probes of ``|int y p dy / int p dy - f|`` for a normalised density.

    ``density`` may also be an :class:`Approximant`; a constant one has no
    density and its residual is identically zero.
    """
    n = 0
    if isinstance(density, Approximant):
        n = int(density.n)
        if density.mode == CONSTANT:
            return ResidualReport(n=n, residual_sup=0.0)
        density = density.density
    kernel = density.kernel
    xs = probe_grid(kernel.support_x, probes)
    i0, i1 = kernel.slice_integrals(xs, density.quadrature)
    p0, p1 = i0 / density.H, i1 / density.H
    floor = kernel.denominator_floor / density.H
    if np.any(~(p0 >= floor)):
        raise NumericalError("marginal density below floor")
    mean = np.clip(p1 / p0, kernel.support_y.lo, kernel.support_y.hi)
    if n == 0:
        n = kernel.basis_x.size - 1
        if kernel.family == "trig":
            n //= 2
    return ResidualReport(n=n, residual_sup=float(np.max(np.abs(mean - _sample(f, xs)))))


def convergence_study(
    f: Callable[[float], float],
    interval: Interval,
    ns: Sequence[int],
    family: str = "triangular",
    mode: str | None = None,
    probes: int = 1001,
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE,
) -> list[ErrorReport]:
    if len(ns) == 0:
        raise ConstructionError("convergence study needs at least one n")
    return [
        error_report(build_approximant(f, interval, n, family, mode, quadrature), f, probes)
        for n in ns
    ]

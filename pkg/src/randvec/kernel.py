"""Max-product kernel, its normalisation and the Y-slice integrals.

For a point ``x`` in X cell ``k`` only the functions ``k`` and ``k+1`` of the
X family are nonzero, so the kernel reduces to

    R(x, y) = max(A_k(x) B_k(y), A_{k+1}(x) B_{k+1}(y))

where ``B_i`` is the Y function of the class of node ``i``.  As a function of
``y`` this is smooth between the support breakpoints of the two Y functions,
except at the single point where the two products cross inside a shared cell.
That crossover has a closed form for both profiles, so every quadrature
segment carries a smooth integrand and composite Simpson converges at full
order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import CellBasis, TriangularBasisX, TriangularBasisY, TrigBasisX, TrigBasisY, _ScreenedY
from .grid import ConstructionError, Interval, NodeValues
from .ordering import sort_and_screen

# slice integrals are evaluated in blocks of this many x values
_CHUNK = 2048


class NumericalError(ConstructionError):
    """A quantity the construction guarantees positive came out at or below its floor."""


@dataclass(frozen=True)
class QuadratureSpec:
    panels_per_cell: int = 64

    def __post_init__(self):
        p = self.panels_per_cell
        if isinstance(p, bool) or int(p) != p or p < 2 or p % 2:
            raise ConstructionError(f"panels_per_cell must be an even integer >= 2, got {p!r}")

    @property
    def unit_nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.panels_per_cell + 1)

    @property
    def unit_weights(self) -> np.ndarray:
        """Composite Simpson weights on [0, 1]."""
        p = self.panels_per_cell
        w = np.ones(p + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w / (3.0 * p)


DEFAULT_QUADRATURE = QuadratureSpec()


class MaxProductKernel:
    """Diagonal max-product surface ``max_i A_i(x) B_i(y)``, i = 0..N."""

    def __init__(self, basis_x: CellBasis, basis_y: _ScreenedY):
        if basis_x.size != basis_y.order.rank.size:
            raise ConstructionError(
                f"X family has {basis_x.size} functions but Y family covers "
                f"{basis_y.order.rank.size} nodes"
            )
        self.basis_x = basis_x
        self.basis_y = basis_y
        self.rank = basis_y.order.rank
        self.support_x = Interval(basis_x.lo, basis_x.hi)
        self.support_y = Interval(basis_y.lo, basis_y.hi)

    @property
    def denominator_floor(self) -> float:
        """Floor below which a slice integral signals a degenerate construction.

        The live term with the larger X weight (at least 1/2) covers at least
        one Y cell with area at least half its width, so any valid slice
        integral is at least a quarter of the smallest strict gap.
        """
        gaps = np.diff(self.basis_y.strict_nodes)
        return min(1e-14 * self.support_y.length, 0.125 * float(gaps.min()))

    @property
    def family(self) -> str:
        return self.basis_x.profile.name

    @property
    def pairing(self) -> list[tuple[int, int]]:
        """(x-index, representative y-index) for every diagonal term."""
        cm = self.basis_y.class_map
        return [(i, int(cm[i])) for i in range(self.basis_x.size)]

    # -- evaluation ---------------------------------------------------------

    def _x_terms(self, x):
        k, a0, a1 = self.basis_x.pair(x)
        return k, a0, a1, self.rank[k], self.rank[k + 1]

    def _b(self, r, y, cell=None):
        """Y function of strict rank ``r`` at ``y`` (broadcasting).

        ``cell`` may carry a precomputed ``basis_y.cells.pair(y)``.
        """
        ky, fy, ry = cell if cell is not None else self.basis_y.cells.pair(y)
        return np.where(ky == r, fy, 0.0) + np.where(ky + 1 == r, ry, 0.0)

    def _check(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not np.all(self.support_x.contains(x)) or not np.all(self.support_y.contains(y)):
            raise ConstructionError("kernel evaluated outside X x Y")
        return x, y

    def eval(self, x, y):
        """Cell-lookup evaluation; ``x`` and ``y`` broadcast."""
        x, y = self._check(x, y)
        x, y = np.broadcast_arrays(x, y)
        _, a0, a1, r0, r1 = self._x_terms(x)
        cell = self.basis_y.cells.pair(y)
        return np.maximum(a0 * self._b(r0, y, cell), a1 * self._b(r1, y, cell))

    def eval_reference(self, x, y):
        """Max over every diagonal term; O(N) per point."""
        x, y = self._check(x, y)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape)
        cells_y = self.basis_y.cells
        for i in range(self.basis_x.size):
            out = np.maximum(out, self.basis_x.value(i, x) * cells_y.value(int(self.rank[i]), y))
        return out

    # -- integration --------------------------------------------------------

    def _segments(self, a0, a1, r0, r1):
        """Breakpoints (rows of 7, sorted) bounding smooth pieces of ``R(x, .)``."""
        s = self.basis_y.strict_nodes
        q = s.size - 1
        pts = []
        for r in (r0, r1):
            pts += [s[np.clip(r - 1, 0, q)], s[r], s[np.clip(r + 1, 0, q)]]
        lower = np.minimum(r0, r1)
        w_lo = np.where(r0 < r1, a0, a1)
        w_hi = np.where(r0 < r1, a1, a0)
        tau = self.basis_y.profile.crossover(w_lo, w_hi)
        top = np.clip(lower + 1, 0, q)
        cross = s[lower] + tau * (s[top] - s[lower])
        cross = np.where(np.abs(r0 - r1) == 1, cross, s[r0])
        pts.append(cross)
        return np.sort(np.stack(pts, axis=-1), axis=-1)

    def _slice_block(self, x, quad: QuadratureSpec):
        _, a0, a1, r0, r1 = self._x_terms(x)
        bp = self._segments(a0, a1, r0, r1)
        lo, hi = bp[:, :-1], bp[:, 1:]
        width = hi - lo
        u = quad.unit_nodes
        w = quad.unit_weights
        y = lo[..., None] + width[..., None] * u
        y = np.minimum(y, hi[..., None])
        rr0 = r0[:, None, None]
        rr1 = r1[:, None, None]
        cell = self.basis_y.cells.pair(y)
        vals = np.maximum(
            a0[:, None, None] * self._b(rr0, y, cell), a1[:, None, None] * self._b(rr1, y, cell)
        )
        wy = width[..., None] * w
        i0 = np.einsum("ijk,ijk->i", vals, wy)
        i1 = np.einsum("ijk,ijk->i", vals * y, wy)
        return i0, i1

    def slice_integrals(self, x, quad: QuadratureSpec = DEFAULT_QUADRATURE):
        """``(int R(x,y) dy, int y R(x,y) dy)`` over Y, vectorised in ``x``."""
        x = np.asarray(x, dtype=float)
        if not np.all(self.support_x.contains(x)):
            raise ConstructionError("x outside the X interval")
        flat = np.atleast_1d(x).ravel()
        i0 = np.empty(flat.size)
        i1 = np.empty(flat.size)
        for start in range(0, flat.size, _CHUNK):
            sl = slice(start, start + _CHUNK)
            i0[sl], i1[sl] = self._slice_block(flat[sl], quad)
        return i0.reshape(x.shape), i1.reshape(x.shape)

    def x_quadrature(self, quad: QuadratureSpec = DEFAULT_QUADRATURE):
        """Simpson nodes/weights over X, each cell split at its midpoint.

        The split keeps ``max(A_k, A_{k+1})`` (duplicate Y classes) smooth per piece.
        """
        b = self.basis_x.breakpoints
        mid = 0.5 * (b[:-1] + b[1:])
        edges = np.empty(2 * b.size - 1)
        edges[0::2] = b
        edges[1::2] = mid
        lo, hi = edges[:-1], edges[1:]
        u = quad.unit_nodes
        xs = lo[:, None] + (hi - lo)[:, None] * u
        xs = np.minimum(xs, hi[:, None])
        ws = (hi - lo)[:, None] * quad.unit_weights
        return xs.ravel(), ws.ravel()

    def total_mass(self, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
        xs, ws = self.x_quadrature(quad)
        i0, _ = self.slice_integrals(xs, quad)
        return float(ws @ i0)


@dataclass(frozen=True, eq=False)
class JointDensity:
    kernel: MaxProductKernel
    H: float
    quadrature: QuadratureSpec = field(default=DEFAULT_QUADRATURE)

    @property
    def support(self) -> tuple[Interval, Interval]:
        return self.kernel.support_x, self.kernel.support_y

    def __call__(self, x, y):
        """``R(x, y) / H`` on the support rectangle, 0 elsewhere."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        inside = self.kernel.support_x.contains(x) & self.kernel.support_y.contains(y)
        out = np.zeros(x.shape)
        if inside.any():
            out[inside] = self.kernel.eval(x[inside], y[inside]) / self.H
        return out

    def grid(self, nx: int, ny: int):
        """Values on an endpoint-inclusive ``nx`` by ``ny`` lattice, row-major in x."""
        xs = np.linspace(self.kernel.support_x.lo, self.kernel.support_x.hi, nx)
        ys = np.linspace(self.kernel.support_y.lo, self.kernel.support_y.hi, ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return xs, ys, self(X, Y)


def build_kernel(values: NodeValues, family: str) -> MaxProductKernel:
    """Kernel for sampled node values; ``trig`` needs an even number of cells."""
    grid = values.grid
    order = sort_and_screen(values.y)
    if order.q < 1:
        raise ConstructionError("node values are all equal; use the constant path")
    if family in ("triangular", "tri"):
        return MaxProductKernel(TriangularBasisX(grid), TriangularBasisY(order))
    if family == "trig":
        if grid.n % 2:
            raise ConstructionError(f"trig family needs 2n cells, got {grid.n}")
        bx = TrigBasisX(grid.n // 2, grid.interval)
        return MaxProductKernel(bx, TrigBasisY(order))
    raise ConstructionError(f"unknown basis family {family!r}")


def kernel_eval(k: MaxProductKernel, x, y):
    return k.eval(x, y)


def normalize(k: MaxProductKernel, q: QuadratureSpec = DEFAULT_QUADRATURE) -> JointDensity:
    H = k.total_mass(q)
    floor = 1e-14 * k.support_x.length * k.support_y.length
    if not H > floor:
        raise NumericalError(f"normalisation constant H={H!r} is not above {floor!r}")
    return JointDensity(kernel=k, H=H, quadrature=q)


def y_slice_integrals(k: MaxProductKernel, x, q: QuadratureSpec = DEFAULT_QUADRATURE):
    i0, i1 = k.slice_integrals(x, q)
    floor = k.denominator_floor
    if np.any(~(i0 >= floor)):
        raise NumericalError(f"slice integral below floor {floor!r}")
    if np.ndim(i0) == 0:
        return float(i0), float(i1)
    return i0, i1

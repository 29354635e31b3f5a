"""Base-function families on the X and Y axes.

Both families share one shape: on each cell ``[b_k, b_{k+1}]`` with local
coordinate ``t`` in [0, 1], the function attached to the left breakpoint
follows a falling profile and the one attached to the right breakpoint follows
the complementary rising profile.

============  ===================  ===================
family        falling              rising
============  ===================  ===================
triangular    ``1 - t``            ``t``
trig          ``cos^2(pi t / 2)``  ``sin^2(pi t / 2)``
============  ===================  ===================

For the trig X family on ``m = 2n`` equal cells of [0, 1] this is exactly the
windowed ``cos^2(n pi x)`` / ``sin^2(n pi x)`` table, and on a Y cell it is
the subinterval ground-state pair ``cos^2``/``sin^2`` of
``pi (y - y_k) / (2 (y_{k+1} - y_k))``.

Every basis offers a reference evaluator (``value``/``matrix``, scanning all
indices) and a cell-lookup evaluator (``pair``) that returns only the two
functions alive on the cell. They share the profile arithmetic, so they agree
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import ConstructionError, EquidistantGrid, Interval, make_grid
from .ordering import SortedOrder


class Profile:
    name = "abstract"

    def fall(self, t):
        raise NotImplementedError

    def rise(self, t):
        raise NotImplementedError

    def crossover(self, w_fall, w_rise):
        """Local coordinate where ``w_fall*fall(t) == w_rise*rise(t)``."""
        raise NotImplementedError


class LinearProfile(Profile):
    name = "triangular"

    def fall(self, t):
        return 1.0 - t

    def rise(self, t):
        return t + 0.0

    def crossover(self, w_fall, w_rise):
        w_fall = np.asarray(w_fall, dtype=float)
        w_rise = np.asarray(w_rise, dtype=float)
        total = w_fall + w_rise
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(total > 0, w_fall / np.where(total > 0, total, 1.0), 0.5)
        return np.clip(t, 0.0, 1.0)


class SquaredTrigProfile(Profile):
    name = "trig"

    def fall(self, t):
        t = np.asarray(t, dtype=float)
        c = np.cos(0.5 * np.pi * t)
        return np.where(t == 1.0, 0.0, c * c)

    def rise(self, t):
        t = np.asarray(t, dtype=float)
        s = np.sin(0.5 * np.pi * t)
        return s * s

    def crossover(self, w_fall, w_rise):
        # w_f cos^2 = w_r sin^2  <=>  tan(pi t / 2) = sqrt(w_f / w_r)
        w_fall = np.asarray(w_fall, dtype=float)
        w_rise = np.asarray(w_rise, dtype=float)
        t = np.arctan2(np.sqrt(np.maximum(w_fall, 0.0)), np.sqrt(np.maximum(w_rise, 0.0)))
        return np.clip(t * (2.0 / np.pi), 0.0, 1.0)


LINEAR = LinearProfile()
SQUARED_TRIG = SquaredTrigProfile()

PROFILES = {"triangular": LINEAR, "tri": LINEAR, "trig": SQUARED_TRIG}


def profile_for(family: str) -> Profile:
    try:
        return PROFILES[family]
    except KeyError:
        raise ConstructionError(f"unknown basis family {family!r}") from None


class CellBasis:
    """Profile pairs over a strictly increasing breakpoint sequence."""

    def __init__(self, breakpoints, profile: Profile):
        b = np.asarray(breakpoints, dtype=float)
        if b.ndim != 1 or b.size < 2 or not np.all(np.diff(b) > 0):
            raise ConstructionError("breakpoints must be strictly increasing with at least 2 entries")
        b = b.copy()
        b.setflags(write=False)
        self.breakpoints = b
        self.profile = profile

    @property
    def size(self) -> int:
        """Number of basis functions (one per breakpoint)."""
        return self.breakpoints.size

    @property
    def lo(self) -> float:
        return float(self.breakpoints[0])

    @property
    def hi(self) -> float:
        return float(self.breakpoints[-1])

    def _check_range(self, z: np.ndarray, axis: str):
        if np.any(~((z >= self.lo) & (z <= self.hi))):
            bad = z[~((z >= self.lo) & (z <= self.hi))].ravel()[0]
            raise ConstructionError(f"{axis}={bad!r} outside [{self.lo!r}, {self.hi!r}]")

    def local(self, k, z):
        """Local coordinate of ``z`` in cell ``k``; exactly 0 and 1 at the cell ends."""
        b = self.breakpoints
        left, right = b[k], b[k + 1]
        t = (z - left) / (right - left)
        t = np.where(z == right, 1.0, t)
        return np.clip(t, 0.0, 1.0)

    def locate(self, z):
        """Cell index and local coordinate; nodes belong to the cell on their right."""
        z = np.asarray(z, dtype=float)
        k = np.searchsorted(self.breakpoints, z, side="right") - 1
        k = np.clip(k, 0, self.breakpoints.size - 2)
        return k, self.local(k, z)

    def pair(self, z):
        """``(k, fall, rise)``: functions ``k`` and ``k+1`` are the only live ones."""
        k, t = self.locate(z)
        return k, self.profile.fall(t), self.profile.rise(t)

    def value(self, i: int, z):
        """Reference evaluation of function ``i`` by its own support."""
        if not 0 <= i < self.size:
            raise ConstructionError(f"basis index {i} out of range 0..{self.size - 1}")
        z = np.asarray(z, dtype=float)
        b = self.breakpoints
        out = np.zeros(z.shape)
        if i > 0:
            left = (z >= b[i - 1]) & (z <= b[i])
            if left.any():
                out = np.where(left, self.profile.rise(self.local(i - 1, z)), out)
        if i < self.size - 1:
            right = (z >= b[i]) & (z <= b[i + 1])
            if right.any():
                out = np.where(right, self.profile.fall(self.local(i, z)), out)
        return out

    def matrix(self, z):
        """All functions at all points, shape ``(len(z), size)``; O(size) per point."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return np.stack([self.value(i, z) for i in range(self.size)], axis=-1)


class TriangularBasisX(CellBasis):
    def __init__(self, grid: EquidistantGrid):
        super().__init__(grid.nodes, LINEAR)
        self.grid = grid

    def eval(self, i: int, x):
        x = np.asarray(x, dtype=float)
        self._check_range(x, "x")
        return self.value(i, x)


class TrigBasisX(CellBasis):
    """Windowed ``cos^2``/``sin^2`` of quantum number ``n`` on ``m = 2n`` cells.

    Even indices carry ``cos^2(n pi u)``, odd indices ``sin^2(n pi u)``, each
    windowed to its two neighbouring cells (one cell at the ends), where
    ``u = (x - lo) / (hi - lo)``.
    """

    def __init__(self, n: int, interval: Interval | None = None):
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ConstructionError(f"quantum number must be a positive integer, got {n!r}")
        self.n = int(n)
        self.m = 2 * self.n
        self.grid = make_grid(interval or Interval(0.0, 1.0), self.m)
        super().__init__(self.grid.nodes, SQUARED_TRIG)

    def eval(self, i: int, x):
        x = np.asarray(x, dtype=float)
        self._check_range(x, "x")
        return self.value(i, x)


class _ScreenedY:
    """Y-axis family on the strict node values, addressed by original index."""

    def __init__(self, order: SortedOrder, profile: Profile):
        if order.q < 1:
            raise ConstructionError("Y basis needs at least two distinct node values")
        self.order = order
        self.cells = CellBasis(order.strict_values, profile)
        self.profile = profile

    @property
    def strict_nodes(self) -> np.ndarray:
        return self.order.strict_values

    @property
    def class_map(self) -> np.ndarray:
        """Original index -> representative original index."""
        return self.order.reps[self.order.rank]

    @property
    def lo(self) -> float:
        return self.cells.lo

    @property
    def hi(self) -> float:
        return self.cells.hi

    def rank(self, i: int) -> int:
        if not 0 <= i < self.order.rank.size:
            raise ConstructionError(f"node index {i} out of range 0..{self.order.rank.size - 1}")
        return int(self.order.rank[i])

    def eval(self, original_index: int, y):
        y = np.asarray(y, dtype=float)
        self.cells._check_range(y, "y")
        return self.cells.value(self.rank(original_index), y)


class TriangularBasisY(_ScreenedY):
    def __init__(self, order: SortedOrder):
        super().__init__(order, LINEAR)


class TrigBasisY(_ScreenedY):
    def __init__(self, order: SortedOrder):
        super().__init__(order, SQUARED_TRIG)


def tri_x_eval(basis: TriangularBasisX, i: int, x):
    return basis.eval(i, x)


def tri_y_eval(basis: TriangularBasisY, original_index: int, y):
    return basis.eval(original_index, y)


def trig_x_eval(basis: TrigBasisX, i: int, x):
    return basis.eval(i, x)


def trig_y_eval(basis: TrigBasisY, original_index: int, y):
    return basis.eval(original_index, y)


def trig_x_direct(n: int, i: int, x) -> np.ndarray:
    """``chi_window(x) * cos^2(n pi x)`` (even i) or ``sin^2`` (odd i) on [0, 1].

    Literal transcription of the windowed table, kept as an independent check
    on :class:`TrigBasisX`.
    """
    m = 2 * n
    x = np.asarray(x, dtype=float)
    lo = max(0.0, (i - 1) / m)
    hi = min(1.0, (i + 1) / m)
    wave = np.cos(n * math.pi * x) if i % 2 == 0 else np.sin(n * math.pi * x)
    return np.where((x >= lo) & (x <= hi), wave * wave, 0.0)

"""Equidistant partitions of a closed interval and the sampled node values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class ConstructionError(ValueError):
    """Raised when inputs cannot produce a valid construction."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConstructionError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ConstructionError(f"invalid interval: need lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x >= self.lo) & (x <= self.hi)


@dataclass(frozen=True, eq=False)
class EquidistantGrid:
    interval: Interval
    n: int
    nodes: np.ndarray
    step: float

    @property
    def cells(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class NodeValues:
    grid: EquidistantGrid
    y: np.ndarray
    y_min: float
    y_max: float

    @property
    def is_constant(self) -> bool:
        return self.y_min == self.y_max


def make_grid(interval: Interval, n: int) -> EquidistantGrid:
    """Partition ``interval`` into ``n`` equal cells.

    Nodes are ``lo + i*step``; the last node is pinned to ``hi`` so grids are
    bit-reproducible.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ConstructionError(f"number of cells must be a positive integer, got {n!r}")
    n = int(n)
    step = (interval.hi - interval.lo) / n
    nodes = interval.lo + np.arange(n + 1, dtype=float) * step
    nodes[0] = interval.lo
    nodes[-1] = interval.hi
    nodes.setflags(write=False)
    return EquidistantGrid(interval=interval, n=n, nodes=nodes, step=step)


def sample_nodes(f: Callable[[float], float], grid: EquidistantGrid) -> NodeValues:
    y = np.array([float(f(float(x))) for x in grid.nodes])
    bad = ~np.isfinite(y)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ConstructionError(
            f"function is not finite at node x[{i}] = {grid.nodes[i]!r} (got {y[i]!r})"
        )
    y.setflags(write=False)
    return NodeValues(grid=grid, y=y, y_min=float(y.min()), y_max=float(y.max()))

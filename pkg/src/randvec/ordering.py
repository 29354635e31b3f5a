"""Sorting permutation, duplicate screening and the sorted-gap bound.

Equal node values are grouped into classes by exact floating equality; each
class is represented by its least original index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import ConstructionError


@dataclass(frozen=True, eq=False)
class SortedOrder:
    perm: np.ndarray
    sorted_values: np.ndarray
    classes: tuple[tuple[int, ...], ...]
    reps: np.ndarray
    strict_values: np.ndarray
    # rank[i] is the position of values[i] among strict_values
    rank: np.ndarray

    @property
    def q(self) -> int:
        return len(self.strict_values) - 1

    def representative(self, i: int) -> int:
        return int(self.reps[self.rank[i]])


@dataclass(frozen=True)
class GapReport:
    d: float
    e: float

    @property
    def margin(self) -> float:
        return self.e - self.d


def _as_finite(values: Sequence[float], minimum: int) -> np.ndarray:
    v = np.asarray(values, dtype=float).ravel()
    if v.size < minimum:
        raise ConstructionError(f"need at least {minimum} value(s), got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ConstructionError("values must be finite")
    return v


def sort_and_screen(values: Sequence[float]) -> SortedOrder:
    v = _as_finite(values, 1)
    # stable: ties keep index order, so the first member of each run is the least index
    perm = np.argsort(v, kind="stable")
    sv = v[perm]
    new_class = np.empty(sv.size, dtype=bool)
    new_class[0] = True
    new_class[1:] = sv[1:] != sv[:-1]
    starts = np.flatnonzero(new_class)
    bounds = np.append(starts, sv.size)
    classes = tuple(
        tuple(sorted(int(k) for k in perm[a:b])) for a, b in zip(bounds[:-1], bounds[1:])
    )
    reps = perm[starts].astype(int)
    rank = np.empty(v.size, dtype=int)
    rank[perm] = np.cumsum(new_class) - 1
    for arr in (perm, sv, reps, rank):
        arr.setflags(write=False)
    strict = sv[starts].copy()
    strict.setflags(write=False)
    return SortedOrder(
        perm=perm,
        sorted_values=sv,
        classes=classes,
        reps=reps,
        strict_values=strict,
        rank=rank,
    )


def gap_report(values: Sequence[float]) -> GapReport:
    """Largest gap between sorted neighbours versus largest jump in original order."""
    v = _as_finite(values, 2)
    d = float(np.max(np.diff(np.sort(v))))
    e = float(np.max(np.abs(np.diff(v))))
    return GapReport(d=d, e=e)

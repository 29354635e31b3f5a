"""Infinite square well on [0, 1]: eigenstates, energies and related bookkeeping.

Energies are expressed through a single dimensionless ``energy_scale`` that
stands for ``pi^2 hbar^2 / (2 m)``; only ratios matter downstream.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import ConstructionError, NodeValues

SQRT2 = math.sqrt(2.0)


def _quantum_number(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ConstructionError(f"quantum number must be an integer, got {n!r}")
    if n < 1:
        raise ConstructionError(f"quantum number must be >= 1 (n = {n} gives the trivial state)")
    return int(n)


def _unit_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~((x >= 0.0) & (x <= 1.0))):
        raise ConstructionError("x must lie in [0, 1]")
    return x


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class WellState:
    n: int
    energy_scale: float = 1.0

    def __post_init__(self):
        _quantum_number(self.n)
        if not self.energy_scale > 0:
            raise ConstructionError("energy_scale must be positive")

    @property
    def energy(self) -> float:
        return energy(self.n, self.energy_scale)


def adam_essence(n: int, x):
    """``sin(n pi x)``."""
    n = _quantum_number(n)
    return _out(np.sin(n * math.pi * _unit_x(x)))


def eve_essence(n: int, x):
    """``cos(n pi x)``."""
    n = _quantum_number(n)
    return _out(np.cos(n * math.pi * _unit_x(x)))


def adam_wave(n: int, x):
    """Dirichlet eigenstate ``sqrt(2) sin(n pi x)``."""
    return _out(SQRT2 * np.asarray(adam_essence(n, x)))


def eve_wave(n: int, x):
    """Derivative-boundary eigenstate ``sqrt(2) cos(n pi x)``."""
    return _out(SQRT2 * np.asarray(eve_essence(n, x)))


def adam_wave_derivative(n: int, x):
    n = _quantum_number(n)
    return _out(SQRT2 * n * math.pi * np.cos(n * math.pi * _unit_x(x)))


def complex_wave(n: int, x):
    """``sqrt(2) exp(i n pi x)``: Eve wave as real part, Adam wave as imaginary part."""
    n = _quantum_number(n)
    x = _unit_x(x)
    z = SQRT2 * np.exp(1j * n * math.pi * x)
    return complex(z) if np.ndim(z) == 0 else z


def timed_wave(n: int, x, t: float, kind: str = "adam", hbar: float = 1.0,
               energy_scale: float = 1.0):
    """Static evaluation of the stationary state times its phase factor at time ``t``.

    The Adam state carries ``exp(+i E t / hbar)`` and the Eve state
    ``exp(-i E t / hbar)``; the modulus is that of the spatial part.
    """
    e = energy(n, energy_scale)
    if kind == "adam":
        return np.asarray(adam_wave(n, x)) * cmath.exp(1j * e * t / hbar)
    if kind == "eve":
        return np.asarray(eve_wave(n, x)) * cmath.exp(-1j * e * t / hbar)
    raise ConstructionError(f"kind must be 'adam' or 'eve', got {kind!r}")


def energy(n: int, energy_scale: float = 1.0) -> float:
    n = _quantum_number(n)
    if not energy_scale > 0:
        raise ConstructionError("energy_scale must be positive")
    return n * n * energy_scale


def duality_numbers(n: int) -> tuple[float, float, float]:
    """Frequency ``n/2``, wavelength ``2/n`` and their product, computed in exact rationals."""
    n = _quantum_number(n)
    nu = Fraction(n, 2)
    lam = Fraction(2, n)
    return float(nu), float(lam), float(nu * lam)


def local_ground_state(sub: tuple[float, float], y):
    """Squared ground-state pair on a subinterval.

    Returns ``(sin^2(theta), cos^2(theta))`` with
    ``theta = pi (y - lo) / (2 (hi - lo))``.
    """
    lo, hi = float(sub[0]), float(sub[1])
    if not lo < hi:
        raise ConstructionError(f"degenerate subinterval [{lo}, {hi}]")
    y = np.asarray(y, dtype=float)
    if np.any(~((y >= lo) & (y <= hi))):
        raise ConstructionError(f"y outside [{lo}, {hi}]")
    theta = 0.5 * math.pi * (y - lo) / (hi - lo)
    s = np.sin(theta)
    c = np.where(y == hi, 0.0, np.cos(theta))
    return _out(s * s), _out(c * c)


@dataclass(frozen=True)
class DescendantLedger:
    n: int
    count: int
    subintervals: tuple[tuple[float, float], ...]


def descendant_ledger(values: NodeValues, level: int) -> DescendantLedger:
    """The ``2n`` sorted-Y subintervals occupied by the descendant particles at level ``n``."""
    level = _quantum_number(level)
    if values.grid.n != 2 * level:
        raise ConstructionError(
            f"level {level} needs a grid of {2 * level} cells, got {values.grid.n}"
        )
    s = np.sort(values.y)
    subs = tuple((float(a), float(b)) for a, b in zip(s[:-1], s[1:]))
    return DescendantLedger(n=level, count=len(subs), subintervals=subs)


def cumulative_descendants(levels: int) -> int:
    return sum(2 * k for k in range(1, _quantum_number(levels) + 1))

"""Conceptual-density formulas.

Each formula scores how concentrated a quantity of evidence marks ``m`` is
inside the subtree of a concept, using the concept's precomputed statistics.
All four share the convention that zero marks score zero (empty sum), and
the two geometric formulas share a closed-form fast path that is cross
checked in the tests against a literal term-by-term evaluation.

Marks may be fractional (the fractional sense-weighting scheme produces
them): the sum then takes ``floor(m)`` full terms plus the fractional
remainder of the next term, which reduces to the integer definition at
whole numbers and is monotone in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .lexicon import ConceptStats

# Densities are clamped to keep pathological configurations (very large
# windows with unlimited chain length drive geometric numerators toward
# overflow) finite, so downstream normalization never produces NaN.
_CAP = 1e300


class FormulaKind(str, Enum):
    SAR = "sar"  # geometric ratio with exponent damping alpha
    AR = "ar"    # same with alpha = 1
    SDF = "sdf"  # plain marks / subtree size
    LF = "lf"    # depth-corrected geometric sum over subtree size


@dataclass(frozen=True)
class DensityFormula:
    """Formula selector plus the damping exponent used by SAR."""

    kind: FormulaKind = FormulaKind.AR
    alpha: float = 0.2

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


def _pow(base: float, exp: float) -> float:
    try:
        value = base ** exp
    except OverflowError:
        return _CAP
    return min(value, _CAP)


# The same (branching, depth) pairs recur for every mark count scored at a
# concept, so the partial sums are memoized.
@lru_cache(maxsize=65536)
def _geometric_sum(a: float, n: int) -> float:
    """Sum of a**i for i in [0, n)."""
    if n <= 0:
        return 0.0
    if a == 1.0:
        return float(n)
    top = _pow(a, n)
    if top >= _CAP:
        return _CAP
    return (top - 1.0) / (a - 1.0)


def _geometric_numerator(a: float, m: float) -> float:
    """Geometric sum with fractional interpolation of the last term."""
    full = math.floor(m)
    frac = m - full
    total = _geometric_sum(a, full)
    if frac > 0.0:
        total += frac * _pow(a, full)
    return min(total, _CAP)


@lru_cache(maxsize=65536)
def _damped_full_sum(a: float, n: int, alpha: float) -> float:
    total = 0.0
    for i in range(n):
        total += _pow(a, i**alpha)
    return min(total, _CAP)


def _damped_numerator(a: float, m: float, alpha: float) -> float:
    """Sum of a**(i**alpha) for i in [0, ceil(m)), last term scaled."""
    full = math.floor(m)
    frac = m - full
    total = _damped_full_sum(a, full, alpha)
    if frac > 0.0:
        total = min(total + frac * _pow(a, full**alpha), _CAP)
    return total


def conceptual_density(formula: DensityFormula, stats: ConceptStats, m: float) -> float:
    """Density of a concept holding ``m`` marks, per the selected formula.

    SAR:  sum_{i<m} adesc^(i^alpha)  /  sum_{i<h} adesc^i
    AR:   SAR with alpha = 1 (both sums plain geometric)
    SDF:  m / desc
    LF:   (1/desc) * log2(d + 1) * sum_{i<m} adesc^i

    The LF depth factor uses d + 1 so a root concept (d = 1) still gets a
    finite positive correction.
    """
    if m < 0:
        raise ValueError("mark count must be nonnegative")
    if m == 0:
        return 0.0
    kind = formula.kind
    if kind is FormulaKind.SDF:
        return m / stats.desc
    a = stats.adesc
    if kind is FormulaKind.LF:
        return min(
            math.log2(stats.d + 1) * _geometric_numerator(a, m) / stats.desc,
            _CAP,
        )
    if kind is FormulaKind.AR or formula.alpha == 1.0:
        numerator = _geometric_numerator(a, m)
    else:
        numerator = _damped_numerator(a, m, formula.alpha)
    return min(numerator / _geometric_sum(a, stats.h), _CAP)

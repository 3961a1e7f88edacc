"""Box-counting dimension estimation over dyadic grids.

The 2**j boxes [m 2**-j, (m+1) 2**-j) partition [0,1]; a point sitting on
an interior boundary belongs to the box on its right, and the rightmost box
is closed so that x = 1 has a home.  Counts are therefore deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from edc.ifs import LevelSet
from edc.numeric import FinitePointSet, ValidationError, to_fraction


@dataclass(frozen=True, slots=True)
class DimEstimate:
    scales: tuple  # exponents j, box width 2**-j
    counts: tuple  # N_j
    slope: float  # least-squares slope of ln N_j against ln 2**j
    r_squared: float

    def __post_init__(self):
        if any(c2 < c1 for c1, c2 in zip(self.counts, self.counts[1:])):
            raise ValidationError("counts must be non-decreasing in resolution")


def _floor_scaled(x: Fraction, j: int) -> int:
    return (x.numerator << j) // x.denominator


def box_count(subject, j: int) -> int:
    """Number of width-2**-j dyadic boxes meeting the set."""
    if j < 0:
        raise ValidationError("scale exponent must be non-negative")
    top = (1 << j) - 1
    if isinstance(subject, FinitePointSet):
        seen = set()
        for num in subject.nums:
            seen.add(min((num << j) // subject.den, top))
        return len(seen)
    if isinstance(subject, LevelSet):
        total = 0
        prev_last = None
        for lo, hi in subject.intervals:
            first = min(_floor_scaled(lo, j), top)
            last = min(_floor_scaled(hi, j), top)
            if prev_last is not None and first <= prev_last:
                first = prev_last + 1
                if last < first:
                    continue
            total += last - first + 1
            prev_last = last
        return total
    raise ValidationError("box_count expects a FinitePointSet or LevelSet")


def _resolution_floor(subject) -> float | None:
    """Finest usable scale exponent, below which counts saturate."""
    if isinstance(subject, LevelSet):
        widths = [hi - lo for lo, hi in subject.intervals if hi > lo]
        if not widths:
            return None
        return -math.log2(float(max(widths)))
    if isinstance(subject, FinitePointSet) and len(subject) > 1:
        gap = min(b - a for a, b in zip(subject.nums, subject.nums[1:]))
        return -math.log2(gap / subject.den)
    return None


def estimate_dimension(subject, j_min: int, j_max: int) -> DimEstimate:
    """OLS fit of ln(count) against ln(1/width) over j = j_min..j_max.

    The window must stay above the subject's resolution floor; no automatic
    window selection is attempted.
    """
    if j_min >= j_max:
        raise ValidationError("need j_min < j_max")
    floor = _resolution_floor(subject)
    if floor is not None and j_max > floor - 2:
        raise ValidationError(
            f"scale window reaches the resolution floor (j_max <= {floor - 2:.1f})"
        )
    scales = tuple(range(j_min, j_max + 1))
    counts = tuple(box_count(subject, j) for j in scales)
    xs = [j * math.log(2.0) for j in scales]
    ys = [math.log(c) for c in counts]
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx else 0.0
    ss_tot = sum((y - ybar) ** 2 for y in ys)
    ss_res = sum(
        (y - (ybar + slope * (x - xbar))) ** 2 for x, y in zip(xs, ys)
    )
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return DimEstimate(scales, counts, slope, r2)

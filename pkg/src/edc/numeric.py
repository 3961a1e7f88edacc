"""Exact 1-D metric primitives: dyadic quantization with bit accounting,
Hausdorff distances between finite sets and interval unions, and the
hole-separation certificate.

Everything here runs in exact rational arithmetic.  Point sets are held as
integer numerators over one shared power-free denominator so that the hot
two-pointer loops work on plain ints instead of Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

Rational = Fraction


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def ceil_log2_frac(num: int, den: int) -> int:
    """Smallest t with 2**t >= num/den, for num, den > 0."""
    if num <= 0 or den <= 0:
        raise ValueError("ceil_log2_frac needs a positive rational")

    def ok(t: int) -> bool:
        return (den << t) >= num if t >= 0 else den >= (num << -t)

    t = num.bit_length() - den.bit_length() - 1
    while not ok(t):
        t += 1
    return t


class ValidationError(ValueError):
    """Input violates a stated precondition (CLI exit code 2)."""


class ContractError(RuntimeError):
    """A distance contract failed at verification time (CLI exit code 3)."""


class BudgetError(RuntimeError):
    """A size budget would be exceeded (CLI exit code 4)."""


# ---------------------------------------------------------------------------
# Quantized reals


@dataclass(frozen=True, slots=True)
class QuantizedReal:
    """A real stored as mantissa * 2**-precision_exp with its bit cost.

    bit_cost follows one fixed convention: a value known to lie in a range
    of width W, stored on the grid 2**-p, costs ceil(log2(W * 2**p)) + 1
    bits (one guard/sign bit included); when the grid is no finer than the
    range (W * 2**p <= 1) nothing needs to be transmitted and the cost is 0.
    """

    mantissa: int
    precision_exp: int
    bit_cost: int

    @property
    def value(self) -> Fraction:
        p = self.precision_exp
        if p >= 0:
            return Fraction(self.mantissa, 1 << p)
        return Fraction(self.mantissa << (-p), 1)


def grid_exponent_for(target: Fraction) -> int:
    """Smallest p >= 0 with 2**-(p+1) < target, so grid rounding beats target.

    Grids are never coarser than 1: all quantized domains here have width <= 1.
    """
    if target <= 0:
        raise ValidationError("target precision must be positive")
    # want 2**(p+1) * num > den
    num, den = target.numerator, target.denominator
    p = max(0, den.bit_length() - num.bit_length() - 2)
    while (num << (p + 1)) <= den:
        p += 1
    return p


def range_bit_cost(width: Fraction, precision_exp: int) -> int:
    """Bits to store a grid-2**-p value known to lie in a width-`width` range."""
    if width <= 0:
        raise ValidationError("range width must be positive")
    p = precision_exp
    scaled_num = width.numerator << max(p, 0)
    scaled_den = width.denominator << max(-p, 0)
    if scaled_num <= scaled_den:  # grid no finer than the range
        return 0
    return ceil_log2_frac(scaled_num, scaled_den) + 1


def quantize(
    x,
    target_precision,
    value_range: tuple = (Fraction(0), Fraction(1)),
) -> QuantizedReal:
    """Round x half-up onto the dyadic grid fine enough for |value - x| < target.

    The result is clamped to the declared range; x itself must lie inside it.
    """
    x = to_fraction(x)
    target = to_fraction(target_precision)
    lo, hi = (to_fraction(v) for v in value_range)
    if target <= 0:
        raise ValidationError("target precision must be positive")
    if hi <= lo:
        raise ValidationError("empty value range")
    if x < lo or x > hi:
        raise ValidationError(f"value {x} outside declared range [{lo}, {hi}]")
    p = grid_exponent_for(target)
    scale = 1 << p
    m = (2 * x.numerator * scale + x.denominator) // (2 * x.denominator)
    m_lo = -((-lo.numerator * scale) // lo.denominator)  # ceil(lo * 2**p)
    m_hi = (hi.numerator * scale) // hi.denominator  # floor(hi * 2**p)
    m = min(max(m, m_lo), m_hi)
    return QuantizedReal(m, p, range_bit_cost(hi - lo, p))


# ---------------------------------------------------------------------------
# Finite point sets


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True, slots=True)
class FinitePointSet:
    """Strictly increasing rationals in [0,1], stored as nums over one den."""

    nums: tuple
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValidationError("denominator must be positive")
        if not self.nums:
            raise ValidationError("empty set has no Hausdorff distance")
        prev = None
        for n in self.nums:
            if prev is not None and n <= prev:
                raise ValidationError("points must be strictly increasing")
            prev = n
        if self.nums[0] < 0 or self.nums[-1] > self.den:
            raise ValidationError("points must lie in [0, 1]")

    @classmethod
    def from_points(cls, points: Iterable) -> "FinitePointSet":
        fracs = sorted(set(to_fraction(p) for p in points))
        if not fracs:
            raise ValidationError("empty set has no Hausdorff distance")
        den = 1
        for f in fracs:
            den = _lcm(den, f.denominator)
        return cls(tuple(f.numerator * (den // f.denominator) for f in fracs), den)

    @classmethod
    def from_scaled(cls, nums: Sequence[int], den: int) -> "FinitePointSet":
        return cls(tuple(nums), den)

    @property
    def points(self) -> tuple:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def __len__(self) -> int:
        return len(self.nums)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePointSet):
            return NotImplemented
        if len(self.nums) != len(other.nums):
            return False
        return all(
            a * other.den == b * self.den for a, b in zip(self.nums, other.nums)
        )

    def __hash__(self):
        g = gcd(self.den, gcd(*self.nums) if len(self.nums) > 1 else self.nums[0])
        g = g or 1
        return hash((tuple(n // g for n in self.nums), self.den // g))

    def rescaled(self, den: int) -> tuple:
        """Numerators over the requested denominator (must be a multiple)."""
        if den % self.den:
            raise ValueError("target denominator must be a multiple")
        f = den // self.den
        return tuple(n * f for n in self.nums)


def _directed_gap(a_nums: Sequence[int], b_nums: Sequence[int]) -> int:
    """sup over a of min over b of |a - b|, all over a common denominator."""
    best = 0
    j = 0
    m = len(b_nums)
    for x in a_nums:
        while j + 1 < m and b_nums[j + 1] <= x:
            j += 1
        d = abs(x - b_nums[j])
        if j + 1 < m:
            d2 = b_nums[j + 1] - x
            if d2 < d:
                d = d2
        if d > best:
            best = d
    return best


def hausdorff_finite(a: FinitePointSet, b: FinitePointSet) -> Fraction:
    """Hausdorff distance between two finite point sets, exactly."""
    den = _lcm(a.den, b.den)
    an = a.rescaled(den)
    bn = b.rescaled(den)
    return Fraction(max(_directed_gap(an, bn), _directed_gap(bn, an)), den)


# ---------------------------------------------------------------------------
# Hausdorff distance against a disjoint interval union


def check_intervals(intervals: Sequence[tuple]) -> list:
    """Validate a sorted, disjoint, non-empty interval list inside [0,1]."""
    if not intervals:
        raise ValidationError("empty set has no Hausdorff distance")
    out = []
    prev_hi = None
    for lo, hi in intervals:
        lo, hi = to_fraction(lo), to_fraction(hi)
        if hi < lo:
            raise ValidationError("interval endpoints out of order")
        if lo < 0 or hi > 1:
            raise ValidationError("intervals must lie in [0, 1]")
        if prev_hi is not None and lo <= prev_hi:
            raise ValidationError("intervals must be sorted and disjoint")
        prev_hi = hi
        out.append((lo, hi))
    return out


def hausdorff_stream_vs_intervals(
    point_nums: Iterator[int],
    point_den: int,
    intervals: Sequence[tuple],
) -> Fraction:
    """Hausdorff distance between a sorted point stream and an interval union.

    `point_nums` yields strictly increasing numerators over `point_den`.
    Single pass, O(#points + #intervals) memory O(#intervals).
    """
    ivs = check_intervals(intervals)
    iden = 1
    for lo, hi in ivs:
        iden = _lcm(iden, _lcm(lo.denominator, hi.denominator))
    den = _lcm(point_den, iden)
    sp = 2 * (den // point_den)
    c = [int(lo * den) * 2 for lo, _ in ivs]
    d = [int(hi * den) * 2 for _, hi in ivs]
    n_iv = len(ivs)

    best = 0
    r = 0  # first unfinalized interval
    left_nb = None  # latest point numerator < c[r]
    inside_prev = None  # latest inside point of interval r seen so far
    inside_first = None
    empty_stream = True

    def seg_max(lo_y: int, hi_y: int, left: int | None, right: int | None) -> int:
        # farthest distance to {left, right} over y in [lo_y, hi_y]
        if left is None and right is None:
            raise ValidationError("empty set has no Hausdorff distance")
        if left is None:
            return right - lo_y
        if right is None:
            return hi_y - left
        mid = (left + right) // 2
        y = min(max(mid, lo_y), hi_y)
        return min(y - left, right - y)

    def finalize(r: int, right: int | None) -> int:
        # max distance from interval r to the point set
        if inside_first is None:
            return seg_max(c[r], d[r], left_nb, right)
        m = seg_max(c[r], min(inside_first, d[r]), left_nb, inside_first)
        m2 = seg_max(max(inside_prev, c[r]), d[r], inside_prev, right)
        return max(m, m2, inside_gap_half)

    inside_gap_half = 0

    for raw in point_nums:
        empty_stream = False
        p = raw * sp
        while r < n_iv and p > d[r]:
            g = finalize(r, p)
            if g > best:
                best = g
            left_nb = inside_prev if inside_prev is not None else left_nb
            inside_prev = inside_first = None
            inside_gap_half = 0
            r += 1
        if r == n_iv:
            g = p - d[n_iv - 1]
            if g > best:
                best = g
            left_nb = p
            continue
        if p < c[r]:
            g = min(c[r] - p, p - d[r - 1]) if r > 0 else c[r] - p
            if g > best:
                best = g
            left_nb = p
        else:  # inside interval r
            if inside_first is None:
                inside_first = p
            else:
                half = (p - inside_prev) // 2
                if half > inside_gap_half:
                    inside_gap_half = half
            inside_prev = p
    if empty_stream:
        raise ValidationError("empty set has no Hausdorff distance")
    while r < n_iv:
        g = finalize(r, None)
        if g > best:
            best = g
        left_nb = inside_prev if inside_prev is not None else left_nb
        inside_prev = inside_first = None
        inside_gap_half = 0
        r += 1
    return Fraction(best, 2 * den)


def hausdorff_vs_intervals(a: FinitePointSet, intervals: Sequence[tuple]) -> Fraction:
    """Hausdorff distance between a finite set and a disjoint interval union."""
    return hausdorff_stream_vs_intervals(iter(a.nums), a.den, intervals)


# ---------------------------------------------------------------------------
# Hole-separation certificate


@dataclass(frozen=True, slots=True)
class HoleConfig:
    """A closed outer interval with a hole strictly inside it.

    Models a set that contains the hole's boundary, avoids its interior,
    and lies inside the outer interval.
    """

    outer: tuple
    hole: tuple

    def __post_init__(self):
        a, b = (to_fraction(v) for v in self.outer)
        c, d = (to_fraction(v) for v in self.hole)
        object.__setattr__(self, "outer", (a, b))
        object.__setattr__(self, "hole", (c, d))
        if not (a < c <= d < b):
            raise ValidationError("hole must lie in the interior of the outer interval")


def separation_test(f: HoleConfig, f2: HoleConfig, eps) -> bool:
    """Certify d_H > eps for any closed sets respecting the two hole configs.

    True iff the outer endpoints agree within eps, both holes are longer
    than 2*eps, some hole endpoint differs by more than eps, and some hole
    endpoint of one config lies more than eps inside the other's hole.

    The last condition is what makes the certificate unconditionally sound:
    that endpoint belongs to one set while the other set keeps the whole
    eps-ball around it empty.  Without it there are configurations passing
    the first four conditions whose sets come closer than eps (both holes
    shifted the same way, overlapping by less than eps).
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValidationError("epsilon must be positive")
    a, b = f.outer
    a2, b2 = f2.outer
    c, d = f.hole
    c2, d2 = f2.hole

    def deep_inside(x, lo, hi) -> bool:
        return lo + eps < x < hi - eps

    witnessed = (
        deep_inside(c, c2, d2)
        or deep_inside(d, c2, d2)
        or deep_inside(c2, c, d)
        or deep_inside(d2, c, d)
    )
    return (
        abs(a - a2) <= eps
        and abs(b - b2) <= eps
        and d - c > 2 * eps
        and d2 - c2 > 2 * eps
        and max(abs(c - c2), abs(d - d2)) > eps
        and witnessed
    )

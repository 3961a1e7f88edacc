"""
Exact metric primitives
=======================

Hausdorff distances between finite sets and interval unions are computed in
exact rational arithmetic, and reals are quantized onto dyadic grids with an
explicit bit price.
"""

from fractions import Fraction as F

from edc import (
    FinitePointSet,
    HoleConfig,
    hausdorff_finite,
    hausdorff_vs_intervals,
    quantize,
    separation_test,
)

# the four endpoints of the first middle-third construction level
corners = FinitePointSet.from_points([0, F(1, 3), F(2, 3), 1])
just_ends = FinitePointSet.from_points([0, 1])
print("d_H(corners, {0,1}) =", hausdorff_finite(corners, just_ends))

# against the interval union the farthest choice is an interval midpoint
level_one = [(F(0), F(1, 3)), (F(2, 3), F(1))]
print("d_H(corners, level set) =", hausdorff_vs_intervals(corners, level_one))

# dyadic quantization: one third at precision 1/256 costs 9 bits
q = quantize(F(1, 3), F(1, 256))
print(f"1/3 ~ {q.value} (mantissa {q.mantissa}, grid 2^-{q.precision_exp},"
      f" {q.bit_cost} bits)")
print("halving the target adds one bit:",
      quantize(F(1, 3), F(1, 512)).bit_cost)

# a certified separation: both sets keep a fat hole, and one hole endpoint
# sits deep inside the other hole, so the sets must be > eps apart
left = HoleConfig((0, 1), (F(3, 10), F(7, 10)))
right = HoleConfig((0, 1), (F(4, 10), F(8, 10)))
print("separation certificate at eps=1/20:",
      separation_test(left, right, F(1, 20)))

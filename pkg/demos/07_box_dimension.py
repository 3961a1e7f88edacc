"""
Box-counting dimension over dyadic grids
========================================

Counting dyadic boxes that meet a set and fitting log-count against
log-resolution estimates the box dimension; coarse windows on lattice-
mismatched sets overshoot, deeper windows converge.
"""

import math

from edc import box_count, estimate_dimension, level_set, middle_third

ls = level_set(middle_third(), 12)
print("counts by scale:", [(j, box_count(ls, j)) for j in range(0, 8)])

target = math.log(2) / math.log(3)
for window in [(2, 7), (2, 12), (4, 16)]:
    est = estimate_dimension(ls, *window)
    print(f"window j={window}: slope {est.slope:.4f}"
          f" (target {target:.4f}, off by {abs(est.slope-target):.4f})")

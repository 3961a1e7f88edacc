"""
Iterated function systems and their level sets
==============================================

An IFS is a finite family of injective contractions with disjoint images.
Composing along words refines [0,1] into exponentially many intervals whose
endpoints converge geometrically onto the limit set.
"""

from fractions import Fraction as F

from edc import (
    compose_apply,
    depth_for,
    hausdorff_finite,
    level_set,
    middle_third,
    quadratic_pair,
    validate,
)

ifs = middle_third()
report = validate(ifs)
print("middle third valid:", report.ok, "certified rate:", report.rho_hat)

# words apply their first symbol first: (0, 1) sends 0 to phi_1(phi_0(0))
print("phi_(0,1)(0) =", compose_apply(ifs, (0, 1), 0))

for depth in (1, 2, 3):
    ls = level_set(ifs, depth)
    widths = {hi - lo for lo, hi in ls.intervals}
    print(f"depth {depth}: {len(ls.intervals)} intervals of width {widths}")

# endpoint sets converge at rate rho^n
e4 = level_set(ifs, 4).endpoints
e8 = level_set(ifs, 8).endpoints
print("d_H(level 4, level 8) =", hausdorff_finite(e4, e8), "<=", F(1, 3) ** 4)

# how deep until every interval is shorter than 1/1000?
print("depth_for(1/3, 1/1000) =", depth_for(F(1, 3), F(1, 1000)))

# a polynomial system goes through the same machinery (fixed-point grids
# keep deep evaluations tractable)
quad = quadratic_pair()
print("quadratic pair valid:", validate(quad).ok)
ls = level_set(quad, 6, grid_bits=64)
print("quadratic depth 6:", len(ls.intervals), "intervals, first =",
      tuple(float(x) for x in ls.intervals[0]))

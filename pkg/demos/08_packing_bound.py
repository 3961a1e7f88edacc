"""
Packing estimates as a complexity lower bound
=============================================

The log2 size of a pairwise eps-separated family lower-bounds how many bits
any description scheme needs at precision eps.  Sampling realizations of
the smooth family and extracting a separated subset greedily shows the
count exploding as eps shrinks.
"""

from fractions import Fraction as F

from edc import ScalingParams, packing_estimate

params = ScalingParams(F(1, 4), F(1, 2), F(1, 20), seed=313)

print("ell  size  log2  certified  measured")
for ell in range(6, 12):
    res = packing_estimate(params, F(1, 1 << ell), trials=96)
    print(f"{ell:3d}  {res.size:4d}  {res.log2_size:4.1f}"
          f"  {len(res.certified_pairs):9d}  {len(res.measured_pairs):8d}")

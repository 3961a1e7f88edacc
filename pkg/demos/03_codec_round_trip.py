"""
Encoding Cantor sets at a precision target
==========================================

Each codec turns its input into a self-delimiting bitstring; decoding yields
a finite set provably within eps = 2**-ell of the limit set in Hausdorff
distance.  The round trip is verified here in exact arithmetic against a
deep reference construction.
"""

from fractions import Fraction as F

from edc import (
    CkCantor,
    LambdaStream,
    ScalingParams,
    Uniform,
    decode,
    encode_analytic,
    encode_ck,
    encode_poly,
    encode_rand_central,
    geometric_series_pair,
    hausdorff_vs_intervals,
    middle_third,
    reference_intervals,
)

ELL = 10
eps = F(1, 2**ELL)

inputs = [
    ("poly, middle third", middle_third(), encode_poly),
    ("analytic, geometric series", geometric_series_pair(), encode_analytic),
    ("random central", LambdaStream(20260809, Uniform(F(2, 5), F(3, 5))),
     encode_rand_central),
    ("smooth scaling", CkCantor(ScalingParams(F(1, 4), F(1, 2), F(1, 20), 7)),
     encode_ck),
]

for name, obj, encode in inputs:
    desc = encode(obj, ELL)
    points = decode(desc)
    ref = reference_intervals(obj, eps / 4)
    dh = hausdorff_vs_intervals(points, ref)
    print(f"{name:28s} {desc.total_bits:6d} bits -> {len(points):6d} points,"
          f" d_H/eps = {float(dh / eps):.3f}")

# the blob is self-contained: bytes in, points out
blob = encode_poly(middle_third(), 8).blob
print("blob starts with", blob[:4], "and decodes to", len(decode(blob)), "points")

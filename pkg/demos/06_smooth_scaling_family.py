"""
Randomized smooth families from scaling functions
=================================================

A scaling function assigns every tree node a child/parent ratio
rho + zeta * sum theta^(q-1) lambda_(prefixes); the family's smoothness
order is 1 + log(theta)/log(rho) and its box dimension drifts from
-log2/log(rho) linearly in zeta.
"""

from fractions import Fraction as F

from edc import (
    CkCantor,
    ScalingParams,
    build_ck,
    ds_bracket,
    estimate_dimension,
    smoothness_k,
)

params = ScalingParams(F(1, 4), F(1, 2), F(1, 20), seed=7)
cantor = CkCantor(params)

print("smoothness order:", smoothness_k(params.rho, params.theta))
print("ratio envelope: [", params.rho, ",", params.rate_split, "]")

ls = build_ck(cantor, 3)
for w, (lo, hi) in zip(ls.words, ls.intervals):
    print(" ", "".join(map(str, w)), float(lo), float(hi))

# the ratio identity holds exactly at every node
parent = build_ck(cantor, 2)
plen = dict(zip(parent.words, (hi - lo for lo, hi in parent.intervals)))
w, (lo, hi) = ls.words[0], ls.intervals[0]
assert hi - lo == plen[w[1:]] * cantor.scaling_value(w[1:])
print("ratio identity verified at", w)

# symbolic distance between words is bracketed by the ratio envelope
m = ds_bracket(cantor, (0, 0, 1), (0, 1, 1))
print(f"words share a prefix of length {m.prefix_len}:"
      f" d_S in [{float(m.lower):.4f}, {float(m.upper):.4f}]")

est = estimate_dimension(build_ck(cantor, 12), 2, 7)
print(f"box dimension estimate: {est.slope:.4f}"
      f" (zeta -> 0 limit is 0.5, drift is O(zeta))")

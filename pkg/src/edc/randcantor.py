"""Random central Cantor sets: per-level i.i.d. contraction factors, exact
level constructions, the typical-log-contraction audits, and the sound
hole-separation probe between two realizations.

Transcendental comparisons (products of lambdas against exp thresholds) are
decided with interval arithmetic at escalating precision; ties have
probability zero under the admitted densities, so an undecidable comparison
raises instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from edc.numeric import (
    BudgetError,
    FinitePointSet,
    HoleConfig,
    ValidationError,
    separation_test,
    to_fraction,
)
from edc.rng import TAG_SEQUENCE, Distribution, TruncatedBeta, Uniform
from edc.ifs import point_budget


@dataclass(frozen=True)
class LambdaStream:
    """Reproducible i.i.d. contraction factors lambda_1, lambda_2, ..."""

    seed: int
    dist: Distribution

    def value(self, k: int) -> Fraction:
        if k < 1:
            raise ValidationError("levels are indexed from 1")
        return self.dist.sample(self.seed, TAG_SEQUENCE, k)

    def values(self, n: int) -> tuple:
        return tuple(self.value(k) for k in range(1, n + 1))


def _as_lambdas(lam, n: int) -> tuple:
    if isinstance(lam, LambdaStream):
        return lam.values(n)
    vals = tuple(to_fraction(v) for v in lam)
    if len(vals) < n:
        raise ValidationError(f"need {n} contraction factors, got {len(vals)}")
    if any(not (0 < v < 1) for v in vals):
        raise ValidationError("contraction factors must lie in (0,1)")
    return vals[:n]


# ---------------------------------------------------------------------------
# Exact central construction


@dataclass(frozen=True, slots=True)
class CentralLevels:
    """Levels 0..depth of the central construction for one realization."""

    depth: int
    lambdas: tuple
    levels: tuple  # levels[k] = tuple of (lo, hi), 2**k intervals
    lengths: tuple  # lengths[k] = common interval length at level k

    def endpoints(self, k: int | None = None) -> FinitePointSet:
        pts = []
        for lo, hi in self.levels[self.depth if k is None else k]:
            pts.append(lo)
            pts.append(hi)
        return FinitePointSet.from_points(pts)


def central_lengths(lambdas: Sequence[Fraction]) -> list:
    """Common interval length per level: L_k = 2**-k * prod lambda_h."""
    lengths = [Fraction(1)]
    for lam in lambdas:
        lengths.append(lengths[-1] * lam / 2)
    return lengths


def build_central(lam, depth: int, budget: int | None = None) -> CentralLevels:
    """Remove the central (1 - lambda_k) fraction of every interval, k times."""
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    limit = budget if budget is not None else point_budget()
    if 2 ** (depth + 1) > limit:
        raise BudgetError(
            f"central construction needs {2**(depth+1)} endpoints, over the"
            f" budget of {limit} (EDC_BUDGET_POINTS)"
        )
    lambdas = _as_lambdas(lam, depth)
    lengths = central_lengths(lambdas)
    levels = [((Fraction(0), Fraction(1)),)]
    for k in range(1, depth + 1):
        ln = lengths[k]
        nxt = []
        for lo, hi in levels[-1]:
            nxt.append((lo, lo + ln))
            nxt.append((hi - ln, hi))
        levels.append(tuple(nxt))
    return CentralLevels(depth, lambdas, tuple(levels), tuple(lengths))


def central_boundary_scaled(
    lambdas: Sequence[Fraction], depth: int
) -> tuple:
    """The 2**(depth+1) boundary points of level `depth`, streamed in order.

    Returns (generator of numerators, denominator).  Memory stays O(depth):
    successive leaf offsets differ by one suffix-sum update.
    """
    lengths = central_lengths(lambdas[:depth])
    den = 1
    for ln in lengths:
        den = den * ln.denominator // math.gcd(den, ln.denominator)
    scaled = [ln.numerator * (den // ln.denominator) for ln in lengths]
    deltas = [scaled[k - 1] - scaled[k] for k in range(1, depth + 1)]
    l_deep = scaled[depth]

    def walk() -> Iterator[int]:
        if depth == 0:
            yield 0
            yield scaled[0]
            return
        # bit j of the leaf index selects left/right at level depth - j
        sufsum = [0] * (depth + 1)
        for t in range(1, depth + 1):
            sufsum[t] = sufsum[t - 1] + deltas[depth - t]
        adj = [deltas[depth - 1 - t] - sufsum[t] for t in range(depth)]
        offset = 0
        for b in range(1 << depth):
            yield offset
            yield offset + l_deep
            nxt = b + 1
            if nxt >> depth:
                break
            t = ((nxt & -nxt).bit_length()) - 1  # trailing ones of b
            offset += adj[t]

    return walk(), den


# ---------------------------------------------------------------------------
# Interval-arithmetic comparisons


def _iv_frac(x: Fraction):
    return mpmath.iv.mpf(x.numerator) / mpmath.iv.mpf(x.denominator)


def _decide_sign(build, max_prec: int = 1600) -> int:
    """Sign of a real given as an interval-valued expression builder."""
    prec = 80
    while prec <= max_prec:
        old = mpmath.iv.prec
        try:
            mpmath.iv.prec = prec
            val = build()
            if val > 0:
                return 1
            if val < 0:
                return -1
        finally:
            mpmath.iv.prec = old
        prec *= 2
    raise RuntimeError(
        "comparison undecidable at high precision (measure-zero tie?)"
    )


def gamma_interval(dist: Distribution):
    """mean of log(x) under the density, as an mpmath interval (uniform only)."""
    if isinstance(dist, Uniform):
        a, b = dist.a, dist.b
        if a == 0:
            # integral of log on (0,b): b(log b - 1)
            bb = _iv_frac(b)
            return (bb * (mpmath.iv.log(bb) - 1)) / _iv_frac(b - a)
        aa, bb = _iv_frac(a), _iv_frac(b)
        return (bb * (mpmath.iv.log(bb) - 1) - aa * (mpmath.iv.log(aa) - 1)) / _iv_frac(
            b - a
        )
    raise ValidationError("closed-form gamma only for uniform distributions")


@dataclass(frozen=True, slots=True)
class GammaEstimate:
    value: float
    ci_low: float
    ci_high: float
    exact: bool


def gamma_of(dist: Distribution, samples: int = 20000, seed: int = 0) -> GammaEstimate:
    """mean of log(x) under the density: closed form for uniform, Monte Carlo
    with a reported confidence interval otherwise."""
    if isinstance(dist, Uniform):
        a, b = float(dist.a), float(dist.b)
        if dist.a == 0:
            g = (b * (math.log(b) - 1)) / (b - a)
        else:
            g = (b * (math.log(b) - 1) - a * (math.log(a) - 1)) / (b - a)
        return GammaEstimate(g, g, g, True)
    if isinstance(dist, TruncatedBeta):
        logs = [
            math.log(dist.sample(seed, TAG_SEQUENCE, k)) for k in range(1, samples + 1)
        ]
        mean = sum(logs) / samples
        var = sum((v - mean) ** 2 for v in logs) / (samples - 1)
        half = 1.96 * math.sqrt(var / samples)
        return GammaEstimate(mean, mean - half, mean + half, False)
    raise ValidationError("unsupported distribution")


# ---------------------------------------------------------------------------
# Audits


@dataclass(frozen=True, slots=True)
class AuditResult:
    gamma_hat: float
    eta: Fraction
    in_lambda_n: bool
    lambda_first_violation: int | None
    in_psi_q: bool
    psi_first_violation: int | None
    n_eps: int


def default_eta(dist: Distribution) -> Fraction:
    """Slack defaults to a tenth of |gamma|."""
    g = gamma_of(dist).value
    return abs(Fraction(g)) / 10


def _gamma_builder(dist: Distribution, gamma_value=None):
    """Interval-valued gamma: exact closed form for uniform, otherwise the
    supplied (or Monte Carlo) constant treated as exact."""
    if gamma_value is not None:
        g = to_fraction(gamma_value)
        return lambda: _iv_frac(g)
    if isinstance(dist, Uniform):
        return lambda: gamma_interval(dist)
    g = Fraction(gamma_of(dist).value)
    return lambda: _iv_frac(g)


def _log_product_vs_threshold(lambdas: Sequence[Fraction], k: int, rhs_builder) -> int:
    """Sign of  sum_{h<=k} log(lambda_h) - rhs."""

    def build():
        acc = mpmath.iv.mpf(0)
        for lam in lambdas[:k]:
            acc += mpmath.iv.log(_iv_frac(lam))
        return acc - rhs_builder()

    return _decide_sign(build)


def bell_degree(
    dist: Distribution, eps: Fraction, eta: Fraction, gamma_value=None
) -> int:
    """Smallest n with (2 exp(eta - gamma))**n * eps > log(1/eps)**-2."""
    eps = to_fraction(eps)
    if not 0 < eps < 1:
        raise ValidationError("eps must lie in (0,1)")
    gamma_b = _gamma_builder(dist, gamma_value)

    def cond(n: int) -> bool:
        def build():
            base = 2 * mpmath.iv.exp(_iv_frac(eta) - gamma_b())
            lhs = base**n * _iv_frac(eps)
            rhs = 1 / mpmath.iv.log(1 / _iv_frac(eps)) ** 2
            return lhs - rhs

        return _decide_sign(build) > 0

    n = 0
    while not cond(n):
        n += 1
        if n > 10_000:
            raise RuntimeError("bell degree did not stabilize")
    return n


def audit(
    lam,
    n: int,
    eta: Fraction | None = None,
    q: int | None = None,
    dist: Distribution | None = None,
    gamma_value=None,
) -> AuditResult:
    """Membership of a realization in the typical sets.

    The first set requires prod_{h<=k} lambda_h > exp(k (gamma - eta)) for
    every k from floor(sqrt(n)) to n.  The second requires the level-k hole
    length (1 - lambda_{k+1}) 2**-k prod lambda_h to exceed 2**(2-q) for
    every k up to the eps = 2**-q resolution degree.
    """
    if isinstance(lam, LambdaStream):
        dist = lam.dist if dist is None else dist
    if dist is None:
        raise ValidationError("audit needs the underlying distribution")
    if eta is None:
        eta = default_eta(dist)
    eta = to_fraction(eta)
    if eta <= 0:
        raise ValidationError("slack must be positive")
    q = n if q is None else q
    gamma_hat = gamma_of(dist).value
    gamma_b = _gamma_builder(dist, gamma_value)

    n_eps = bell_degree(dist, Fraction(1, 2**q), eta, gamma_value)
    need = max(n, n_eps + 1)
    lambdas = _as_lambdas(lam, need)

    in_lam, lam_first = True, None
    k0 = math.isqrt(n)
    old_prec = mpmath.iv.prec
    try:
        mpmath.iv.prec = 120
        gamma_minus_eta = gamma_b() - _iv_frac(eta)
        acc = mpmath.iv.mpf(0)
        for k in range(1, n + 1):
            acc += mpmath.iv.log(_iv_frac(lambdas[k - 1]))
            if k < k0:
                continue
            diff = acc - k * gamma_minus_eta
            if diff > 0:
                continue
            if diff < 0:
                in_lam, lam_first = False, k
                break
            # interval straddles zero: decide this k alone at high precision
            sign = _log_product_vs_threshold(
                lambdas, k, lambda: k * (gamma_b() - _iv_frac(eta))
            )
            if sign < 0:
                in_lam, lam_first = False, k
                break
    finally:
        mpmath.iv.prec = old_prec

    in_psi, psi_first = True, None
    prod = Fraction(1)
    threshold = Fraction(4, 2**q)
    for k in range(0, n_eps + 1):
        hole = (1 - lambdas[k]) * prod / 2**k
        if hole <= threshold:
            in_psi, psi_first = False, k
            break
        prod *= lambdas[k]
    return AuditResult(gamma_hat, eta, in_lam, lam_first, in_psi, psi_first, n_eps)


# ---------------------------------------------------------------------------
# Separation probe


def separation_probe(lam_a, lam_b, eps, dist: Distribution | None = None) -> bool:
    """Walk the leftmost interval chain of two realizations looking for a
    certified hole separation; True implies d_H > eps for the limit sets.

    Sound but not complete: a False only means no certificate was found at
    the audited depth.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if isinstance(lam_a, LambdaStream):
        dist = lam_a.dist if dist is None else dist
    if dist is None:
        raise ValidationError("separation probe needs the distribution")
    eta = default_eta(dist)
    n_eps = bell_degree(dist, eps, eta)
    depth = max(1, n_eps)
    la = _as_lambdas(lam_a, depth + 1)
    lb = _as_lambdas(lam_b, depth + 1)
    len_a = central_lengths(la)
    len_b = central_lengths(lb)
    for k in range(1, depth + 1):
        if abs(len_a[k] - len_b[k]) > eps:
            fa = HoleConfig(
                (Fraction(0), len_a[k - 1]),
                (len_a[k], len_a[k - 1] - len_a[k]),
            )
            fb = HoleConfig(
                (Fraction(0), len_b[k - 1]),
                (len_b[k], len_b[k - 1] - len_b[k]),
            )
            if separation_test(fa, fb, eps):
                return True
    return False

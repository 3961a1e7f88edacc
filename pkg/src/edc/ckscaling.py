"""Randomized smooth central Cantor sets built from scaling functions.

A realization assigns an i.i.d. value lambda_w to every finite word w; the
truncated scaling value of a word is

    S(w) = rho + zeta * sum_{q=1..|w|} theta**(q-1) * lambda_{w[:q]}

and every node splits centrally with both children scaled by S(parent word).
Children prepend their symbol (the parent of word v is v[1:]), matching the
composition convention in `edc.ifs`.  The empty word has S = rho, so the
root always splits at exactly rho.

Values of lambda are realized lazily from a keyed counter-based draw, so any
node is recomputable without storing the tree; they land on the 53-bit
dyadic grid so every downstream quantity stays an exact rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from edc.ifs import LevelSet, Word, depth_for, point_budget
from edc.numeric import (
    BudgetError,
    FinitePointSet,
    ValidationError,
    to_fraction,
)
from edc.rng import TAG_WORD, Distribution, Uniform, derive_seed


def word_index(w: Word) -> int:
    """Prefix-free integer encoding of a binary word (leading 1 sentinel)."""
    acc = 1
    for s in w:
        acc = (acc << 1) | s
    return acc


@dataclass(frozen=True)
class ScalingParams:
    rho: Fraction
    theta: Fraction
    zeta: Fraction
    seed: int
    dist: Distribution = Uniform(Fraction(0), Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "rho", to_fraction(self.rho))
        object.__setattr__(self, "theta", to_fraction(self.theta))
        object.__setattr__(self, "zeta", to_fraction(self.zeta))
        if not (0 < self.rho < self.theta < 1):
            raise ValidationError("need 0 < rho < theta < 1")
        if not (0 < self.zeta < 1):
            raise ValidationError("zeta must lie in (0,1)")
        if self.rho + self.zeta / (1 - self.theta) >= Fraction(1, 2):
            raise ValidationError(
                "rho + zeta/(1-theta) must stay below 1/2 so children fit"
            )

    @property
    def rate_split(self) -> Fraction:
        """Upper bound on every child/parent length ratio."""
        return self.rho + self.zeta / (1 - self.theta)

    @property
    def rate_map(self) -> Fraction:
        """Rational upper bound on the generating maps' slopes.

        Appending a symbol multiplies each scaling factor by at most
        1 + zeta theta**j / rho, so the product is below
        exp(zeta/(rho(1-theta))) <= 1/(1 - zeta/(rho(1-theta))).
        """
        x = self.zeta / (self.rho * (1 - self.theta))
        if x >= 1:
            raise ValidationError("zeta too large for a certified slope bound")
        bound = self.rho / (1 - x)
        if bound >= 1:
            raise ValidationError("certified slope bound reaches 1")
        return bound


def smoothness_k(rho, theta):
    """Smoothness order 1 + log(theta)/log(rho); exact Fraction when the
    ratio of logs is a small rational, float otherwise."""
    rho, theta = to_fraction(rho), to_fraction(theta)
    if not (0 < rho < theta < 1):
        raise ValidationError("need rho < theta < 1 for smoothness order")
    for b in range(1, 13):
        for a in range(1, 2 * b + 1):
            if theta**b == rho**a:
                return 1 + Fraction(a, b)
    return 1 + math.log(theta) / math.log(rho)


class CkCantor:
    """One realization of the randomized scaling construction."""

    def __init__(self, params: ScalingParams, lambda_const: Fraction | None = None):
        self.params = params
        self._const = None if lambda_const is None else to_fraction(lambda_const)
        if self._const is not None and not (0 < self._const < 1):
            raise ValidationError("constant lambda must lie in (0,1)")
        self._lam: dict = {}
        self._scale: dict = {}
        self._theta_pow = [Fraction(1)]

    def lam(self, w: Word) -> Fraction:
        w = tuple(w)
        if self._const is not None:
            return self._const
        v = self._lam.get(w)
        if v is None:
            v = self.params.dist.sample(self.params.seed, TAG_WORD, word_index(w))
            self._lam[w] = v
        return v

    def scaling_value(self, w: Word) -> Fraction:
        """S(w) for the truncated scaling function; S(()) == rho."""
        w = tuple(w)
        v = self._scale.get(w)
        if v is not None:
            return v
        p = self.params
        while len(self._theta_pow) < max(len(w), 1):
            self._theta_pow.append(self._theta_pow[-1] * p.theta)
        acc = Fraction(0)
        for q in range(1, len(w) + 1):
            acc += self._theta_pow[q - 1] * self.lam(w[:q])
        v = p.rho + p.zeta * acc
        self._scale[w] = v
        return v

    def node_interval(self, w: Word) -> tuple:
        """The interval of word w, descending root -> w along suffixes."""
        w = tuple(w)
        lo, hi = Fraction(0), Fraction(1)
        u: Word = ()
        for t in range(len(w) - 1, -1, -1):
            s = self.scaling_value(u)
            ln = (hi - lo) * s
            if w[t] == 0:
                hi = lo + ln
            else:
                lo = hi - ln
            u = (w[t],) + u
        return lo, hi

    def gap(self, w: Word) -> tuple:
        """The central hole of J_w (between its two children)."""
        lo, hi = self.node_interval(w)
        ln = (hi - lo) * self.scaling_value(w)
        return lo + ln, hi - ln


def build_ck(cantor: CkCantor, depth: int, budget: int | None = None) -> LevelSet:
    """Materialize the 2**depth intervals at `depth` with exact rationals."""
    if depth < 0:
        raise ValidationError("depth must be non-negative")
    limit = budget if budget is not None else point_budget()
    if 2 ** (depth + 1) > limit:
        raise BudgetError(
            f"level set needs {2**(depth+1)} endpoints, over the budget of"
            f" {limit} (EDC_BUDGET_POINTS)"
        )
    cells = [((), Fraction(0), Fraction(1))]
    for _ in range(depth):
        nxt = []
        for w, lo, hi in cells:
            ln = (hi - lo) * cantor.scaling_value(w)
            nxt.append(((0,) + w, lo, lo + ln))
            nxt.append(((1,) + w, hi - ln, hi))
        cells = nxt
    words = tuple(c[0] for c in cells)
    intervals = tuple((c[1], c[2]) for c in cells)
    pts = []
    for lo, hi in intervals:
        pts.append(lo)
        pts.append(hi)
    return LevelSet(depth, words, intervals, FinitePointSet.from_points(pts))


# ---------------------------------------------------------------------------
# Symbolic-metric bracket


@dataclass(frozen=True, slots=True)
class DsMetric:
    """Bracket for the scaling metric between two words: the exact value
    takes a sup over infinite continuations, so only the common-prefix
    geometric envelope is reported."""

    prefix_len: int
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValidationError("bracket out of order")


def ds_bracket(cantor: CkCantor, w: Word, w2: Word) -> DsMetric:
    w, w2 = tuple(w), tuple(w2)
    if w == w2:
        raise ValidationError("identical words have distance zero, no bracket")
    n = 0
    for a, b in zip(w, w2):
        if a != b:
            break
        n += 1
    p = cantor.params
    return DsMetric(n, p.rho**n, p.rate_split**n)


# ---------------------------------------------------------------------------
# Separation certificate and packing estimator


def separation_threshold(params: ScalingParams, eps: Fraction, p: int) -> Fraction:
    return (
        (params.rho * params.theta) ** -p
        * (4 + 2 * params.rho**2)
        * eps
        / params.zeta
    )


def certificate_depth(params: ScalingParams, eps) -> int:
    """Largest p with (rho*theta)**p >= C*eps/zeta, C = (4+2 rho^2) sup f."""
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    c = (4 + 2 * params.rho**2) * params.dist.sup_density
    x = c * eps / params.zeta
    if x >= 1:
        raise ValidationError("eps too large: no certificate depth exists")
    rt = params.rho * params.theta
    p = 0
    acc = rt
    while acc >= x:
        acc *= rt
        p += 1
    return p


def separation_event(
    cantor: CkCantor, other: CkCantor, eps, zeta: Fraction | None = None
) -> bool:
    """True when some word of length 1..certificate_depth has its lambda
    values further apart than the scaled threshold, which forces the two
    limit sets more than eps apart in Hausdorff distance.

    The empty word is skipped: its lambda never enters any scaling value,
    so it cannot witness a separation.
    """
    p1, p2 = cantor.params, other.params
    if (p1.rho, p1.theta, p1.zeta) != (p2.rho, p2.theta, p2.zeta):
        raise ValidationError("separation event needs shared scaling constants")
    eps = to_fraction(eps)
    zeta = p1.zeta if zeta is None else to_fraction(zeta)
    pbar = certificate_depth(p1, eps)
    rt = p1.rho * p1.theta
    words: list = [()]
    for p in range(1, pbar + 1):
        words = [w + (s,) for w in words for s in (0, 1)]
        thr = rt**-p * (4 + 2 * p1.rho**2) * eps / zeta
        if thr >= 1:
            continue
        for w in words:
            if abs(cantor.lam(w) - other.lam(w)) > thr:
                return True
    return False


@dataclass(frozen=True, slots=True)
class PackingResult:
    """Greedy eps-separated family extracted from sampled realizations."""

    eps: Fraction
    trials: int
    members: tuple
    certified_pairs: tuple  # (i, j) decided by the lambda certificate
    measured_pairs: tuple  # (i, j, separated) decided by deep measurement
    depth: int
    margin: Fraction

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def log2_size(self) -> float:
        return math.log2(self.size) if self.size else 0.0


def sample_realizations(params: ScalingParams, trials: int) -> list:
    """Independent realizations with per-trial seeds derived from the base."""
    return [
        CkCantor(
            ScalingParams(
                params.rho,
                params.theta,
                params.zeta,
                derive_seed(params.seed, t),
                params.dist,
            )
        )
        for t in range(trials)
    ]


def endpoint_arrays(cantors: Sequence[CkCantor], depth: int) -> tuple:
    """Depth-d boundary sets as integer arrays over one shared denominator."""
    sets = [build_ck(c, depth).endpoints for c in cantors]
    den = 1
    for e in sets:
        den = den // math.gcd(den, e.den) * e.den
    return [e.rescaled(den) for e in sets], den


def measurement_depth(params: ScalingParams, eps: Fraction) -> int:
    """Depth whose surrogate slack 2 * rate**d is below eps/4."""
    return depth_for(params.rate_split, eps / 8)


def packing_estimate(
    params: ScalingParams,
    eps,
    trials: int,
    cantors: Sequence[CkCantor] | None = None,
) -> PackingResult:
    """Lower-bound proxy for description complexity: log2 of a greedily
    extracted pairwise eps-separated family of sampled realizations.

    Pairs are certified by `separation_event` where possible; otherwise the
    Hausdorff distance of depth-d boundary sets is measured exactly and the
    2 * rate**d surrogate slack is charged against it, so acceptance into
    the family always certifies true separation of the limit sets.
    """
    eps = to_fraction(eps)
    if trials < 1:
        raise ValidationError("trials must be positive")
    if cantors is None:
        cantors = sample_realizations(params, trials)
    else:
        cantors = list(cantors)[:trials]
    depth = measurement_depth(params, eps)
    margin = 2 * params.rate_split**depth
    arrays, den = endpoint_arrays(cantors, depth)
    members: list = []
    certified: list = []
    measured: list = []
    try:
        certificate_depth(params, eps)
        have_certs = True
    except ValidationError:
        have_certs = False  # eps too coarse: measurement decides everything

    from edc.numeric import _directed_gap  # internal fast path

    def separated(i: int, j: int) -> bool:
        if have_certs and separation_event(cantors[i], cantors[j], eps):
            certified.append((j, i))
            return True
        gap = max(
            _directed_gap(arrays[i], arrays[j]),
            _directed_gap(arrays[j], arrays[i]),
        )
        ok = Fraction(gap, den) - margin > eps
        measured.append((j, i, ok))
        return ok

    for idx in range(len(cantors)):
        if all(separated(m, idx) for m in members):
            members.append(idx)
    return PackingResult(
        eps,
        trials,
        tuple(members),
        tuple(certified),
        tuple(measured),
        depth,
        margin,
    )

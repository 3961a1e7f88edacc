"""Iterated function systems on [0,1]: map variants, certified validation,
word composition, and depth-n level sets.

Words follow the convention that appending a symbol applies that map last:
for a word w = (w_1, ..., w_n), the composed map sends x through phi_{w_1}
first.  Consequently the parent of a depth-(n+1) interval is obtained by
dropping the word's FIRST symbol, and refining a word prepends symbols.

Deep orbits of non-affine maps are evaluated in fixed-point dyadic
arithmetic (exact rational evaluation would double denominator bit lengths
at every level); the per-step rounding is half-up on a 2**-G grid and the
accumulated error is bounded by (deg+1) * 2**-G / (1 - rho).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from edc.numeric import (
    BudgetError,
    FinitePointSet,
    ValidationError,
    frac_str,
    to_fraction,
)

Word = tuple

DEFAULT_POINT_BUDGET = 1 << 24
_GRID_BITS = 12  # 2**12 + 1 verification grid points
_EVAL_BITS = 96  # fixed-point precision for validation sweeps


def point_budget() -> int:
    raw = os.environ.get("EDC_BUDGET_POINTS")
    if raw is None:
        return DEFAULT_POINT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"EDC_BUDGET_POINTS={raw!r} is not an integer")


# ---------------------------------------------------------------------------
# Map variants


@dataclass(frozen=True, slots=True)
class AffineMap:
    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", to_fraction(self.slope))
        object.__setattr__(self, "offset", to_fraction(self.offset))

    @property
    def coefficients(self) -> tuple:
        return (self.offset, self.slope)

    @property
    def degree(self) -> int:
        return 1


@dataclass(frozen=True, slots=True)
class PolynomialMap:
    coefficients: tuple  # ascending powers

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(to_fraction(c) for c in self.coefficients)
        )
        if not self.coefficients:
            raise ValidationError("polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True, slots=True)
class SeriesMap:
    """Truncated power series with an analytic-tail certificate.

    The stored coefficients define the map exactly; `radius` and `bound`
    assert |c_h| * radius**h <= bound for every h, which the analytic codec
    uses to budget its truncation degree.
    """

    coefficients: tuple
    radius: Fraction
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(to_fraction(c) for c in self.coefficients)
        )
        object.__setattr__(self, "radius", to_fraction(self.radius))
        object.__setattr__(self, "bound", to_fraction(self.bound))
        if not self.coefficients:
            raise ValidationError("series needs at least one coefficient")
        if self.radius <= 1:
            raise ValidationError("series radius must exceed 1")
        rp = Fraction(1)
        for h, c in enumerate(self.coefficients):
            if abs(c) * rp > self.bound:
                raise ValidationError(
                    f"series coefficient {h} violates |c_h| R^h <= r"
                )
            rp *= self.radius

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


MapSpec = AffineMap | PolynomialMap | SeriesMap


def map_coefficients(m: MapSpec) -> tuple:
    return m.coefficients


def eval_map(m: MapSpec, x) -> Fraction:
    """Exact rational evaluation (denominators grow fast for deep orbits)."""
    x = to_fraction(x)
    acc = Fraction(0)
    for c in reversed(map_coefficients(m)):
        acc = acc * x + c
    return acc


def map_derivative_coefficients(m: MapSpec) -> tuple:
    cs = map_coefficients(m)
    return tuple(a * c for a, c in enumerate(cs))[1:] or (Fraction(0),)


def _round_div(a: int, shift: int) -> int:
    """Round-half-up division by 2**shift (half goes toward +infinity)."""
    return (a + (1 << (shift - 1))) >> shift


def fixed_coefficients(coeffs: Sequence[Fraction], bits: int) -> tuple:
    """Round each coefficient half-up onto the 2**-bits grid, as integers."""
    return tuple(
        (2 * c.numerator * (1 << bits) + c.denominator) // (2 * c.denominator)
        for c in coeffs
    )


def eval_fixed(coeffs_scaled: Sequence[int], x_scaled: int, bits: int) -> int:
    """Horner evaluation on the 2**-bits grid with half-up per-step rounding."""
    acc = coeffs_scaled[-1]
    for c in reversed(coeffs_scaled[:-1]):
        acc = _round_div(acc * x_scaled, bits) + c
    return acc


# ---------------------------------------------------------------------------
# IFS specification and certified validation


@dataclass(frozen=True, slots=True)
class IfsSpec:
    maps: tuple
    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "rho", to_fraction(self.rho))
        if len(self.maps) < 2:
            raise ValidationError("an IFS needs at least two maps")
        if not (0 < self.rho < 1):
            raise ValidationError("contraction rate must lie in (0,1)")

    @property
    def index_set(self) -> range:
        return range(len(self.maps))

    def is_affine(self) -> bool:
        return all(isinstance(m, AffineMap) for m in self.maps)


@dataclass(frozen=True, slots=True)
class MapBounds:
    image: tuple  # certified (lo, hi) for phi([0,1])
    slope_sup: Fraction  # certified sup of |phi'|
    slope_inf: Fraction  # certified inf of |phi'| (may be negative => unknown sign)
    increasing: bool


@dataclass(frozen=True, slots=True)
class IfsReport:
    ok: bool
    clauses: tuple  # (name, passed, detail)
    rho_hat: Fraction  # certified uniform contraction bound
    bounds: tuple  # MapBounds per map

    def failed_clauses(self) -> tuple:
        return tuple(name for name, passed, _ in self.clauses if not passed)


def _certify_map(m: MapSpec) -> MapBounds:
    if isinstance(m, AffineMap):
        a, b = m.slope, m.offset
        lo, hi = min(b, a + b), max(b, a + b)
        return MapBounds((lo, hi), abs(a), abs(a), a > 0)
    cs = map_coefficients(m)
    deg = len(cs) - 1
    dcs = map_derivative_coefficients(m)
    # second-derivative sup via the coefficient-norm bound
    s2 = sum(
        (a * (a - 1)) * abs(c) for a, c in enumerate(cs) if a >= 2
    ) or Fraction(0)
    eval_err = Fraction(deg + 1, 1 << _EVAL_BITS)
    h = Fraction(1, 1 << _GRID_BITS)
    fc = fixed_coefficients(cs, _EVAL_BITS)
    fdc = fixed_coefficients(dcs, _EVAL_BITS)
    vmin = vmax = None
    dmin = dmax = None
    for i in range((1 << _GRID_BITS) + 1):
        x = i << (_EVAL_BITS - _GRID_BITS)
        v = eval_fixed(fc, x, _EVAL_BITS)
        d = eval_fixed(fdc, x, _EVAL_BITS)
        vmin = v if vmin is None or v < vmin else vmin
        vmax = v if vmax is None or v > vmax else vmax
        dmin = d if dmin is None or d < dmin else dmin
        dmax = d if dmax is None or d > dmax else dmax
    scale = Fraction(1, 1 << _EVAL_BITS)
    d_lo = dmin * scale - s2 * h / 2 - eval_err
    d_hi = dmax * scale + s2 * h / 2 + eval_err
    slope_sup = max(abs(d_lo), abs(d_hi))
    if d_lo > 0:
        slope_inf, increasing = d_lo, True
    elif d_hi < 0:
        slope_inf, increasing = -d_hi, False
    else:
        slope_inf, increasing = d_lo, True  # sign not certified
    if slope_inf > 0:
        # certified monotone: the image is exactly the endpoint pair
        image = _sorted_pair(eval_map(m, 0), eval_map(m, 1))
    else:
        pad = slope_sup * h / 2 + eval_err
        image = (vmin * scale - pad, vmax * scale + pad)
    return MapBounds(image, slope_sup, slope_inf, increasing)


def validate(ifs: IfsSpec) -> IfsReport:
    """Check image containment, pairwise disjointness, contraction rate and
    injectivity.  Non-affine bounds are certified on a 2**12-point grid with
    derivative slack, so a pass is a certificate while a borderline failure
    may be conservative."""
    bounds = tuple(_certify_map(m) for m in ifs.maps)
    clauses = []
    inside = all(b.image[0] >= 0 and b.image[1] <= 1 for b in bounds)
    clauses.append(
        ("image_in_unit_interval", inside,
         "; ".join(f"map {i}: [{b.image[0]}, {b.image[1]}]" for i, b in enumerate(bounds))
         if not inside else "")
    )
    order = sorted(ifs.index_set, key=lambda i: bounds[i].image[0])
    disjoint = all(
        bounds[order[k]].image[1] < bounds[order[k + 1]].image[0]
        for k in range(len(order) - 1)
    )
    clauses.append(
        ("pairwise_disjoint_images", disjoint,
         "" if disjoint else "certified image brackets overlap")
    )
    rho_hat = max(b.slope_sup for b in bounds)
    contracting = rho_hat <= ifs.rho
    clauses.append(
        ("contraction_rate", contracting,
         "" if contracting else f"certified slope bound {rho_hat} exceeds rho {ifs.rho}")
    )
    injective = all(b.slope_inf > 0 for b in bounds)
    clauses.append(
        ("injective", injective, "" if injective else "derivative sign not certified")
    )
    ok = inside and disjoint and contracting and injective
    return IfsReport(ok, tuple(clauses), rho_hat, bounds)


# ---------------------------------------------------------------------------
# Composition and level sets


def compose_apply(ifs: IfsSpec, word: Word, x) -> Fraction:
    """Apply the composed map of `word` to x, first symbol applied first."""
    x = to_fraction(x)
    if not (0 <= x <= 1):
        raise ValidationError("argument must lie in [0,1]")
    for s in word:
        if s not in ifs.index_set:
            raise ValidationError(f"symbol {s!r} outside the index set")
        x = eval_map(ifs.maps[s], x)
    return x


def depth_for(rho, eps) -> int:
    """Minimal n with rho**n < eps, in exact arithmetic."""
    rho, eps = to_fraction(rho), to_fraction(eps)
    if not (0 < rho < 1):
        raise ValidationError("rho must lie in (0,1)")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    n = 0
    num, den = 1, 1
    while num * eps.denominator >= eps.numerator * den:
        num *= rho.numerator
        den *= rho.denominator
        n += 1
    return n


@dataclass(frozen=True, slots=True)
class LevelSet:
    """The |I|**n depth-n intervals keyed by word, plus their endpoint set."""

    depth: int
    words: tuple
    intervals: tuple  # (lo, hi) Fractions, sorted, disjoint
    endpoints: FinitePointSet

    def interval_for(self, word: Word) -> tuple:
        return self.intervals[self.words.index(tuple(word))]


def level_set(
    ifs: IfsSpec,
    depth: int,
    grid_bits: int | None = None,
    budget: int | None = None,
) -> LevelSet:
    """Materialize the depth-n intervals J_w and their endpoints.

    All-affine systems are evaluated in exact rationals.  Other systems
    need `grid_bits`: endpoints are then dyadics on the 2**-grid_bits grid,
    with per-application rounding error below 2**-grid_bits.
    """
    if depth < 0:
        raise ValidationError("depth must be non-negative")
    limit = budget if budget is not None else point_budget()
    count = 2 * len(ifs.maps) ** depth
    if count > limit:
        raise BudgetError(
            f"level set needs {count} endpoints, over the budget of {limit}"
            " (EDC_BUDGET_POINTS)"
        )
    exact = ifs.is_affine() and grid_bits is None
    if not exact and grid_bits is None:
        raise ValidationError(
            "non-affine level sets need grid_bits (exact denominators explode)"
        )
    report = validate(ifs)
    order = sorted(ifs.index_set, key=lambda i: report.bounds[i].image[0])
    if exact:
        cells = [((), Fraction(0), Fraction(1))]
        for _ in range(depth):
            nxt = []
            for i in order:
                m = ifs.maps[i]
                inc = report.bounds[i].increasing
                block = [
                    (w + (i,),) + _sorted_pair(eval_map(m, lo), eval_map(m, hi))
                    for (w, lo, hi) in (cells if inc else reversed(cells))
                ]
                nxt.extend(block)
            cells = nxt
        words = tuple(c[0] for c in cells)
        intervals = tuple((c[1], c[2]) for c in cells)
    else:
        g = grid_bits
        fixmaps = [
            (fixed_coefficients(map_coefficients(ifs.maps[i]), g),
             report.bounds[i].increasing)
            for i in range(len(ifs.maps))
        ]
        one = 1 << g
        cells = [((), 0, one)]
        for _ in range(depth):
            nxt = []
            for i in order:
                fc, inc = fixmaps[i]
                block = []
                for (w, lo, hi) in (cells if inc else reversed(cells)):
                    a = min(max(eval_fixed(fc, lo, g), 0), one)
                    b = min(max(eval_fixed(fc, hi, g), 0), one)
                    if a > b:
                        a, b = b, a
                    block.append((w + (i,), a, b))
                nxt.extend(block)
            cells = nxt
        words = tuple(c[0] for c in cells)
        intervals = tuple(
            (Fraction(c[1], one), Fraction(c[2], one)) for c in cells
        )
    pts = []
    for lo, hi in intervals:
        pts.append(lo)
        pts.append(hi)
    endpoints = FinitePointSet.from_points(pts)
    return LevelSet(depth, words, intervals, endpoints)


def _sorted_pair(a: Fraction, b: Fraction) -> tuple:
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# JSON wire format (exact rationals as "p/q" strings)


def ifs_to_json(ifs: IfsSpec) -> dict:
    maps = []
    for m in ifs.maps:
        if isinstance(m, AffineMap):
            maps.append(
                {"variant": "affine", "slope": frac_str(m.slope),
                 "offset": frac_str(m.offset)}
            )
        elif isinstance(m, PolynomialMap):
            maps.append(
                {"variant": "polynomial",
                 "coefficients": [frac_str(c) for c in m.coefficients]}
            )
        else:
            maps.append(
                {"variant": "series",
                 "coefficients": [frac_str(c) for c in m.coefficients],
                 "radius": frac_str(m.radius), "bound": frac_str(m.bound)}
            )
    return {"rho": frac_str(ifs.rho), "maps": maps}


def ifs_from_json(doc: dict) -> IfsSpec:
    try:
        maps = []
        for m in doc["maps"]:
            variant = m["variant"]
            if variant == "affine":
                maps.append(AffineMap(Fraction(m["slope"]), Fraction(m["offset"])))
            elif variant == "polynomial":
                maps.append(
                    PolynomialMap(tuple(Fraction(c) for c in m["coefficients"]))
                )
            elif variant == "series":
                maps.append(
                    SeriesMap(
                        tuple(Fraction(c) for c in m["coefficients"]),
                        Fraction(m["radius"]),
                        Fraction(m["bound"]),
                    )
                )
            else:
                raise ValidationError(f"unknown map variant {variant!r}")
        return IfsSpec(tuple(maps), Fraction(doc["rho"]))
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed IFS document: {exc}") from exc


def load_ifs(path: str) -> IfsSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return ifs_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Stock systems used by the demos and the experiment suite


def middle_third() -> IfsSpec:
    return IfsSpec(
        (AffineMap(Fraction(1, 3), 0), AffineMap(Fraction(1, 3), Fraction(2, 3))),
        Fraction(1, 3),
    )


def quadratic_pair() -> IfsSpec:
    """Two order-2 polynomial contractions with a fat central hole."""
    return IfsSpec(
        (
            PolynomialMap((Fraction(0), Fraction(1, 4), Fraction(1, 20))),
            PolynomialMap((Fraction(7, 10), Fraction(1, 4), Fraction(1, 20))),
        ),
        Fraction(9, 25),
    )


def geometric_series_pair(terms: int = 48) -> IfsSpec:
    """Truncations of x -> 1/(3(2-x)) and its mirror: analytic on |z| < 2."""
    c0 = [Fraction(1, 3 * 2 ** (h + 1)) for h in range(terms)]
    c1 = [Fraction(5, 6)] + [-Fraction(1, 3 * 2 ** (h + 1)) for h in range(1, terms)]
    return IfsSpec(
        (
            SeriesMap(tuple(c0), Fraction(2), Fraction(1)),
            SeriesMap(tuple(c1), Fraction(2), Fraction(1)),
        ),
        Fraction(17, 50),
    )

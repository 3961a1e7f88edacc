"""Experiment harness: precision sweeps with verified round trips, growth
models fitted in their natural coordinates, and deterministic CSV/SVG
reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from edc.ckscaling import CkCantor, ScalingParams
from edc.codecs import (
    decode,
    decode_rand_stream,
    encode_analytic,
    encode_ck,
    encode_poly,
    encode_rand_central,
    reference_intervals,
)
from edc.ifs import IfsSpec, ifs_from_json, ifs_to_json
from edc.numeric import (
    ContractError,
    ValidationError,
    frac_str,
    hausdorff_stream_vs_intervals,
    hausdorff_vs_intervals,
)
from edc.randcantor import LambdaStream
from edc.rng import parse_distribution

CODECS = ("poly", "analytic", "rand", "ck")


# ---------------------------------------------------------------------------
# Input documents


def parse_input(doc: dict):
    """Instantiate a sweep input from its JSON document."""
    kind = doc.get("kind")
    if kind == "ifs":
        return ifs_from_json(doc["ifs"])
    if kind == "rand_central":
        return LambdaStream(int(doc["seed"]), parse_distribution(doc["dist"]))
    if kind == "ck":
        return CkCantor(
            ScalingParams(
                Fraction(doc["rho"]),
                Fraction(doc["theta"]),
                Fraction(doc["zeta"]),
                int(doc["seed"]),
                parse_distribution(doc.get("dist", "uniform:0,1")),
            )
        )
    raise ValidationError(f"unknown input kind {kind!r}")


def input_to_json(obj) -> dict:
    if isinstance(obj, IfsSpec):
        return {"kind": "ifs", "ifs": ifs_to_json(obj)}
    if isinstance(obj, LambdaStream):
        return {
            "kind": "rand_central",
            "seed": obj.seed,
            "dist": obj.dist.spec_str(),
        }
    if isinstance(obj, CkCantor):
        p = obj.params
        return {
            "kind": "ck",
            "rho": frac_str(p.rho),
            "theta": frac_str(p.theta),
            "zeta": frac_str(p.zeta),
            "seed": p.seed,
            "dist": p.dist.spec_str(),
        }
    raise ValidationError(f"cannot serialize input {type(obj).__name__}")


def reseed_input(obj, seed: int):
    if isinstance(obj, LambdaStream):
        return LambdaStream(seed, obj.dist)
    if isinstance(obj, CkCantor):
        p = obj.params
        return CkCantor(ScalingParams(p.rho, p.theta, p.zeta, seed, p.dist))
    return obj  # deterministic inputs ignore seeds


def encode_for(obj, codec: str, eps_exp: int, delta=None):
    if codec == "poly":
        return encode_poly(obj, eps_exp)
    if codec == "analytic":
        return encode_analytic(obj, eps_exp)
    if codec == "rand":
        return encode_rand_central(obj, eps_exp)
    if codec == "ck":
        return encode_ck(obj, eps_exp, delta)
    raise ValidationError(f"unknown codec {codec!r}")


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True, slots=True)
class SweepRecord:
    codec: str
    seed: int
    eps_exp: int
    bits: int
    dh: Fraction


@dataclass(frozen=True, slots=True)
class SweepConfig:
    codec: str
    input_doc: dict
    eps_exp_min: int
    eps_exp_max: int
    seeds: tuple = (0,)
    delta: float | None = None
    out_csv: str | None = None
    out_svg: str | None = None

    def __post_init__(self):
        if self.codec not in CODECS:
            raise ValidationError(f"unknown codec {self.codec!r}")
        if self.eps_exp_min > self.eps_exp_max:
            raise ValidationError("empty precision range")
        if not self.seeds:
            raise ValidationError("need at least one seed")

    @classmethod
    def from_json(cls, doc: dict) -> "SweepConfig":
        return cls(
            doc["codec"],
            doc["input"],
            int(doc["eps_exp_min"]),
            int(doc["eps_exp_max"]),
            tuple(doc.get("seeds", [0])),
            doc.get("delta"),
            doc.get("out_csv"),
            doc.get("out_svg"),
        )

    def to_json(self) -> dict:
        doc = {
            "codec": self.codec,
            "input": self.input_doc,
            "eps_exp_min": self.eps_exp_min,
            "eps_exp_max": self.eps_exp_max,
            "seeds": list(self.seeds),
        }
        if self.delta is not None:
            doc["delta"] = self.delta
        if self.out_csv:
            doc["out_csv"] = self.out_csv
        if self.out_svg:
            doc["out_svg"] = self.out_svg
        return doc


def load_sweep_config(path: str) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return SweepConfig.from_json(json.load(fh))


def verify_round_trip(obj, desc) -> Fraction:
    """Exact Hausdorff distance between the decoded set and the reference
    surrogate at eps/4; raises when the d_H < eps contract fails."""
    eps = Fraction(1, 1 << desc.eps_exp)
    ref = reference_intervals(obj, eps / 4)
    if desc.codec_name == "rand":
        gen, den = decode_rand_stream(desc)
        dh = hausdorff_stream_vs_intervals(gen, den, ref)
    else:
        dh = hausdorff_vs_intervals(decode(desc), ref)
    if dh >= eps:
        raise ContractError(
            f"round-trip distance {dh} is not below eps = 2**-{desc.eps_exp}"
        )
    return dh


def sweep(cfg: SweepConfig) -> list:
    """Encode/decode/verify at every precision in the range; any contract
    failure aborts with the failing exponent named."""
    base = parse_input(cfg.input_doc)
    records = []
    for seed in cfg.seeds:
        obj = reseed_input(base, seed)
        for eps_exp in range(cfg.eps_exp_min, cfg.eps_exp_max + 1):
            try:
                desc = encode_for(obj, cfg.codec, eps_exp, cfg.delta)
                dh = verify_round_trip(obj, desc)
            except ContractError as exc:
                raise ContractError(f"eps_exp={eps_exp}: {exc}") from exc
            records.append(
                SweepRecord(cfg.codec, seed, eps_exp, desc.total_bits, dh)
            )
    return records


# ---------------------------------------------------------------------------
# Growth-model fitting


MODELS = ("linear", "quadratic", "power")


@dataclass(frozen=True, slots=True)
class FitResult:
    model: str
    coefficients: tuple  # (intercept, slope) in the model's coordinates
    r_squared: float
    residuals: tuple

    def __post_init__(self):
        if not -1e-9 <= self.r_squared <= 1 + 1e-9:
            raise ValidationError("r_squared outside [0, 1]")


def fit(records, model: str) -> FitResult:
    """Least squares in the model's natural coordinates: bits against the
    exponent, bits against its square, or log2(bits) against the exponent."""
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}")
    if len(records) < 4:
        raise ValidationError("need at least 4 records to fit")
    xs = np.array([r.eps_exp for r in records], dtype=float)
    bits = np.array([r.bits for r in records], dtype=float)
    if model == "linear":
        design = np.vstack([np.ones_like(xs), xs]).T
        ys = bits
    elif model == "quadratic":
        design = np.vstack([np.ones_like(xs), xs**2]).T
        ys = bits
    else:
        design = np.vstack([np.ones_like(xs), xs]).T
        ys = np.log2(bits)
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ValidationError("degenerate design matrix")
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    pred = design @ coef
    resid = ys - pred
    ss_res = float((resid**2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(model, tuple(float(c) for c in coef), r2, tuple(resid))


def fit_r_squared_full_quadratic(records) -> float:
    """R^2 of the nested quadratic (intercept + linear + square)."""
    xs = np.array([r.eps_exp for r in records], dtype=float)
    ys = np.array([r.bits for r in records], dtype=float)
    design = np.vstack([np.ones_like(xs), xs, xs**2]).T
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    return 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot


# ---------------------------------------------------------------------------
# Reports


CSV_HEADER = "ell,bits,dh_num,dh_den,codec,seed"


def records_to_csv(records) -> str:
    lines = [CSV_HEADER]
    for r in sorted(records, key=lambda r: (r.codec, r.seed, r.eps_exp)):
        lines.append(
            f"{r.eps_exp},{r.bits},{r.dh.numerator},{r.dh.denominator},"
            f"{r.codec},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def _svg_polyline(points, color: str, width: str = "1.5") -> str:
    coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in points)
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="{width}"'
        f' points="{coords}" />'
    )


def report(records, fits=(), csv_path=None, svg_path=None) -> list:
    """Write the sweep CSV and an optional log-scale SVG plot with one
    fitted polyline per model; byte-deterministic for fixed inputs."""
    if not records:
        raise ValidationError("nothing to report")
    written = []
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(records_to_csv(records))
        written.append(csv_path)
    if svg_path:
        with open(svg_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_svg(records, fits))
        written.append(svg_path)
    return written


def render_svg(records, fits=()) -> str:
    width, height, pad = 480.0, 320.0, 40.0
    xs = [r.eps_exp for r in records]
    ys = [math.log2(r.bits) for r in records]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def to_xy(x, y):
        px = pad + (x - x_lo) / x_span * (width - 2 * pad)
        py = height - pad - (y - y_lo) / y_span * (height - 2 * pad)
        return px, py

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}"'
        f' height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white" />',
        _svg_polyline([to_xy(x_lo, y_lo), to_xy(x_hi, y_lo)], "black", "1"),
        _svg_polyline([to_xy(x_lo, y_lo), to_xy(x_lo, y_hi)], "black", "1"),
    ]
    for x, y in zip(xs, ys):
        px, py = to_xy(x, y)
        parts.append(f'<circle cx="{px:.6f}" cy="{py:.6f}" r="2.5" fill="#1f4e8c" />')
    colors = {"linear": "#c0392b", "quadratic": "#27ae60", "power": "#8e44ad"}
    grid = [x_lo + i * x_span / 64 for i in range(65)]
    for f in fits:
        a, b = f.coefficients
        if f.model == "linear":
            pts = [(x, math.log2(max(a + b * x, 1e-9))) for x in grid]
        elif f.model == "quadratic":
            pts = [(x, math.log2(max(a + b * x * x, 1e-9))) for x in grid]
        else:
            pts = [(x, a + b * x) for x in grid]
        parts.append(
            _svg_polyline([to_xy(*pt) for pt in pts], colors[f.model])
        )
    parts.append(
        f'<text x="{width/2:.0f}" y="{height - 8:.0f}" font-size="12"'
        f' text-anchor="middle">precision exponent</text>'
    )
    parts.append(
        f'<text x="12" y="{pad - 12:.0f}" font-size="12">log2 bits</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

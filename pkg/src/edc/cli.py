"""Command-line entry points.

Subcommands: encode, decode, dist, dim, rand, ck, sweep, pack, fit.
Exit codes: 0 ok, 2 validation failure, 3 distance-contract failure,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from edc.bitstream import DescriptionError
from edc.ckscaling import CkCantor, ScalingParams, build_ck, packing_estimate
from edc.codecs import decode
from edc.dimension import box_count, estimate_dimension
from edc.experiments import (
    MODELS,
    SweepRecord,
    encode_for,
    fit,
    load_sweep_config,
    parse_input,
    report,
    sweep,
)
from edc.numeric import (
    BudgetError,
    ContractError,
    FinitePointSet,
    ValidationError,
    frac_str,
    hausdorff_finite,
)
from edc.randcantor import LambdaStream, build_central
from edc.rng import parse_distribution


def _read_points(path: str) -> FinitePointSet:
    with open(path, "r", encoding="utf-8") as fh:
        values = [Fraction(line.strip()) for line in fh if line.strip()]
    return FinitePointSet.from_points(values)


def _write_points(path: str, points: FinitePointSet) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in points.points:
            fh.write(f"{p.numerator}/{p.denominator}\n")


def _cmd_encode(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        obj = parse_input(json.load(fh))
    desc = encode_for(obj, args.codec, args.eps_exp)
    with open(args.out, "wb") as fh:
        fh.write(desc.blob)
    print(f"{args.out}: {desc.total_bits} accounted bits, {len(desc.blob)} bytes")
    return 0


def _cmd_decode(args) -> int:
    with open(args.file, "rb") as fh:
        blob = fh.read()
    points = decode(blob)
    _write_points(args.out, points)
    print(f"{args.out}: {len(points)} points")
    return 0


def _cmd_dist(args) -> int:
    a = _read_points(args.a)
    b = _read_points(args.b)
    print(frac_str(hausdorff_finite(a, b)))
    return 0


def _cmd_dim(args) -> int:
    points = _read_points(getattr(args, "in"))
    est = estimate_dimension(points, args.jmin, args.jmax)
    for j, c in zip(est.scales, est.counts):
        print(f"{j},{c}")
    print(f"slope,{est.slope:.6f}")
    return 0


def _cmd_rand(args) -> int:
    stream = LambdaStream(args.seed, parse_distribution(args.dist))
    levels = build_central(stream, args.depth)
    print("level,index,left,right")
    for k, level in enumerate(levels.levels):
        for i, (lo, hi) in enumerate(level, start=1):
            print(f"{k},{i},{frac_str(lo)},{frac_str(hi)}")
    return 0


def _cmd_ck(args) -> int:
    cantor = CkCantor(
        ScalingParams(
            Fraction(args.rho), Fraction(args.theta), Fraction(args.zeta),
            args.seed, parse_distribution(args.dist),
        )
    )
    ls = build_ck(cantor, args.depth)
    print("index,left,right")
    for i, (lo, hi) in enumerate(ls.intervals, start=1):
        print(f"{i},{frac_str(lo)},{frac_str(hi)}")
    return 0


def _cmd_pack(args) -> int:
    params = ScalingParams(
        Fraction(args.rho), Fraction(args.theta), Fraction(args.zeta),
        args.seed, parse_distribution(args.dist),
    )
    print("ell,log2_packing,size")
    for eps_exp in range(args.eps_exp_min, args.eps_exp_max + 1):
        res = packing_estimate(params, Fraction(1, 1 << eps_exp), args.trials)
        print(f"{eps_exp},{res.log2_size:.6f},{res.size}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_sweep_config(args.config)
    records = sweep(cfg)
    fits = []
    for model in args.fit or []:
        fits.append(fit(records, model))
    out_csv = args.out_csv or cfg.out_csv
    out_svg = args.out_svg or cfg.out_svg
    written = report(records, fits, out_csv, out_svg)
    for r in records:
        print(f"ell={r.eps_exp} bits={r.bits} dh={frac_str(r.dh)}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_fit(args) -> int:
    records = []
    with open(getattr(args, "in"), "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("ell,"):
            raise ValidationError("expected a sweep CSV with an 'ell,...' header")
        for line in fh:
            ell, bits, dh_num, dh_den, codec, seed = line.strip().split(",")
            records.append(
                SweepRecord(codec, int(seed), int(ell), int(bits),
                            Fraction(int(dh_num), int(dh_den)))
            )
    res = fit(records, args.model)
    print(f"model,{res.model}")
    for i, c in enumerate(res.coefficients):
        print(f"coefficient_{i},{c:.10g}")
    print(f"r_squared,{res.r_squared:.10f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edc",
        description="Cantor-set codecs with certified Hausdorff distortion",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode an input document")
    p.add_argument("--codec", required=True, choices=("poly", "analytic", "rand", "ck"))
    p.add_argument("--input", required=True, help="input JSON document")
    p.add_argument("--eps-exp", dest="eps_exp", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode a description to points")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("dist", help="Hausdorff distance between two point files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("dim", help="box-counting dimension of a point file")
    p.add_argument("--in", required=True)
    p.add_argument("--jmin", type=int, default=2)
    p.add_argument("--jmax", type=int, default=7)
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("rand", help="emit random central construction levels")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dist", default="uniform:2/5,3/5")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=_cmd_rand)

    p = sub.add_parser("ck", help="emit a scaling-function level set")
    p.add_argument("--rho", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--zeta", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dist", default="uniform:0,1")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=_cmd_ck)

    p = sub.add_parser("pack", help="packing-number estimates per precision")
    p.add_argument("--rho", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--zeta", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dist", default="uniform:0,1")
    p.add_argument("--eps-exp-min", dest="eps_exp_min", type=int, required=True)
    p.add_argument("--eps-exp-max", dest="eps_exp_max", type=int, required=True)
    p.add_argument("--trials", type=int, default=64)
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("sweep", help="run a configured precision sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--fit", action="append", choices=MODELS)
    p.add_argument("--out-csv", dest="out_csv")
    p.add_argument("--out-svg", dest="out_svg")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="fit a growth model to a sweep CSV")
    p.add_argument("--in", required=True)
    p.add_argument("--model", required=True, choices=MODELS)
    p.set_defaults(func=_cmd_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DescriptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"contract failure: {exc}", file=sys.stderr)
        return 3
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
lines as they complete.  The heavy sweeps run once in a session fixture and
are reused across criteria; the determinism criterion re-runs them from
scratch and compares output bytes.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from edc.ckscaling import (
    CkCantor,
    ScalingParams,
    build_ck,
    endpoint_arrays,
    measurement_depth,
    packing_estimate,
    sample_realizations,
)
from edc.dimension import estimate_dimension
from edc.experiments import (
    SweepConfig,
    fit,
    fit_r_squared_full_quadratic,
    load_sweep_config,
    records_to_csv,
    sweep,
)
from edc.ifs import level_set, middle_third
from edc.numeric import (
    FinitePointSet,
    HoleConfig,
    hausdorff_finite,
    separation_test,
)
from edc.numeric import _directed_gap  # oracle cross-checks use the fast path
from edc.rng import TAG_DERIVE, Uniform, draw_u64, unit_53bit

F = Fraction

ACCEPTANCE_CONFIG = "configs/acceptance.json"
EPS_RANGE = (8, 20)
CK_PARAMS = ScalingParams(F(1, 4), F(1, 2), F(1, 20), seed=7)


def _status(criterion: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


@pytest.fixture(scope="session")
def sweep_suite():
    """Both full runs of the acceptance sweep configuration."""
    with open(ACCEPTANCE_CONFIG, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    configs = {name: SweepConfig.from_json(c) for name, c in doc["sweeps"].items()}
    runs = []
    for _ in range(2):
        results = {}
        for name, cfg in configs.items():
            t0 = time.time()
            records = sweep(cfg)
            results[name] = (records, time.time() - t0)
        runs.append(results)
    return runs


class TestCriterion1RoundTrip:
    def test_round_trip_all_inputs(self, sweep_suite):
        per_codec: dict = {}
        total_records = 0
        for name, (records, elapsed) in sweep_suite[0].items():
            codec = records[0].codec
            per_codec[codec] = per_codec.get(codec, 0.0) + elapsed
            total_records += len(records)
            for r in records:
                assert r.dh < F(1, 1 << r.eps_exp)  # re-assert the contract
        expected = 5 * (EPS_RANGE[1] - EPS_RANGE[0] + 1)
        timing = ", ".join(f"{c}={t:.0f}s" for c, t in sorted(per_codec.items()))
        ok = total_records == expected and all(t <= 180 for t in per_codec.values())
        assert _status(
            "1 round-trip", ok,
            f"{total_records}/{expected} verified in exact arithmetic; {timing}"
        )


class TestCriterion2PolyLaw:
    def test_linear_growth(self, sweep_suite):
        ok = True
        details = []
        for name in ("poly_middle_third", "poly_quadratic"):
            records, _ = sweep_suite[0][name]
            res = fit(records, "linear")
            bits = [r.bits for r in sorted(records, key=lambda r: r.eps_exp)]
            d1 = [b - a for a, b in zip(bits, bits[1:])]
            d2 = max(abs(b - a) for a, b in zip(d1, d1[1:]))
            ok = ok and res.r_squared >= 0.99 and d2 <= 2
            details.append(f"{name}: R2={res.r_squared:.5f}, max|dd|={d2}")
        assert _status("2 poly law", ok, "; ".join(details))


class TestCriterion3QuadraticLaws:
    def test_quadratic_dominates(self, sweep_suite):
        ok = True
        details = []
        for name in ("analytic_series", "rand_central"):
            records, _ = sweep_suite[0][name]
            lin = fit(records, "linear").r_squared
            quad = fit_r_squared_full_quadratic(records)
            gap = quad - lin
            window = [r for r in records if 12 <= r.eps_exp <= 20]
            ratios = [r.bits / r.eps_exp**2 for r in window]
            variation = (max(ratios) - min(ratios)) / max(ratios)
            ok = ok and gap >= 0.02 and variation <= 0.20
            details.append(
                f"{name}: R2 gap={gap:.4f} (need >= 0.02),"
                f" bits/l^2 variation={variation:.3f} (need <= 0.20)"
            )
        assert _status("3 quadratic laws", ok, "; ".join(details))


class TestCriterion4CkLaw:
    def test_size_exponent_tracks_dimension(self, sweep_suite):
        records, _ = sweep_suite[0]["ck_scaling"]
        slope = fit(records, "power").coefficients[1]
        cantor = CkCantor(CK_PARAMS)
        est = estimate_dimension(build_ck(cantor, 14), 3, 10)
        k = float(F(3, 2))
        target = est.slope / k
        drift = _predicted_dimension_drift(CK_PARAMS)
        base = -math.log(2) / math.log(float(CK_PARAMS.rho))
        dim_ok = abs(est.slope - (base + drift)) <= 0.05
        slope_ok = abs(slope - target) <= 0.15
        ok = slope_ok and dim_ok
        assert _status(
            "4 smooth-family law", ok,
            f"log2(bits) slope={slope:.3f} vs D/k={target:.3f} (+-0.15);"
            f" D={est.slope:.3f} vs {base:.2f}+drift {drift:.3f} (+-0.05)"
        )


def _predicted_dimension_drift(params: ScalingParams, samples: int = 20000) -> float:
    """Drift of -log2/log(typical ratio) away from -log2/log(rho), with the
    typical ratio exp(E[log S]) sampled from the scaling distribution."""
    rho, theta, zeta = float(params.rho), float(params.theta), float(params.zeta)
    acc = 0.0
    terms = 30
    for i in range(samples):
        s = 0.0
        w = 1.0
        for q in range(terms):
            u = float(unit_53bit(draw_u64(0xD1F7, TAG_DERIVE, i, q)))
            s += w * u
            w *= theta
        acc += math.log(rho + zeta * s)
    mean_log = acc / samples
    return -math.log(2) / mean_log - (-math.log(2) / math.log(rho))


class TestCriterion5MetricSuite:
    def test_axioms_and_oracle(self):
        pairs = 10_000
        failures = 0
        seed = 0xFACE
        t0 = time.time()
        for i in range(pairs):
            a = _random_set(seed, 3 * i)
            b = _random_set(seed, 3 * i + 1)
            c = _random_set(seed, 3 * i + 2)
            dab = hausdorff_finite(a, b)
            if dab != _oracle(a, b):
                failures += 1
            if dab != hausdorff_finite(b, a):
                failures += 1
            if hausdorff_finite(a, a) != 0:
                failures += 1
            if dab == 0 and a != b:
                failures += 1
            if dab > hausdorff_finite(a, c) + hausdorff_finite(c, b):
                failures += 1
        ok = failures == 0
        assert _status(
            "5 metric suite", ok,
            f"{pairs} random triples, {failures} failures ({time.time()-t0:.0f}s)"
        )


def _random_set(seed: int, index: int) -> FinitePointSet:
    u = draw_u64(seed, TAG_DERIVE, index)
    size = 1 + (u & 63)
    nums = set()
    for k in range(size):
        nums.add(draw_u64(seed, TAG_DERIVE, index, k + 1) % 4097)
    return FinitePointSet.from_scaled(sorted(nums), 4096)


def _oracle(a: FinitePointSet, b: FinitePointSet) -> Fraction:
    an = [n * b.den for n in a.nums]
    bn = [n * a.den for n in b.nums]
    d1 = max(min(abs(x - y) for y in bn) for x in an)
    d2 = max(min(abs(x - y) for y in an) for x in bn)
    return F(max(d1, d2), a.den * b.den)


class TestCriterion6HoleCertificates:
    def test_certificates_confirmed_by_witnesses(self):
        trials = 1_000
        seed = 0xBEEF
        certified = 0
        false_certificates = 0
        den = 4096
        for i in range(trials):
            draws = [draw_u64(seed, TAG_DERIVE, i, k) for k in range(12)]
            a = draws[0] % 1024
            b = a + 1536 + draws[1] % (den - a - 1536)
            c = a + 1 + draws[2] % (b - a - 2)
            d = c + draws[3] % (b - c - 1)
            shift = lambda v, k: v + draws[k] % 257 - 128
            a2 = max(0, min(shift(a, 4), den))
            b2 = max(a2 + 1536, min(shift(b, 5), den))
            c2 = a2 + 1 + draws[6] % (b2 - a2 - 2)
            d2 = c2 + draws[7] % (b2 - c2 - 1)
            eps = F(1 + draws[8] % 256, den)
            f = HoleConfig((F(a, den), F(b, den)), (F(c, den), F(d, den)))
            g = HoleConfig((F(a2, den), F(b2, den)), (F(c2, den), F(d2, den)))
            if not separation_test(f, g, eps):
                continue
            certified += 1
            wit_f = _witness(f, draws[9], den)
            wit_g = _witness(g, draws[10], den)
            if hausdorff_finite(wit_f, wit_g) <= eps:
                false_certificates += 1
        ok = false_certificates == 0 and certified > 50
        assert _status(
            "6 hole-certificate soundness", ok,
            f"{certified} certificates out of {trials} pairs,"
            f" {false_certificates} false"
        )


def _witness(cfg: HoleConfig, seed_draw: int, den: int) -> FinitePointSet:
    (a, b), (c, d) = cfg.outer, cfg.hole
    pts = {a, b, c, d}
    for k in range(16):
        u = draw_u64(seed_draw, TAG_DERIVE, k)
        x = F(u % (den + 1), den)
        if a <= x <= b and not (c < x < d):
            pts.add(x)
    return FinitePointSet.from_points(sorted(pts))


class TestCriterion7PackingLowerBound:
    def test_packing_growth_and_certificates(self):
        t0 = time.time()
        trials = 512
        params = CK_PARAMS
        cantors = sample_realizations(params, trials)
        log2_sizes = []
        confirmed = 0
        cert_failures = 0
        for eps_exp in range(6, 13):
            eps = F(1, 1 << eps_exp)
            res = packing_estimate(params, eps, trials, cantors=cantors)
            log2_sizes.append((eps_exp, res.log2_size))
            if res.certified_pairs:
                depth = measurement_depth(params, eps)
                arrays, den = endpoint_arrays(cantors, depth)
                for i, j in res.certified_pairs:
                    gap = max(
                        _directed_gap(arrays[i], arrays[j]),
                        _directed_gap(arrays[j], arrays[i]),
                    )
                    if F(gap, den) > eps:
                        confirmed += 1
                    else:
                        cert_failures += 1
        xs = [math.log(e) for e, y in log2_sizes if y > 0]
        ys = [math.log(y) for e, y in log2_sizes if y > 0]
        slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 3 else 0.0
        elapsed = time.time() - t0
        ok = slope >= 1.3 and cert_failures == 0 and elapsed <= 750
        assert _status(
            "7 packing lower bound", ok,
            f"log-log exponent={slope:.2f} (need >= 1.3);"
            f" {confirmed} certificates confirmed, {cert_failures} failed;"
            f" sizes={[y for _, y in log2_sizes]}; {elapsed:.0f}s"
        )


class TestCriterion8Dimension:
    def test_middle_third_estimate(self):
        est = estimate_dimension(level_set(middle_third(), 12), 2, 7)
        target = math.log(2) / math.log(3)
        ok = abs(est.slope - target) <= 0.03
        assert _status(
            "8 dimension", ok,
            f"slope={est.slope:.4f} vs log2/log3={target:.4f},"
            f" |diff|={abs(est.slope - target):.4f} (need <= 0.03)"
        )


class TestCriterion9Determinism:
    def test_two_runs_byte_identical(self, sweep_suite):
        run1, run2 = sweep_suite
        identical = True
        for name in run1:
            csv1 = records_to_csv(run1[name][0])
            csv2 = records_to_csv(run2[name][0])
            if csv1.encode() != csv2.encode():
                identical = False
        assert _status(
            "9 determinism", identical,
            f"{len(run1)} sweep CSV outputs byte-compared across two full runs"
        )

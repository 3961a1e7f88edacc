from fractions import Fraction

import pytest

from edc.bitstream import DescriptionError
from edc.ckscaling import CkCantor, ScalingParams
from edc.codecs import (
    analytic_parameters,
    decode,
    decode_rand_stream,
    encode_analytic,
    encode_ck,
    encode_poly,
    encode_rand_central,
    rand_depth,
    reference_intervals,
)
from edc.ifs import (
    AffineMap,
    IfsSpec,
    depth_for,
    geometric_series_pair,
    middle_third,
    quadratic_pair,
)
from edc.numeric import (
    FinitePointSet,
    ValidationError,
    hausdorff_finite,
    hausdorff_vs_intervals,
)
from edc.randcantor import LambdaStream
from edc.rng import Uniform

F = Fraction

MT = middle_third()
QP = quadratic_pair()
GS = geometric_series_pair()
STREAM = LambdaStream(20260809, Uniform(F(2, 5), F(3, 5)))
CKSET = CkCantor(ScalingParams(F(1, 4), F(1, 2), F(1, 20), seed=7))


def round_trip_ok(obj, encode, eps_exp):
    desc = encode(obj, eps_exp)
    pts = decode(desc)
    eps = F(1, 1 << eps_exp)
    ref = reference_intervals(obj, eps / 4)
    return hausdorff_vs_intervals(pts, ref) < eps


class TestPolyCodec:
    def test_middle_third_constant(self):
        # K = 1 + (N+1)/(1-rho) with N = 1, rho = 1/3
        big_k = 1 + F(2) / (1 - MT.rho)
        assert big_k == 4

    def test_round_trip_contract(self):
        for eps_exp in (6, 8, 10):
            assert round_trip_ok(MT, encode_poly, eps_exp)
        assert round_trip_ok(QP, encode_poly, 9)

    def test_bits_increment_is_constant(self):
        bits = [encode_poly(MT, l).total_bits for l in range(8, 21)]
        diffs = {b2 - b1 for b1, b2 in zip(bits, bits[1:])}
        assert len(diffs) == 1  # one extra bit per coefficient per level

    def test_deterministic_blobs(self):
        a = encode_poly(MT, 9)
        b = encode_poly(MT, 9)
        assert a.blob == b.blob
        assert decode(a) == decode(b)

    def test_fragile_input_rejected(self):
        tight = IfsSpec(
            (
                AffineMap(F(1, 2) - F(1, 2**30), F(0)),
                AffineMap(F(1, 2) - F(1, 2**30), F(1, 2) + F(1, 2**30)),
            ),
            F(1, 2),
        )
        with pytest.raises(ValidationError, match="fragile|validation"):
            encode_poly(tight, 4)

    def test_series_maps_rejected(self):
        with pytest.raises(ValidationError, match="polynomial"):
            encode_poly(GS, 8)


class TestAnalyticCodec:
    def test_delta_admissible(self):
        params = analytic_parameters(GS, 10)
        assert params["delta"] == F(3, 4)
        assert params["delta"] * params["radius"] > 1

    def test_truncation_degree_by_oracle(self):
        # brute-force the smallest N with delta^N/(1-delta) < (1-rho) eps/(4r)
        delta, rho, r = F(3, 4), F(1, 3), F(1)
        eps = F(1, 2**10)
        n = 0
        acc = F(1)
        while acc / (1 - delta) >= (1 - rho) * eps / (4 * r):
            acc *= delta
            n += 1
        assert n == 36
        ifs = IfsSpec(GS.maps, F(1, 3))
        assert analytic_parameters(ifs, 10)["trunc_degree"] == 36

    def test_round_trip_contract(self):
        for eps_exp in (8, 10):
            assert round_trip_ok(GS, encode_analytic, eps_exp)

    def test_radius_must_exceed_one(self):
        with pytest.raises(ValidationError):
            analytic_parameters(MT, 8)

    def test_deterministic_blobs(self):
        assert encode_analytic(GS, 9).blob == encode_analytic(GS, 9).blob


class TestRandCodec:
    def test_depth_formula(self):
        assert rand_depth(4) == 6  # smallest n with 2**-n < eps/2

    def test_constant_half_level_lengths(self):
        levels = reference_intervals([F(1, 2)] * 8, F(1, 17))
        lengths = {hi - lo for lo, hi in levels}
        assert len(lengths) == 1

    def test_round_trip_contract(self):
        for eps_exp in (6, 8, 10):
            assert round_trip_ok(STREAM, encode_rand_central, eps_exp)

    def test_stream_equals_materialized(self):
        desc = encode_rand_central(STREAM, 8)
        gen, den = decode_rand_stream(desc)
        assert FinitePointSet.from_scaled(list(gen), den) == decode(desc)

    def test_coarse_levels_carry_zero_bits(self):
        # the deepest level's allowed error reaches 1 and stores nothing;
        # halving eps adds one bit to each stored level plus a fresh 2-bit
        # level, so the increment is (depth - 1) + 2
        b4 = encode_rand_central(STREAM, 4).total_bits
        b5 = encode_rand_central(STREAM, 5).total_bits
        assert b5 - b4 == (rand_depth(4) - 1) + 2

    def test_decoded_point_count(self):
        desc = encode_rand_central(STREAM, 6)
        assert len(decode(desc)) == 2 ** (rand_depth(6) + 1)

    def test_lambda_range_enforced(self):
        with pytest.raises(ValidationError):
            encode_rand_central([F(1, 2)] * 5 + [F(3, 2)] * 20, 6)


class TestCkCodec:
    def test_round_trip_contract(self):
        for eps_exp in (8, 10, 12):
            assert round_trip_ok(CKSET, encode_ck, eps_exp)

    def test_affine_special_case_matches_poly(self):
        eps_exp = 8
        eps = F(1, 1 << eps_exp)
        via_ck = decode(encode_ck(MT, eps_exp))
        via_poly = decode(encode_poly(MT, eps_exp))
        assert hausdorff_finite(via_ck, via_poly) < 2 * eps

    def test_deterministic_blobs(self):
        assert encode_ck(CKSET, 9).blob == encode_ck(CKSET, 9).blob

    def test_decoded_structure(self):
        desc = encode_ck(CKSET, 8)
        pts = decode(desc)
        assert len(pts) <= 2 ** (depth_for(CKSET.params.rate_split, F(1, 1 << 10)) + 1)
        assert pts.points[0] == 0 and pts.points[-1] == 1


class TestDecodeDispatch:
    def test_bad_magic(self):
        desc = encode_poly(MT, 8)
        with pytest.raises(DescriptionError, match="bad magic"):
            decode(b"AAAA" + desc.blob[4:])

    def test_truncated(self):
        desc = encode_poly(MT, 8)
        with pytest.raises(DescriptionError):
            decode(desc.blob[:10])

    def test_double_decode_bit_identical(self):
        desc = encode_rand_central(STREAM, 7)
        assert decode(desc) == decode(desc)

    def test_wrong_stream_codec(self):
        with pytest.raises(DescriptionError, match="random-central"):
            decode_rand_stream(encode_poly(MT, 8))


class TestMonotoneCost:
    def test_poly_analytic_rand_monotone(self):
        for obj, enc in ((MT, encode_poly), (GS, encode_analytic), (STREAM, encode_rand_central)):
            bits = [enc(obj, l).total_bits for l in range(6, 16)]
            assert bits == sorted(bits)

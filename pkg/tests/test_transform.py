import random

import pytest

from nlts.core import DIFF, MODE, NonzeroMask, QuantizedBlock, TransformedBlock
from nlts.errors import BadFlag, EmptyBlock, LengthMismatch
from nlts.transform import (
    ModeStat,
    TransformConfig,
    compute_mode,
    detect_branch_v2,
    diff_decode,
    diff_encode,
    inverse_transform,
    parse_block,
    serialize_block,
    transform_block,
)

PAPER_DEVIATIONS = [10, -2, 0, 0, 0, -1, 2, 3, 0, 1, 0, 0, 3, 4, 0, 1]
PAPER_NONZEROS = (10, -2, -1, 2, 3, 1, 3, 4, 1)


def roundtrip(codes, cfg):
    tb = transform_block(QuantizedBlock(codes=tuple(codes), scale_exp=0), cfg)
    back = inverse_transform(tb, cfg)
    assert back.codes == tuple(codes), (codes, tb)
    # and through the wire layout
    buf = bytearray()
    serialize_block(tb, buf)
    parsed, pos = parse_block(bytes(buf), 0, cfg.method_version, len(codes))
    assert pos == len(buf)
    back2 = inverse_transform(parsed, cfg)
    assert back2.codes == tuple(codes)
    return tb


class TestComputeMode:
    def test_unique_mode(self):
        assert compute_mode([5, 5, 5, 2, 1]) == ModeStat(5, 3)

    def test_tie_breaks_to_smallest(self):
        assert compute_mode([1, 1, 2, 2]) == ModeStat(1, 2)
        assert compute_mode([2, 2, -3, -3]) == ModeStat(-3, 2)

    def test_singleton(self):
        assert compute_mode([9]) == ModeStat(9, 1)

    def test_empty(self):
        with pytest.raises(EmptyBlock):
            compute_mode([])


class TestDiffCoding:
    @pytest.mark.parametrize(
        "codes,diffs",
        [
            ([3, 5, 4], [3, 2, -1]),
            ([7, 7, 7], [7, 0, 0]),
            ([0, -4, 6], [0, -4, 10]),
        ],
    )
    def test_known(self, codes, diffs):
        assert diff_encode(codes) == diffs
        assert diff_decode(diffs) == codes

    def test_empty(self):
        with pytest.raises(EmptyBlock):
            diff_encode([])
        with pytest.raises(EmptyBlock):
            diff_decode([])


class TestTransformVersion1:
    def test_paper_block_layout(self):
        # The threshold must let the mode branch fire (mode frequency is 7
        # here); the published worked example shows this exact symbol order.
        mod = 1290
        codes = [mod + d for d in PAPER_DEVIATIONS]
        cfg = TransformConfig(method_version=1, block_len=16, tau=7)
        tb = roundtrip(codes, cfg)
        assert tb.branch == MODE
        assert tb.header_values == (1, mod)
        assert tb.mask.value == 51021
        assert tb.payload == PAPER_NONZEROS
        # symbol order on the wire: flag, mode, mask, nonzero values
        assert tb.header_values + (tb.mask.value,) + tb.payload == (
            1, mod, 51021, 10, -2, -1, 2, 3, 1, 3, 4, 1,
        )

    def test_diff_branch_when_mode_rare(self):
        codes = [3, 5, 4, 1] * 4
        cfg = TransformConfig(method_version=1, block_len=16, tau=9)
        tb = roundtrip(codes, cfg)
        assert tb.branch == DIFF
        assert tb.header_values == (0,)
        assert tb.mask is None
        assert tb.payload == tuple(diff_encode(codes))

    def test_threshold_equality_selects_mode(self):
        codes = [5] * 9 + [1, 2, 3, 4, 6, 7, 8]
        cfg = TransformConfig(method_version=1, block_len=16, tau=9)
        assert roundtrip(codes, cfg).branch == MODE

    def test_inverse_diff_example(self):
        cfg = TransformConfig(method_version=1, block_len=16, tau=9)
        tb = TransformedBlock(1, DIFF, (0,), None, (3, 2, -1), 3)
        assert inverse_transform(tb, cfg).codes == (3, 5, 4)

    def test_inverse_constant_block(self):
        cfg = TransformConfig(method_version=1, block_len=16, tau=9)
        tb = TransformedBlock(1, MODE, (1, 42), NonzeroMask(0, 16), (), 16)
        assert inverse_transform(tb, cfg).codes == (42,) * 16

    def test_bad_flag(self):
        cfg = TransformConfig(method_version=1, block_len=16, tau=9)
        tb = TransformedBlock(1, MODE, (2, 42), NonzeroMask(0, 16), (), 16)
        with pytest.raises(BadFlag):
            inverse_transform(tb, cfg)
        # and at the wire level: zigzag(2) = 4
        with pytest.raises(BadFlag):
            parse_block(bytes([4]), 0, 1, 16)


class TestTransformVersion2:
    def test_mode_example(self):
        cfg = TransformConfig(method_version=2, block_len=16, tau=3)
        tb = transform_block(QuantizedBlock(codes=(7, 7, 7, 9), scale_exp=0), cfg)
        assert tb.branch == MODE
        assert tb.header_values == (7,)
        assert tb.mask.value == 0b0001 and tb.mask.width == 4
        assert tb.payload == (2,)
        assert inverse_transform(tb, cfg).codes == (7, 7, 7, 9)

    def test_diff_example(self):
        cfg = TransformConfig(method_version=2, block_len=16, tau=4)
        tb = transform_block(QuantizedBlock(codes=(3, 5, 4, 4), scale_exp=0), cfg)
        assert tb.branch == DIFF
        assert tb.header_values == (3,)
        assert tb.mask.value == 0b1110
        assert tb.payload == (3, 2, -1)
        assert inverse_transform(tb, cfg).codes == (3, 5, 4, 4)

    def test_detect_examples(self):
        assert detect_branch_v2(3, NonzeroMask(0b1110, 4), [3, 2, -1]) == DIFF
        assert detect_branch_v2(7, NonzeroMask(0b0001, 4), [2]) == MODE
        assert detect_branch_v2(5, NonzeroMask(0, 4), []) == MODE

    def test_fallback_diff_block_with_leading_zero(self):
        # x1 == 0 would decode as mode, so the encoder must emit mode
        codes = [0, 4, 9, 1, 7, 2, 8, 3, 6, 5, 11, 13, 17, 19, 23, 29]
        cfg = TransformConfig(method_version=2, block_len=16, tau=9)
        tb = roundtrip(codes, cfg)
        assert tb.branch == MODE
        assert detect_branch_v2(tb.header_values[0], tb.mask, tb.payload) == MODE

    def test_fallback_mode_block_colliding_with_header(self):
        # first deviation equals the mode (x1 = 2 * mode): mode encoding
        # would read back as diff, so the encoder must emit diff
        codes = [10] + [5] * 15
        cfg = TransformConfig(method_version=2, block_len=16, tau=9)
        tb = roundtrip(codes, cfg)
        assert tb.branch == DIFF
        assert detect_branch_v2(tb.header_values[0], tb.mask, tb.payload) == DIFF

    def test_constant_block_decodes_as_mode(self):
        cfg = TransformConfig(method_version=2, block_len=16, tau=9)
        tb = roundtrip([6] * 16, cfg)
        assert tb.branch == MODE
        assert tb.mask.popcount() == 0 and tb.payload == ()


class TestRoundTripProperties:
    CASES = 4000

    @pytest.mark.parametrize("version", [1, 2])
    def test_random_blocks(self, version):
        rng = random.Random(600 + version)
        for _ in range(self.CASES):
            L = rng.choice([16, 32, 64])
            tau = rng.randrange(1, L + 1)
            width = L if rng.random() < 0.7 else rng.randrange(1, L + 1)
            style = rng.random()
            if style < 0.4:  # mode-friendly: tiny alphabet
                codes = rng.choices(range(-3, 4), k=width)
            elif style < 0.7:  # trending: random walk
                codes = []
                v = rng.randrange(-100, 100)
                for _ in range(width):
                    v += rng.randrange(-5, 6)
                    codes.append(v)
            else:  # wild
                codes = [rng.randrange(-(2**31), 2**31) for _ in range(width)]
            cfg = TransformConfig(method_version=version, block_len=L, tau=tau)
            roundtrip(codes, cfg)

    def test_payload_matches_mask_popcount(self):
        rng = random.Random(602)
        for _ in range(1000):
            codes = rng.choices(range(-2, 3), k=16)
            for version in (1, 2):
                cfg = TransformConfig(method_version=version, block_len=16, tau=8)
                tb = transform_block(QuantizedBlock(codes=tuple(codes), scale_exp=0), cfg)
                if tb.mask is not None:
                    assert len(tb.payload) == tb.mask.popcount()

    def test_mode_branch_symbol_budget(self):
        # mode-branch blocks spend header (1 or 2 symbols) + mask + payload
        rng = random.Random(603)
        for _ in range(500):
            codes = rng.choices(range(-1, 2), k=16)
            for version, header_syms in ((1, 2), (2, 1)):
                cfg = TransformConfig(method_version=version, block_len=16, tau=4)
                tb = transform_block(QuantizedBlock(codes=tuple(codes), scale_exp=0), cfg)
                if tb.branch == MODE:
                    n_symbols = header_syms + 1 + len(tb.payload)
                    assert n_symbols <= 16 + 3

    def test_wide_block_mask_beyond_64_bits(self):
        rng = random.Random(604)
        cfg = TransformConfig(method_version=2, block_len=128, tau=20)
        codes = rng.choices(range(-2, 3), k=128)
        tb = roundtrip(codes, cfg)
        assert tb.mask.width == 128

    def test_length_mismatch(self):
        cfg = TransformConfig(method_version=2, block_len=16, tau=9)
        with pytest.raises(LengthMismatch):
            transform_block(QuantizedBlock(codes=(1,) * 17, scale_exp=0), cfg)


class TestResolvability:
    # at least one v2 branch is always classified correctly, including the
    # adversarial block shapes, and the encoder's fallback settles on it
    def test_adversarial_and_random(self):
        rng = random.Random(610)
        cfg = TransformConfig(method_version=2, block_len=16, tau=9)
        for trial in range(20_000):
            kind = trial % 4
            if kind == 0:
                codes = [0] + rng.choices(range(-5, 6), k=15)  # x1 = 0
            elif kind == 1:
                m = rng.randrange(1, 50)
                codes = [2 * m] + [m] * rng.randrange(8, 15)  # x1 = 2 * mode
                codes += rng.choices(range(-5, 6), k=16 - len(codes))
            elif kind == 2:
                codes = [0] * 16  # all zero
            else:
                codes = rng.choices(range(-4, 5), k=16)
            tb = transform_block(QuantizedBlock(codes=tuple(codes), scale_exp=0), cfg)
            assert detect_branch_v2(tb.header_values[0], tb.mask, tb.payload) == tb.branch
            assert inverse_transform(tb, cfg).codes == tuple(codes)


class TestConfigValidation:
    def test_block_len_power_of_two(self):
        for bad in (8, 12, 17, 0, 1 << 16):
            with pytest.raises(ValueError):
                TransformConfig(method_version=2, block_len=bad, tau=1)

    def test_tau_range(self):
        with pytest.raises(ValueError):
            TransformConfig(method_version=2, block_len=16, tau=0)
        with pytest.raises(ValueError):
            TransformConfig(method_version=2, block_len=16, tau=17)

    def test_method_version(self):
        with pytest.raises(ValueError):
            TransformConfig(method_version=3, block_len=16, tau=9)

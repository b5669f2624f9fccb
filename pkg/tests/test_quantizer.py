import random
from decimal import ROUND_HALF_UP, Context, Decimal
from fractions import Fraction

import pytest

from nlts.core import SignalBlock
from nlts.errors import NonFiniteSample, OverflowAtScale, TooManyDigits
from nlts.quantizer import (
    QuantizerConfig,
    code_value,
    dequantize_block,
    detect_digits,
    fractional_digits,
    quantize_block,
    quantize_stream,
    render_code,
    scaled_code,
)


class TestScaledCode:
    def test_paper_example(self):
        assert scaled_code(124.3472, 2) == 12435  # reads back as 124.35
        assert scaled_code("124.3472", 2) == 12435

    def test_zero(self):
        for d in range(7):
            assert scaled_code(0.0, d) == 0

    def test_half_away_from_zero(self):
        assert scaled_code(-1.25, 1) == -13
        assert scaled_code("-1.25", 1) == -13
        assert scaled_code("1.25", 1) == 13
        assert scaled_code("2.5", 0) == 3
        assert scaled_code("-2.5", 0) == -3

    def test_non_finite(self):
        for bad in (float("nan"), float("inf"), -float("inf")):
            with pytest.raises(NonFiniteSample):
                scaled_code(bad, 3)
        with pytest.raises(NonFiniteSample):
            scaled_code("nan", 3)
        with pytest.raises(NonFiniteSample):
            scaled_code("not-a-number", 3)

    def test_overflow_at_scale(self):
        with pytest.raises(OverflowAtScale):
            scaled_code(1e19, 1)
        with pytest.raises(OverflowAtScale):
            scaled_code("9223372036854775808", 0)
        assert scaled_code("9223372036854775807", 0) == 2**63 - 1


class TestRendering:
    @pytest.mark.parametrize(
        "code,d,text",
        [
            (12435, 2, "124.35"),
            (0, 3, "0.000"),
            (-13, 1, "-1.3"),
            (5, 0, "5"),
            (-5, None, "-5"),
            (7, 3, "0.007"),
            (-7, 3, "-0.007"),
        ],
    )
    def test_render(self, code, d, text):
        assert render_code(code, d) == text

    def test_code_value(self):
        assert code_value(12435, 2) == 124.35
        assert code_value(-13, 1) == -1.3
        assert code_value(42, None) == 42.0

    def test_dequantize_block(self):
        from nlts.core import QuantizedBlock

        sb = dequantize_block(QuantizedBlock(codes=(12435, 0, -13), scale_exp=2))
        assert sb.samples == (124.35, 0.0, -0.13)


class TestErrorBound:
    # |decoded - x| <= 0.5 * 10^-d, exact in rational arithmetic
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_random_floats_within_half_ulp(self, d):
        rng = random.Random(500 + d)
        bound = Fraction(1, 2 * 10**d)
        n = 100_000
        for _ in range(n):
            x = rng.uniform(-1000, 1000)
            code = scaled_code(x, d)
            err = abs(Fraction(code, 10**d) - Fraction(x))
            assert err <= bound, (x, code)

    def test_idempotent(self):
        rng = random.Random(505)
        for d in (0, 1, 2, 3):
            for _ in range(2000):
                x = rng.uniform(-50, 50)
                code = scaled_code(x, d)
                again = scaled_code(code_value(code, d), d)
                assert again == code

    def test_ties_match_decimal_oracle(self):
        # exact-representable halves where the tie rule decides the code
        cases = [0.5, -0.5, 1.5, -1.5, 0.25, -0.25, 2.75, -2.75]
        for x in cases:
            got = scaled_code(x, 1)
            want = int(
                Decimal(x).scaleb(1, Context(prec=60)).to_integral_value(ROUND_HALF_UP)
            )
            assert got == want, x


class TestStreamQuantization:
    def test_fast_path_matches_decimal_oracle(self):
        rng = random.Random(510)
        tokens = []
        for _ in range(4000):
            whole = rng.randrange(0, 10 ** rng.randrange(1, 7))
            frac_len = rng.randrange(0, 8)
            frac = "".join(rng.choice("0123456789") for _ in range(frac_len))
            tok = f"{whole}.{frac}" if frac_len else str(whole)
            if rng.random() < 0.5:
                tok = "-" + tok
            if rng.random() < 0.1:
                tok = "+" + tok if not tok.startswith("-") else tok
            tokens.append(tok)
        tokens += ["5.", ".5", "-.5", "0.0005", "00123.4500", "1e-3", "1.25E+2"]
        for d in (0, 1, 3, 6):
            codes, max_err = quantize_stream(tokens, d)
            ctx = Context(prec=200)
            oracle = [
                int(Decimal(t).scaleb(d, ctx).to_integral_value(ROUND_HALF_UP))
                for t in tokens
            ]
            assert codes == oracle, d
            worst = max(
                abs(Decimal(t).scaleb(d, ctx) - c) for t, c in zip(tokens, codes)
            )
            assert max_err == worst.scaleb(-d, ctx)

    def test_lossless_is_exact(self):
        tokens = ["1.5", "2.25", "-3.125", "7", "0.5"]
        d = detect_digits(tokens)
        assert d == 3
        codes, max_err = quantize_stream(tokens, d)
        assert codes == [1500, 2250, -3125, 7000, 500]
        assert max_err == 0

    def test_int_samples(self):
        codes, err = quantize_stream([5, -3, 1000], 2)
        assert codes == [500, -300, 100000] and err == 0


class TestDigitDetection:
    def test_token_digits_counted_as_written(self):
        assert fractional_digits("1.500") == 3
        assert fractional_digits("1.5") == 1
        assert fractional_digits("7") == 0
        assert fractional_digits("1e-3") == 3
        assert fractional_digits("1.5E+2") == 0  # 150

    def test_float_digits_use_shortest_repr(self):
        assert fractional_digits(0.1) == 1
        assert fractional_digits(1500.0) == 0
        assert fractional_digits(-0.125) == 3
        assert fractional_digits(3) == 0

    def test_detect_digits_stream(self):
        assert detect_digits(["1.5", "2.25", "7"]) == 2
        assert detect_digits([1, 2, 3]) == 0

    def test_too_many_digits(self):
        with pytest.raises(TooManyDigits):
            detect_digits(["0.1234567"])
        with pytest.raises(TooManyDigits):
            detect_digits([1 / 3])


class TestBlockOps:
    def test_quantize_block_rounding(self):
        qb = quantize_block(
            SignalBlock(samples=(124.3472, 0.0, -1.25)),
            QuantizerConfig(mode="rounding", decimal_digits=2),
        )
        assert qb.codes == (12435, 0, -125)
        assert qb.scale_exp == 2

    def test_quantize_block_lossless_detects_scale(self):
        qb = quantize_block(
            SignalBlock(samples=("1.5", "2.25")), QuantizerConfig.lossless()
        )
        assert qb.codes == (150, 225)
        assert qb.scale_exp == 2

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuantizerConfig(mode="rounding", decimal_digits=7)
        with pytest.raises(ValueError):
            QuantizerConfig(mode="weird")

"""Scaled-integer quantization of real samples under a max-absolute-error bound.

Samples become signed integers code = round(value * 10**d) with ties away
from zero, so every reconstruction code / 10**d sits within 0.5 * 10**-d of
the input -- strictly tighter than the advertised bound of 10**-d.

All arithmetic runs through decimal.Decimal: text tokens are parsed digit
for digit (never through binary floating point), and float inputs are
converted exactly, which keeps the rounding decision deterministic across
platforms.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from decimal import Decimal

from .core import INT64_MAX, INT64_MIN, QuantizedBlock, SignalBlock
from .errors import NonFiniteSample, OverflowAtScale, TooManyDigits

ROUNDING = "rounding"
LOSSLESS = "lossless"

MAX_DIGITS = 6

# Exact decimal expansion of any double needs < 800 digits; a precision this
# large makes scaleb/to_integral exact for every input we accept.
_CTX = decimal.Context(prec=1000, rounding=decimal.ROUND_HALF_UP)

#: Header byte marking integer passthrough (lossless stream with no
#: fractional digits); ordinary streams carry their digit count 0..6.
SCALE_PASSTHROUGH = 255


@dataclass(frozen=True)
class QuantizerConfig:
    mode: str = ROUNDING
    decimal_digits: int = 3

    def __post_init__(self):
        if self.mode not in (ROUNDING, LOSSLESS):
            raise ValueError(f"unknown quantizer mode {self.mode!r}")
        if self.mode == ROUNDING and not 0 <= self.decimal_digits <= MAX_DIGITS:
            raise ValueError(
                f"decimal_digits must be 0..{MAX_DIGITS}, got {self.decimal_digits}"
            )

    @classmethod
    def lossless(cls) -> "QuantizerConfig":
        return cls(mode=LOSSLESS, decimal_digits=0)


def _to_decimal(value, index: int) -> Decimal:
    """Exact Decimal for a sample; floats convert at their binary value."""
    if isinstance(value, Decimal):
        d = value
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise NonFiniteSample(index, value)
        d = Decimal(value)
    elif isinstance(value, int):
        d = Decimal(value)
    else:
        try:
            d = Decimal(str(value).strip())
        except decimal.InvalidOperation:
            raise NonFiniteSample(index, value) from None
    if not d.is_finite():
        raise NonFiniteSample(index, value)
    return d


def scaled_code(value, digits: int, index: int = 0) -> int:
    """Quantize one sample: round(value * 10**digits), ties away from zero."""
    d = _to_decimal(value, index)
    scaled = d.scaleb(digits, context=_CTX)
    code = int(scaled.to_integral_value(rounding=decimal.ROUND_HALF_UP))
    if not INT64_MIN <= code <= INT64_MAX:
        raise OverflowAtScale(index, value, digits)
    return code


def fractional_digits(value, index: int = 0) -> int:
    """Number of fractional digits a sample carries.

    Text tokens are counted as written ("1.500" has three); floats count the
    digits of their shortest round-trip representation.
    """
    if isinstance(value, float):
        if not math.isfinite(value):
            raise NonFiniteSample(index, value)
        dec = Decimal(repr(value)).normalize(context=_CTX)
    elif isinstance(value, int):
        return 0
    else:
        dec = _to_decimal(value, index)
    exp = dec.as_tuple().exponent
    return max(0, -exp)


def detect_digits(samples) -> int:
    """Scan a stream and return the scale lossless mode needs."""
    worst = 0
    for i, v in enumerate(samples):
        n = fractional_digits(v, i)
        if n > worst:
            worst = n
            if worst > MAX_DIGITS:
                raise TooManyDigits(
                    f"sample at index {i} carries {n} fractional digits; "
                    f"lossless mode supports at most {MAX_DIGITS}"
                )
    return worst


def _slow_sample_code(v, digits: int, index: int):
    """Decimal-exact quantization of one sample; returns (code, scaled error)."""
    d = _to_decimal(v, index)
    scaled = d.scaleb(digits, context=_CTX)
    q = scaled.to_integral_value(rounding=decimal.ROUND_HALF_UP)
    code = int(q)
    err = scaled - q
    return code, -err if err < 0 else err


def quantize_stream(samples, digits: int):
    """Quantize a whole stream at a fixed scale.

    Returns (codes, max_abs_error) with the error measured exactly in the
    decimal domain; lossless inputs therefore report exactly 0.

    Plain decimal tokens take a string-arithmetic fast path that reproduces
    the Decimal rounding exactly; anything else (floats, exponents, unusual
    spellings) falls back to Decimal.
    """
    codes = []
    append = codes.append
    # running maxima: fast-path errors as a fraction, slow-path as Decimal
    max_num = 0
    max_den = 1
    max_dec = Decimal(0)
    scale = 10 ** digits

    for i, tok in enumerate(samples):
        if type(tok) is str and tok.isascii():
            s = tok
            neg = False
            c0 = s[0] if s else ""
            if c0 == "-" or c0 == "+":
                neg = c0 == "-"
                s = s[1:]
            ip, dot, fp = s.partition(".")
            if (ip.isdigit() or not ip) and (fp.isdigit() or (not fp and ip)):
                flen = len(fp)
                if flen <= digits:
                    code = int(ip + fp) * 10 ** (digits - flen)
                else:
                    head = int((ip + fp[:digits]) or "0")
                    tail = fp[digits:]
                    rem = int(tail)
                    den = 10 ** len(tail)
                    if 2 * rem >= den:
                        head += 1
                        num = den - rem
                    else:
                        num = rem
                    if num * max_den > max_num * den:
                        max_num = num
                        max_den = den
                    code = head
                if neg:
                    code = -code
                if not INT64_MIN <= code <= INT64_MAX:
                    raise OverflowAtScale(i, tok, digits)
                append(code)
                continue
        code, err = _slow_sample_code(tok, digits, i)
        if not INT64_MIN <= code <= INT64_MAX:
            raise OverflowAtScale(i, tok, digits)
        if err > max_dec:
            max_dec = err
        append(code)

    frac_err = _CTX.divide(Decimal(max_num), Decimal(max_den))
    worst = frac_err if frac_err > max_dec else max_dec
    return codes, worst.scaleb(-digits, context=_CTX)


def quantize_block(block: SignalBlock, cfg: QuantizerConfig) -> QuantizedBlock:
    """Quantize one block; lossless mode detects its scale from the block."""
    if cfg.mode == LOSSLESS:
        digits = detect_digits(block.samples)
    else:
        digits = cfg.decimal_digits
    codes = tuple(scaled_code(v, digits, i) for i, v in enumerate(block.samples))
    return QuantizedBlock(codes=codes, scale_exp=digits)


def dequantize_block(block: QuantizedBlock) -> SignalBlock:
    """Reconstruct real samples; exact text comes from render_code instead."""
    d = block.scale_exp
    if d is None or d == 0:
        samples = tuple(float(c) for c in block.codes)
    else:
        scale = 10 ** d
        samples = tuple(c / scale for c in block.codes)
    return SignalBlock(samples=samples)


def render_code(code: int, scale_exp: int | None) -> str:
    """Exact decimal text of a code, with exactly scale_exp fractional digits."""
    if scale_exp is None or scale_exp == 0:
        return str(code)
    sign = "-" if code < 0 else ""
    whole, frac = divmod(abs(code), 10 ** scale_exp)
    return f"{sign}{whole}.{frac:0{scale_exp}d}"


def code_value(code: int, scale_exp: int | None) -> float:
    """Float value of a code (text round-trips are exact; floats may not be)."""
    if scale_exp is None or scale_exp == 0:
        return float(code)
    return code / 10 ** scale_exp

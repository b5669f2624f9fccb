"""Stream-level orchestration: file format, pipeline, and run metrics.

A compressed file is a fixed 24-byte little-endian header followed by one
entropy bit stream covering every block of the file (blocks are serialized
back to back and coded as a single byte payload).  See FORMAT.md for the
normative layout.

Compression ratios are computed against the canonicalized text of the
input: one sample per line, rendered with exactly the stream's number of
fractional digits.  That is also byte-for-byte the text decompression
produces, which keeps the ratio reproducible from the emitted files alone.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass

from . import entropy
from .core import QuantizedBlock
from .errors import (
    BadFlag,
    BadMagic,
    CorruptStream,
    CountMismatch,
    Overlong,
    Truncated,
    UnsupportedVersion,
)
from .quantizer import (
    LOSSLESS,
    SCALE_PASSTHROUGH,
    QuantizerConfig,
    code_value,
    detect_digits,
    quantize_stream,
    render_code,
)
from .transform import (
    MAX_BLOCK_LEN,
    MIN_BLOCK_LEN,
    TransformConfig,
    inverse_transform,
    parse_block,
    serialize_block,
    transform_block,
)

MAGIC = b"NLTS"
FORMAT_VERSION = 1
HEADER_LEN = 24
_HEADER_STRUCT = struct.Struct("<4sBBBBHH4xQ")


@dataclass(frozen=True)
class StreamHeader:
    method_version: int
    entropy_id: int
    block_len: int
    tau: int
    scale_exp: int | None  # None marks integer passthrough
    sample_count: int
    format_version: int = FORMAT_VERSION

    def pack(self) -> bytes:
        scale_byte = SCALE_PASSTHROUGH if self.scale_exp is None else self.scale_exp
        return _HEADER_STRUCT.pack(
            MAGIC,
            self.format_version,
            self.method_version,
            self.entropy_id,
            scale_byte,
            self.block_len,
            self.tau,
            self.sample_count,
        )

    @classmethod
    def parse(cls, data: bytes) -> "StreamHeader":
        if len(data) < 4 or data[:4] != MAGIC:
            raise BadMagic("not a compressed stream (bad magic)")
        if len(data) < HEADER_LEN:
            raise CorruptStream("header truncated")
        _, fmt, method, coder, scale_byte, block_len, tau, count = _HEADER_STRUCT.unpack(
            data[:HEADER_LEN]
        )
        if fmt != FORMAT_VERSION:
            raise UnsupportedVersion(f"format version {fmt} not supported")
        if method not in (1, 2):
            raise UnsupportedVersion(f"method version {method} not supported")
        if coder not in entropy.CODER_NAMES:
            raise UnsupportedVersion(f"entropy coder id {coder} not supported")
        if (
            block_len < MIN_BLOCK_LEN
            or block_len > MAX_BLOCK_LEN
            or block_len & (block_len - 1)
        ):
            raise CorruptStream(f"header block length {block_len} is invalid")
        if not 1 <= tau <= block_len:
            raise CorruptStream(f"header tau {tau} is invalid")
        if scale_byte != SCALE_PASSTHROUGH and scale_byte > 6:
            raise CorruptStream(f"header scale byte {scale_byte} is invalid")
        if count < 1:
            raise CorruptStream("header sample count must be >= 1")
        return cls(
            method_version=method,
            entropy_id=coder,
            block_len=block_len,
            tau=tau,
            scale_exp=None if scale_byte == SCALE_PASSTHROUGH else scale_byte,
            sample_count=count,
        )


@dataclass
class RunMetrics:
    input_bytes: int
    output_bytes: int
    cr: float
    encode_rate: float = 0.0  # MB/s, MB = 1e6 bytes
    decode_rate: float = 0.0
    max_abs_error: float | None = None


def compute_metrics(
    input_bytes: int,
    output_bytes: int,
    encode_secs: float | None = None,
    decode_secs: float | None = None,
    max_abs_error: float | None = None,
) -> RunMetrics:
    return RunMetrics(
        input_bytes=input_bytes,
        output_bytes=output_bytes,
        cr=input_bytes / output_bytes,
        encode_rate=input_bytes / encode_secs / 1e6 if encode_secs else 0.0,
        decode_rate=input_bytes / decode_secs / 1e6 if decode_secs else 0.0,
        max_abs_error=max_abs_error,
    )


@dataclass(frozen=True)
class CodecConfig:
    transform: TransformConfig = TransformConfig()
    quantizer: QuantizerConfig = QuantizerConfig()
    coder: int = entropy.ADAPTIVE_ARITHMETIC

    def __post_init__(self):
        if self.coder not in entropy.CODER_NAMES:
            raise UnsupportedVersion(f"unknown entropy coder id {self.coder}")


def canonical_size(codes, scale_exp: int | None) -> int:
    """Byte size of the canonical text rendering (newline per sample)."""
    if scale_exp is None or scale_exp == 0:
        return sum(len(str(c)) for c in codes) + len(codes)
    pow10 = 10 ** scale_exp
    total = (scale_exp + 2) * len(codes)  # '.', the fraction, and '\n'
    for c in codes:
        if c < 0:
            total += 1 + len(str(-c // pow10))
        else:
            total += len(str(c // pow10))
    return total


def compress_stream(samples, config: CodecConfig = CodecConfig()):
    """Compress a sample stream; returns (container bytes, RunMetrics).

    Samples may be floats, ints, or decimal text tokens; text is quantized
    digit-exactly.  At least one sample is required.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("cannot compress an empty stream")

    tcfg = config.transform
    t0 = time.perf_counter()
    if config.quantizer.mode == LOSSLESS:
        # floats are their shortest repr in lossless mode, so the detected
        # scale captures them exactly and the measured error is zero
        samples = [repr(s) if type(s) is float else s for s in samples]
        digits = detect_digits(samples)
        scale_exp = None if digits == 0 else digits
        codes, max_err = quantize_stream(samples, digits)
    else:
        scale_exp = config.quantizer.decimal_digits
        codes, max_err = quantize_stream(samples, scale_exp)

    symbols = bytearray()
    L = tcfg.block_len
    n = len(codes)
    for start in range(0, n, L):
        block = QuantizedBlock(codes=tuple(codes[start : start + L]), scale_exp=scale_exp)
        serialize_block(transform_block(block, tcfg), symbols)

    stream = entropy.encode(bytes(symbols), config.coder)
    header = StreamHeader(
        method_version=tcfg.method_version,
        entropy_id=config.coder,
        block_len=L,
        tau=tcfg.tau,
        scale_exp=scale_exp,
        sample_count=n,
    )
    blob = header.pack() + stream.data
    encode_secs = time.perf_counter() - t0

    metrics = compute_metrics(
        input_bytes=canonical_size(codes, scale_exp),
        output_bytes=len(blob),
        encode_secs=encode_secs,
        max_abs_error=float(max_err),
    )
    return blob, metrics


def decode_codes(data: bytes):
    """Decode a container back to (codes, header, decode_secs)."""
    header = StreamHeader.parse(data)
    t0 = time.perf_counter()
    symbols = entropy.decode(data[HEADER_LEN:], header.entropy_id)

    tcfg = TransformConfig(
        method_version=header.method_version,
        block_len=header.block_len,
        tau=header.tau,
    )
    codes = []
    pos = 0
    remaining = header.sample_count
    try:
        while remaining > 0:
            width = min(header.block_len, remaining)
            tb, pos = parse_block(symbols, pos, header.method_version, width)
            block = inverse_transform(tb, tcfg, scale_exp=header.scale_exp)
            codes.extend(block.codes)
            remaining -= width
    except (Truncated, Overlong, BadFlag) as e:
        raise CorruptStream(str(e)) from e
    if pos != len(symbols):
        raise CorruptStream(f"{len(symbols) - pos} trailing bytes after the final block")
    if len(codes) != header.sample_count:
        raise CountMismatch(
            f"decoded {len(codes)} samples, header promised {header.sample_count}"
        )
    return codes, header, time.perf_counter() - t0


def decompress_stream(data: bytes):
    """Decompress a container; returns (list of floats, RunMetrics)."""
    codes, header, decode_secs = decode_codes(data)
    values = [code_value(c, header.scale_exp) for c in codes]
    metrics = compute_metrics(
        input_bytes=canonical_size(codes, header.scale_exp),
        output_bytes=len(data),
        decode_secs=decode_secs,
    )
    return values, metrics


def decompress_to_tokens(data: bytes):
    """Decompress to exact decimal text tokens; returns (tokens, RunMetrics)."""
    codes, header, decode_secs = decode_codes(data)
    tokens = [render_code(c, header.scale_exp) for c in codes]
    metrics = compute_metrics(
        input_bytes=sum(len(t) + 1 for t in tokens),
        output_bytes=len(data),
        decode_secs=decode_secs,
    )
    return tokens, metrics

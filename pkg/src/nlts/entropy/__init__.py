"""Interchangeable lossless entropy back-ends over serialized symbol bytes.

All three coders work on the byte alphabet (256 values plus a terminator
where they need one) and are deterministic: the same payload and coder id
always produce the identical bit stream.
"""

from __future__ import annotations

from ..errors import UnsupportedVersion
from . import adaptive_huffman, arithmetic, static_huffman
from .bitio import BitReader, BitStream, BitWriter

STATIC_HUFFMAN = 0
ADAPTIVE_HUFFMAN = 1
ADAPTIVE_ARITHMETIC = 2

CODER_NAMES = {
    STATIC_HUFFMAN: "static",
    ADAPTIVE_HUFFMAN: "adaptive-huffman",
    ADAPTIVE_ARITHMETIC: "arithmetic",
}
CODER_IDS = {name: coder for coder, name in CODER_NAMES.items()}

_ENCODERS = {
    STATIC_HUFFMAN: static_huffman.encode,
    ADAPTIVE_HUFFMAN: adaptive_huffman.encode,
    ADAPTIVE_ARITHMETIC: arithmetic.encode,
}
_DECODERS = {
    STATIC_HUFFMAN: static_huffman.decode,
    ADAPTIVE_HUFFMAN: adaptive_huffman.decode,
    ADAPTIVE_ARITHMETIC: arithmetic.decode,
}


def encode(payload: bytes, coder: int) -> BitStream:
    if coder not in _ENCODERS:
        raise UnsupportedVersion(f"unknown entropy coder id {coder}")
    if len(payload) >= 1 << 32:
        raise ValueError("payload too large (must be < 2^32 bytes)")
    return _ENCODERS[coder](payload)


def decode(stream, coder: int) -> bytes:
    if coder not in _DECODERS:
        raise UnsupportedVersion(f"unknown entropy coder id {coder}")
    if isinstance(stream, BitStream):
        return _DECODERS[coder](stream.data, stream.bit_len)
    return _DECODERS[coder](stream)


__all__ = [
    "ADAPTIVE_ARITHMETIC",
    "ADAPTIVE_HUFFMAN",
    "STATIC_HUFFMAN",
    "CODER_IDS",
    "CODER_NAMES",
    "BitReader",
    "BitStream",
    "BitWriter",
    "decode",
    "encode",
]

"""Adaptive binary-renormalized arithmetic coder (32-bit integer ranges).

Encoder and decoder keep a [low, high] window of 32-bit integers, narrow it
by the model's cumulative interval for each symbol, and emit/consume bits as
the window loses leading agreement; straddle states are deferred as pending
underflow bits.  The terminator symbol closes the stream, followed by a
single 1 bit so the final window is identifiable under zero padding.

The 32-bit state width and the model's 2^16 rescale ceiling are normative:
changing either changes the bit stream.  For throughput, renormalization is
batched (all agreeing leading bits leave in one step -- after a straddle
shift the top bits differ, so agreement can only occur once per symbol) and
the frequency model's Fenwick tree is inlined into the coding loops; the
output is bit-identical to the plain one-bit-at-a-time formulation.
"""

from __future__ import annotations

from ..errors import CorruptStream
from .bitio import BitStream
from .model import EOF_SYMBOL, NUM_SYMBOLS, RESCALE_CEILING

_STATE_BITS = 32
_MASK = (1 << _STATE_BITS) - 1
_TOP = 1 << (_STATE_BITS - 1)
_SECOND = _TOP >> 1
_HALF_MASK = _MASK >> 1

# A healthy stream never needs more than the state width of padding bits
# past its end; needing more means the stream was torn.
_MAX_OVERRUN = 2 * _STATE_BITS


def _fresh_tree(counts):
    n = len(counts)
    tree = [0] * (n + 1)
    for i in range(1, n + 1):
        tree[i] += counts[i - 1]
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]
    return tree


def encode(payload: bytes) -> BitStream:
    counts = [1] * NUM_SYMBOLS
    tree = _fresh_tree(counts)
    total = NUM_SYMBOLS

    out = bytearray()
    append = out.append
    acc = 0        # pending output bits, MSB-first
    nacc = 0
    low = 0
    high = _MASK
    pending = 0

    pos = 0
    end = len(payload)
    while True:
        sym = payload[pos] if pos < end else EOF_SYMBOL
        pos += 1

        lo_c = 0
        i = sym
        while i:
            lo_c += tree[i]
            i &= i - 1
        hi_c = lo_c + counts[sym]
        rng = high - low + 1
        high = low + hi_c * rng // total - 1
        low = low + lo_c * rng // total

        x = low ^ high
        if x & _TOP == 0:
            k = _STATE_BITS - x.bit_length()
            bits = low >> (_STATE_BITS - k)
            first = bits >> (k - 1)
            acc = (acc << 1) | first
            nacc += 1
            if pending:
                if first == 0:
                    acc = (acc << pending) | ((1 << pending) - 1)
                else:
                    acc <<= pending
                nacc += pending
                pending = 0
            if k > 1:
                acc = (acc << (k - 1)) | (bits & ((1 << (k - 1)) - 1))
                nacc += k - 1
            low = (low << k) & _MASK
            high = ((high << k) & _MASK) | ((1 << k) - 1)
            while nacc >= 8:
                nacc -= 8
                append((acc >> nacc) & 0xFF)
            acc &= (1 << nacc) - 1
        while low & ~high & _SECOND:
            pending += 1
            low = (low << 1) & _HALF_MASK
            high = ((high << 1) & _HALF_MASK) | _TOP | 1

        if sym == EOF_SYMBOL:
            break
        counts[sym] += 1
        total += 1
        i = sym + 1
        while i <= NUM_SYMBOLS:
            tree[i] += 1
            i += i & -i
        if total >= RESCALE_CEILING:
            counts = [(c + 1) >> 1 for c in counts]
            total = sum(counts)
            tree = _fresh_tree(counts)

    # one disambiguating bit; deferred underflow bits are never needed
    acc = (acc << 1) | 1
    nacc += 1
    while nacc >= 8:
        nacc -= 8
        append((acc >> nacc) & 0xFF)
    bit_len = 8 * len(out) + nacc
    if nacc:
        append((acc & ((1 << nacc) - 1)) << (8 - nacc))
    return BitStream(data=bytes(out), bit_len=bit_len)


def decode(data: bytes, bit_len: int | None = None) -> bytes:
    counts = [1] * NUM_SYMBOLS
    tree = _fresh_tree(counts)
    total = NUM_SYMBOLS
    if bit_len is None:
        bit_len = 8 * len(data)

    # MSB-first bit window over data, feeding zeros past the end
    dlen = len(data)
    bytepos = 0
    window = 0
    wbits = 0
    fed = 0

    low = 0
    high = _MASK
    while wbits < _STATE_BITS:
        window = (window << 8) | (data[bytepos] if bytepos < dlen else 0)
        bytepos += 1
        fed += 8
        wbits += 8
    wbits -= _STATE_BITS
    code = (window >> wbits) & _MASK
    window &= (1 << wbits) - 1

    out = bytearray()
    append = out.append
    while True:
        if fed - wbits - bit_len > _MAX_OVERRUN:
            raise CorruptStream("arithmetic stream ended before its terminator")
        rng = high - low + 1
        value = ((code - low + 1) * total - 1) // rng
        if not 0 <= value < total:
            raise CorruptStream("arithmetic decoder left its coding range")
        idx = 0
        rem = value
        bit = 256
        while bit:
            nxt = idx + bit
            if nxt <= NUM_SYMBOLS and tree[nxt] <= rem:
                rem -= tree[nxt]
                idx = nxt
            bit >>= 1
        sym = idx
        lo_c = value - rem
        hi_c = lo_c + counts[sym]
        high = low + hi_c * rng // total - 1
        low = low + lo_c * rng // total

        x = low ^ high
        if x & _TOP == 0:
            k = _STATE_BITS - x.bit_length()
            while wbits < k:
                window = (window << 8) | (data[bytepos] if bytepos < dlen else 0)
                bytepos += 1
                fed += 8
                wbits += 8
            wbits -= k
            code = ((code << k) | ((window >> wbits) & ((1 << k) - 1))) & _MASK
            window &= (1 << wbits) - 1
            low = (low << k) & _MASK
            high = ((high << k) & _MASK) | ((1 << k) - 1)
        while low & ~high & _SECOND:
            if wbits == 0:
                window = (data[bytepos] if bytepos < dlen else 0)
                bytepos += 1
                fed += 8
                wbits = 8
            wbits -= 1
            code = (code & _TOP) | ((code << 1) & _HALF_MASK) | ((window >> wbits) & 1)
            window &= (1 << wbits) - 1
            low = (low << 1) & _HALF_MASK
            high = ((high << 1) & _HALF_MASK) | _TOP | 1

        if sym == EOF_SYMBOL:
            return bytes(out)
        append(sym)
        counts[sym] += 1
        total += 1
        i = sym + 1
        while i <= NUM_SYMBOLS:
            tree[i] += 1
            i += i & -i
        if total >= RESCALE_CEILING:
            counts = [(c + 1) >> 1 for c in counts]
            total = sum(counts)
            tree = _fresh_tree(counts)

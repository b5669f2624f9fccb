"""One-pass adaptive Huffman coder (FGK update discipline).

Escape-free variant: the tree starts out holding all 257 symbols (every
byte value plus a terminator) at weight 1, so no not-yet-transmitted escape
machinery is needed and encoder and decoder stay in lockstep from the first
bit.  After each coded symbol its leaf weight is incremented under the
classic swap rule: on the way to the root, every node first trades places
with the highest-numbered node of its weight class.

The node numbering obeys the sibling property (weights nondecreasing with
number, siblings adjacent), which makes the weight-class leader a binary
search over the number-ordered weight list.  The initial tree is built by
the two-queue Huffman construction in symbol order and is part of the
stream format.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque

from ..errors import CorruptStream, Truncated
from .bitio import BitReader, BitStream, BitWriter
from .model import EOF_SYMBOL, NUM_SYMBOLS

_NUM_NODES = 2 * NUM_SYMBOLS - 1


class _Tree:
    """Code tree with FGK updates; node ids are their initial numbers."""

    __slots__ = (
        "parent", "left", "right", "weight", "symbol",
        "leaf_of", "num_of", "node_at", "weight_at", "root",
    )

    def __init__(self):
        size = _NUM_NODES + 1  # ids/numbers are 1-based
        parent = [0] * size
        left = [0] * size
        right = [0] * size
        weight = [0] * size
        symbol = [-1] * size
        leaf_of = [0] * NUM_SYMBOLS

        for s in range(NUM_SYMBOLS):
            weight[s + 1] = 1
            symbol[s + 1] = s
            leaf_of[s] = s + 1

        # Two-queue Huffman build over equal weights; creation order is
        # nondecreasing in weight, so ids double as sibling-property numbers.
        leaves = deque(range(1, NUM_SYMBOLS + 1))
        internal = deque()
        nxt = NUM_SYMBOLS + 1
        while len(leaves) + len(internal) > 1:
            pair = []
            for _ in range(2):
                if leaves and (not internal or weight[leaves[0]] <= weight[internal[0]]):
                    pair.append(leaves.popleft())
                else:
                    pair.append(internal.popleft())
            a, b = pair
            left[nxt] = a
            right[nxt] = b
            parent[a] = nxt
            parent[b] = nxt
            weight[nxt] = weight[a] + weight[b]
            internal.append(nxt)
            nxt += 1

        self.parent = parent
        self.left = left
        self.right = right
        self.weight = weight
        self.symbol = symbol
        self.leaf_of = leaf_of
        self.root = _NUM_NODES
        # number <-> node maps start as the identity
        self.num_of = list(range(size))
        self.node_at = list(range(size))
        self.weight_at = weight[:]

    def code_bits(self, sym: int) -> list:
        """Root-to-leaf bit path for a symbol (0 = left)."""
        parent = self.parent
        left = self.left
        bits = []
        node = self.leaf_of[sym]
        while node != self.root:
            p = parent[node]
            bits.append(0 if left[p] == node else 1)
            node = p
        bits.reverse()
        return bits

    def _swap(self, a: int, b: int) -> None:
        parent = self.parent
        pa, pb = parent[a], parent[b]
        if self.left[pa] == a:
            self.left[pa] = b
        else:
            self.right[pa] = b
        if self.left[pb] == b:
            self.left[pb] = a
        else:
            self.right[pb] = a
        parent[a], parent[b] = pb, pa
        na, nb = self.num_of[a], self.num_of[b]
        self.num_of[a], self.num_of[b] = nb, na
        self.node_at[na], self.node_at[nb] = b, a
        # equal weights by construction, so weight_at needs no change

    def update(self, sym: int) -> None:
        """Increment the symbol's weight, swapping to keep sibling order."""
        weight = self.weight
        weight_at = self.weight_at
        num_of = self.num_of
        node_at = self.node_at
        parent = self.parent
        root = self.root
        node = self.leaf_of[sym]
        while node:
            w = weight[node]
            if node != root:
                # ancestors weigh strictly more, so the class leader is
                # never this node's parent
                leader_num = bisect_right(weight_at, w) - 1
                leader = node_at[leader_num]
                if leader != node:
                    self._swap(node, leader)
            weight[node] = w + 1
            weight_at[num_of[node]] = w + 1
            node = parent[node]


def encode(payload: bytes) -> BitStream:
    tree = _Tree()
    out = BitWriter()
    write_bit = out.write_bit
    for sym in payload:
        for bit in tree.code_bits(sym):
            write_bit(bit)
        tree.update(sym)
    for bit in tree.code_bits(EOF_SYMBOL):
        write_bit(bit)
    return out.getvalue()


def decode(data: bytes, bit_len: int | None = None) -> bytes:
    tree = _Tree()
    reader = BitReader(data, bit_len)
    read_bit = reader.read_bit
    left = tree.left
    right = tree.right
    symbol = tree.symbol
    out = bytearray()
    try:
        while True:
            node = tree.root
            while left[node]:
                node = right[node] if read_bit() else left[node]
            sym = symbol[node]
            if sym == EOF_SYMBOL:
                return bytes(out)
            out.append(sym)
            tree.update(sym)
    except Truncated:
        raise CorruptStream("adaptive huffman stream ended before its terminator") from None

"""MSB-first bit writer and reader."""

from __future__ import annotations

from ..errors import TruncatedStream

# Lookup for FillOrder=2 (LSB-first) streams.
REVERSED_BYTES = bytes(int(f"{b:08b}"[::-1], 2) for b in range(256))


class BitWriter:
    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._n = 0
        self.nbits = 0

    def write(self, code: int, length: int) -> None:
        self._acc = (self._acc << length) | code
        self._n += length
        self.nbits += length
        while self._n >= 8:
            self._n -= 8
            self._buf.append((self._acc >> self._n) & 0xFF)
        self._acc &= (1 << self._n) - 1

    def write_bits(self, bits: str) -> None:
        self.write(int(bits, 2), len(bits))

    def align(self) -> None:
        """Zero-pad to the next byte boundary."""
        if self._n:
            self.write(0, 8 - self._n)

    def pad_for_aligned_end(self, length: int) -> None:
        """Insert zero fill so that a following ``length``-bit code ends on a byte boundary."""
        self.write(0, (-(self.nbits + length)) % 8)

    def getvalue(self) -> bytes:
        out = bytes(self._buf)
        if self._n:
            out += bytes([(self._acc << (8 - self._n)) & 0xFF])
        return out


class BitReader:
    """Random-access reader over a byte string.

    ``peek`` past the end returns zero bits; ``skip`` past the end raises
    :class:`TruncatedStream`, so a codeword matched against padding is
    rejected as soon as it is consumed.
    """

    def __init__(self, data: bytes, lsb_first: bool = False):
        if lsb_first:
            data = data.translate(REVERSED_BYTES)
        self._data = bytes(data) + b"\0\0\0"
        self.nbits = len(data) * 8
        self.pos = 0
        self.row: int | None = None

    @property
    def remaining(self) -> int:
        return self.nbits - self.pos

    def peek(self, n: int) -> int:
        # n <= 17
        pos = self.pos
        i = pos >> 3
        if i >= len(self._data) - 3:
            return 0
        d = self._data
        v = (d[i] << 16) | (d[i + 1] << 8) | d[i + 2]
        return (v >> (24 - (pos & 7) - n)) & ((1 << n) - 1)

    def skip(self, n: int) -> None:
        if self.pos + n > self.nbits:
            raise TruncatedStream("coded data ended inside a codeword", self.row, self.pos)
        self.pos += n

    def read(self, n: int) -> int:
        v = self.peek(n)
        self.skip(n)
        return v

    def align(self) -> None:
        self.pos = min(self.nbits, (self.pos + 7) & ~7)

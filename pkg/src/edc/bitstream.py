"""Self-delimiting bit-exact container for encoded descriptions.

Layout (big-endian bit packing):

    magic "EDC1" | version u8 | codec_id u2 | eps exponent u14 |
    codec-specific header and payload | zero padding to a byte boundary |
    CRC-24 trailer (OpenPGP polynomial 0x864CFB, init 0xB704CE) over all
    preceding bytes.

`total_bits` counts the semantic bits (everything before padding), which is
the quantity the growth experiments track.  Decoders know every field width
from content already parsed, so no external length is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

MAGIC = b"EDC1"
VERSION = 1

CODEC_POLY = 0
CODEC_ANALYTIC = 1
CODEC_RAND_CENTRAL = 2
CODEC_CK = 3

CODEC_NAMES = {
    CODEC_POLY: "poly",
    CODEC_ANALYTIC: "analytic",
    CODEC_RAND_CENTRAL: "rand",
    CODEC_CK: "ck",
}
CODEC_IDS = {v: k for k, v in CODEC_NAMES.items()}


class DescriptionError(ValueError):
    """Malformed, truncated or corrupted description blob."""


class BitWriter:
    def __init__(self):
        self._acc = 0
        self._bits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits < 0 or value < 0 or value >> nbits:
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._acc = (self._acc << nbits) | value
        self._bits += nbits

    @property
    def bit_length(self) -> int:
        return self._bits

    def to_bytes(self) -> bytes:
        pad = (-self._bits) % 8
        return (self._acc << pad).to_bytes((self._bits + pad) // 8, "big")


class BitReader:
    def __init__(self, data: bytes, bit_length: int | None = None):
        self._acc = int.from_bytes(data, "big")
        self._raw_bits = 8 * len(data)
        self._total = self._raw_bits if bit_length is None else bit_length
        self._pos = 0

    def read(self, nbits: int) -> int:
        if self._pos + nbits > self._total:
            raise DescriptionError("truncated payload")
        shift = self._raw_bits - self._pos - nbits
        self._pos += nbits
        return (self._acc >> shift) & ((1 << nbits) - 1)

    @property
    def bits_left(self) -> int:
        return self._total - self._pos

    def assert_only_padding_left(self) -> None:
        left = self.bits_left
        if left >= 8:
            raise DescriptionError("unconsumed payload bits")
        if left and self.read(left):
            raise DescriptionError("nonzero padding bits")


def crc24(data: bytes) -> int:
    crc = 0xB704CE
    for b in data:
        crc ^= b << 16
        for _ in range(8):
            crc <<= 1
            if crc & 0x1000000:
                crc ^= 0x864CFB
    return crc & 0xFFFFFF


@dataclass(frozen=True, slots=True)
class Description:
    """A serialized program: the artifact standing in for the shortest
    machine description of a set at the requested precision.

    `total_bits` counts the codec-specific header and payload; the fixed
    58-bit envelope (magic, version, codec id, eps exponent) plus padding
    and the 24-bit checksum are transport overhead on top, visible in
    len(blob).
    """

    codec_id: int
    eps_exp: int
    total_bits: int  # codec header + payload bits, no envelope/pad/crc
    blob: bytes

    @property
    def codec_name(self) -> str:
        return CODEC_NAMES[self.codec_id]


def frame(codec_id: int, eps_exp: int, body: BitWriter) -> Description:
    """Wrap codec body bits in the magic/version/crc envelope."""
    if not 0 <= codec_id < 4:
        raise ValueError("codec_id must fit in 2 bits")
    if not 0 <= eps_exp < (1 << 14):
        raise ValueError("eps exponent must fit in 14 bits")
    w = BitWriter()
    for byte in MAGIC:
        w.write(byte, 8)
    w.write(VERSION, 8)
    w.write(codec_id, 2)
    w.write(eps_exp, 14)
    if body.bit_length:
        w.write(body._acc, body.bit_length)
    payload = w.to_bytes()
    blob = payload + crc24(payload).to_bytes(3, "big")
    return Description(codec_id, eps_exp, body.bit_length, blob)


def unframe(blob: bytes) -> tuple:
    """Validate the envelope; return (codec_id, eps_exp, body reader)."""
    if len(blob) < 7 + 3:
        raise DescriptionError("truncated payload")
    payload, trailer = blob[:-3], blob[-3:]
    if payload[:4] != MAGIC:
        raise DescriptionError("bad magic")
    if crc24(payload) != int.from_bytes(trailer, "big"):
        raise DescriptionError("checksum mismatch")
    reader = BitReader(payload)
    for byte in MAGIC:
        reader.read(8)
    version = reader.read(8)
    if version != VERSION:
        raise DescriptionError(f"unsupported version {version}")
    codec_id = reader.read(2)
    eps_exp = reader.read(14)
    return codec_id, eps_exp, reader

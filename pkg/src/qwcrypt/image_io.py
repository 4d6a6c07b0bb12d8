"""Grayscale image container and binary PGM (P5) codec."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, PgmDepthError, PgmMagicError, PgmTruncatedError

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _coord_bits(n: int) -> int:
    return 1 if n == 1 else math.ceil(math.log2(n))


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An H x W image of ``bit_depth``-bit unsigned pixels.

    ``pixels`` is stored as a read-only 2-D integer array (row-major).
    """

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        if not 1 <= self.bit_depth <= 16:
            raise PgmDepthError(f"unsupported bit depth {self.bit_depth}")
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"pixels must be a non-empty 2-D array, got shape {arr.shape}")
        if arr.dtype.kind not in "iu":
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise DimensionError("pixel values must be integers")
        if arr.size and (arr.min() < 0 or arr.max() > self.max_value):
            raise DimensionError(f"pixel values must lie in [0, {self.max_value}]")
        dtype = np.uint8 if self.bit_depth <= 8 else np.uint16
        arr = arr.astype(dtype, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def max_value(self) -> int:
        return (1 << self.bit_depth) - 1

    @property
    def h(self) -> int:
        """Number of qubits addressing a row."""
        return _coord_bits(self.height)

    @property
    def w(self) -> int:
        """Number of qubits addressing a column."""
        return _coord_bits(self.width)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.bit_depth == other.bit_depth
            and self.pixels.shape == other.pixels.shape
            and bool(np.array_equal(self.pixels, other.pixels))
        )

    __hash__ = None

    def __repr__(self):
        return f"GrayImage({self.height}x{self.width}, q={self.bit_depth})"


def read_pgm(data: bytes) -> GrayImage:
    """Decode a binary 8-bit PGM. Header comments are skipped."""
    data = bytes(data)
    if not data.startswith(b"P5") or (len(data) > 2 and not data[2:3].isspace()):
        raise PgmMagicError("not a binary PGM (expected magic 'P5')")
    pos = 2
    fields = []
    for _ in range(3):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise PgmTruncatedError("PGM header is truncated")
        tok = m.group(1)
        if not tok.isdigit():
            raise PgmMagicError(f"invalid PGM header field {tok!r}")
        fields.append(int(tok))
        pos = m.end()
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmMagicError("PGM dimensions must be positive")
    if maxval < 1 or maxval > 255:
        raise PgmDepthError(f"unsupported maxval {maxval}; only 8-bit PGM is supported")
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise PgmTruncatedError("missing whitespace after PGM maxval")
    pos += 1
    n = width * height
    payload = data[pos:pos + n]
    if len(payload) < n:
        raise PgmTruncatedError(f"PGM payload has {len(payload)} bytes, expected {n}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    if pixels.max() > maxval:
        raise PgmDepthError("pixel value exceeds declared maxval")
    return GrayImage(pixels, 8)


def write_pgm(img: GrayImage) -> bytes:
    if img.bit_depth != 8:
        raise PgmDepthError(f"only 8-bit images can be written, got q={img.bit_depth}")
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.astype(np.uint8).tobytes()


def load_pgm(path) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(write_pgm(img))

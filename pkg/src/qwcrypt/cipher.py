"""LL-band quantization, XOR with the keystream, and the cipher container.

Container layout (all integers big-endian)::

    "QWC1" | version u8 | H u32 | W u32 | q u8 | minimum f64 | step f64 | length u32 | payload
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import dwt
from .errors import CipherFormatError, DimensionError, DomainError, LengthError
from .image_io import GrayImage
from .keystream import KeyParams, generate, keystream_length

MAGIC = b"QWC1"
VERSION = 1
_HEADER = struct.Struct(">4sBIIBddI")
HEADER_SIZE = _HEADER.size


@dataclass(frozen=True)
class QuantParams:
    minimum: float
    step: float

    def __post_init__(self):
        if not (math.isfinite(self.minimum) and math.isfinite(self.step)) or self.step <= 0:
            raise DomainError(f"invalid quantizer parameters {self}")


@dataclass(frozen=True)
class CipherPackage:
    height: int
    width: int
    bit_depth: int
    quant: QuantParams
    payload: bytes

    def __post_init__(self):
        if self.height < 4 or self.width < 4 or self.height % 2 or self.width % 2:
            raise CipherFormatError(f"image dimensions must be even and >= 4, got {self.height}x{self.width}")
        if not 1 <= self.bit_depth <= 8:
            raise CipherFormatError(f"unsupported bit depth {self.bit_depth}")
        expected = keystream_length(self.height, self.width)
        if len(self.payload) != expected:
            raise CipherFormatError(f"payload has {len(self.payload)} bytes, expected {expected}")
        object.__setattr__(self, "payload", bytes(self.payload))

    @property
    def ll_shape(self) -> tuple[int, int]:
        return self.height // 2, self.width // 2

    def payload_image(self) -> GrayImage:
        """The ciphertext viewed as an (H/2) x (W/2) 8-bit image."""
        return GrayImage(np.frombuffer(self.payload, dtype=np.uint8).reshape(self.ll_shape), 8)

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(
            MAGIC, VERSION, self.height, self.width, self.bit_depth,
            self.quant.minimum, self.quant.step, len(self.payload),
        )
        return header + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "CipherPackage":
        data = bytes(data)
        if len(data) < HEADER_SIZE:
            raise CipherFormatError(f"cipher file truncated: {len(data)} bytes < header size {HEADER_SIZE}")
        magic, version, h, w, q, minimum, step, length = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise CipherFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CipherFormatError(f"unsupported version {version}")
        payload = data[HEADER_SIZE:]
        if len(payload) != length:
            raise CipherFormatError(f"payload length field {length} disagrees with {len(payload)} bytes present")
        try:
            quant = QuantParams(minimum, step)
        except DomainError as exc:
            raise CipherFormatError(str(exc)) from exc
        return cls(h, w, q, quant, payload)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_ll(ll, q: int = 8) -> tuple[np.ndarray, QuantParams]:
    """Affine quantization of real coefficients to q-bit codes."""
    ll = np.asarray(ll, dtype=np.float64)
    if not np.all(np.isfinite(ll)):
        raise DomainError("LL band contains non-finite values")
    top = (1 << q) - 1
    lo, hi = float(ll.min()), float(ll.max())
    step = (hi - lo) / top if hi > lo else 1.0
    codes = np.clip(_round_half_away((ll - lo) / step), 0, top)
    return codes.astype(np.uint8 if q <= 8 else np.uint16), QuantParams(lo, step)


def dequantize_ll(codes, qp: QuantParams) -> np.ndarray:
    return qp.minimum + qp.step * np.asarray(codes, dtype=np.float64)


def xor_bytes(data: bytes, ks: bytes) -> bytes:
    if len(data) != len(ks):
        raise LengthError(f"data has {len(data)} bytes but keystream has {len(ks)}")
    a = np.frombuffer(bytes(data), dtype=np.uint8)
    b = np.frombuffer(bytes(ks), dtype=np.uint8)
    return (a ^ b).tobytes()


def encrypt(img: GrayImage, key: KeyParams) -> CipherPackage:
    if img.bit_depth != 8:
        raise DimensionError(f"encryption requires q=8, got q={img.bit_depth}")
    if img.height < 8 or img.width < 8 or img.height % 2 or img.width % 2:
        raise DimensionError(f"image must have even dimensions >= 8, got {img.height}x{img.width}")
    ll = dwt.extract_ll(dwt.forward_d4_2d(img.pixels))
    codes, qp = quantize_ll(ll, img.bit_depth)
    ks = generate(key, keystream_length(img.height, img.width))
    return CipherPackage(img.height, img.width, img.bit_depth, qp, xor_bytes(codes.tobytes(), ks))


def recover_ll_codes(pkg: CipherPackage, key: KeyParams) -> np.ndarray:
    """Undo the XOR stage, returning the quantized LL band."""
    ks = generate(key, len(pkg.payload))
    plain = xor_bytes(pkg.payload, ks)
    return np.frombuffer(plain, dtype=np.uint8).reshape(pkg.ll_shape)


def finalize_pixels(x: np.ndarray, q: int = 8) -> np.ndarray:
    """Round half away from zero, then clamp into [0, 2**q - 1]."""
    return np.clip(_round_half_away(x), 0, (1 << q) - 1).astype(np.int64)


def decrypt(pkg: CipherPackage, key: KeyParams) -> GrayImage:
    ll = dequantize_ll(recover_ll_codes(pkg, key), pkg.quant)
    rec = dwt.inverse_d4_2d(dwt.zero_fill(ll))
    return GrayImage(finalize_pixels(rec, pkg.bit_depth), pkg.bit_depth)

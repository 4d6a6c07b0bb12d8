"""One-level 2-D Daubechies-4 wavelet transform with periodic extension.

Subbands are named after their position in the assembled coefficient
image: ``ll`` upper-left, ``hl`` upper-right (high-pass along rows),
``lh`` lower-left (high-pass along columns), ``hh`` lower-right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

_SQRT3 = np.sqrt(3.0)
_NORM = 4.0 * np.sqrt(2.0)

#: Orthonormal D4 low-pass analysis taps.
LOWPASS = np.array([1 + _SQRT3, 3 + _SQRT3, 3 - _SQRT3, 1 - _SQRT3]) / _NORM
#: Quadrature mirror of LOWPASS: g[k] = (-1)^k h[3-k].
HIGHPASS = np.array([LOWPASS[3], -LOWPASS[2], LOWPASS[1], -LOWPASS[0]])


@dataclass(frozen=True, eq=False)
class SubbandSet:
    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        bands = [np.asarray(b, dtype=np.float64) for b in (self.ll, self.hl, self.lh, self.hh)]
        shapes = {b.shape for b in bands}
        if len(shapes) != 1 or bands[0].ndim != 2:
            raise DimensionError(f"subbands must share one 2-D shape, got {sorted(shapes)}")
        if not all(np.all(np.isfinite(b)) for b in bands):
            raise DimensionError("subband entries must be finite")
        for name, b in zip(("ll", "hl", "lh", "hh"), bands):
            object.__setattr__(self, name, b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.ll.shape

    def assemble(self) -> np.ndarray:
        """Tile the four bands into a single coefficient image."""
        return np.block([[self.ll, self.hl], [self.lh, self.hh]])

    @classmethod
    def from_assembled(cls, coeffs: np.ndarray) -> "SubbandSet":
        coeffs = np.asarray(coeffs, dtype=np.float64)
        r, c = coeffs.shape
        if r % 2 or c % 2:
            raise DimensionError("assembled coefficient image must have even dimensions")
        m, n = r // 2, c // 2
        return cls(coeffs[:m, :n], coeffs[:m, n:], coeffs[m:, :n], coeffs[m:, n:])


def _analyze(x: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.moveaxis(x, axis, -1)
    n = x.shape[-1]
    base = np.arange(0, n, 2)
    low = np.zeros(x.shape[:-1] + (n // 2,))
    high = np.zeros_like(low)
    # taps accumulated in a fixed order
    for j in range(4):
        xs = x[..., (base + j) % n]
        low += LOWPASS[j] * xs
        high += HIGHPASS[j] * xs
    return np.moveaxis(low, -1, axis), np.moveaxis(high, -1, axis)


def _synthesize(low: np.ndarray, high: np.ndarray, axis: int) -> np.ndarray:
    low = np.moveaxis(low, axis, -1)
    high = np.moveaxis(high, axis, -1)
    # x[2k] and x[2k+1] receive taps 0/1 from coefficient k and taps 2/3 from k-1
    low_prev = np.roll(low, 1, axis=-1)
    high_prev = np.roll(high, 1, axis=-1)
    h, g = LOWPASS, HIGHPASS
    even = h[0] * low + g[0] * high + h[2] * low_prev + g[2] * high_prev
    odd = h[1] * low + g[1] * high + h[3] * low_prev + g[3] * high_prev
    out = np.empty(low.shape[:-1] + (2 * low.shape[-1],))
    out[..., 0::2] = even
    out[..., 1::2] = odd
    return np.moveaxis(out, -1, axis)


def _check_even(shape, minimum=4):
    if len(shape) != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {shape}")
    r, c = shape
    if r % 2 or c % 2 or r < minimum or c < minimum:
        raise DimensionError(f"dimensions must be even and >= {minimum}, got {r}x{c}")


def forward_d4_2d(img) -> SubbandSet:
    """Transform rows, then columns, and return the four subbands."""
    x = np.asarray(img, dtype=np.float64)
    _check_even(x.shape)
    row_low, row_high = _analyze(x, axis=1)
    ll, lh = _analyze(row_low, axis=0)
    hl, hh = _analyze(row_high, axis=0)
    return SubbandSet(ll, hl, lh, hh)


def inverse_d4_2d(bands: SubbandSet) -> np.ndarray:
    if not isinstance(bands, SubbandSet):
        raise DimensionError("inverse_d4_2d expects a SubbandSet")
    _check_even(tuple(2 * s for s in bands.shape))
    row_low = _synthesize(bands.ll, bands.lh, axis=0)
    row_high = _synthesize(bands.hl, bands.hh, axis=0)
    return _synthesize(row_low, row_high, axis=1)


def extract_ll(bands: SubbandSet) -> np.ndarray:
    return bands.ll.copy()


def zero_fill(ll) -> SubbandSet:
    ll = np.asarray(ll, dtype=np.float64)
    if ll.ndim != 2:
        raise DimensionError("zero_fill expects a 2-D matrix")
    z = np.zeros_like(ll)
    return SubbandSet(ll, z, z, z)


def lowpass_reconstruction(img) -> np.ndarray:
    """Inverse transform of the LL band alone (detail bands zeroed)."""
    return inverse_d4_2d(zero_fill(extract_ll(forward_d4_2d(img))))

"""Logistic-map keystream.

The byte sequence is part of the cipher file contract, so the iteration is
kept in plain Python floats (IEEE binary64, round-to-nearest, no FMA).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, KeyParamError

DEFAULT_MU = 3.99
DEFAULT_BURN_IN = 1000
_SCALE = float(1 << 24)


@dataclass(frozen=True)
class KeyParams:
    x0: float
    mu: float = DEFAULT_MU
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        x0, mu = float(self.x0), float(self.mu)
        if not 0.0 < x0 < 1.0:
            raise KeyParamError(f"x0 must lie in (0, 1), got {self.x0}")
        if not 3.57 < mu <= 4.0:
            raise KeyParamError(f"mu must lie in (3.57, 4], got {self.mu}")
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise KeyParamError(f"burn_in must be a non-negative integer, got {self.burn_in}")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "burn_in", int(self.burn_in))


def logistic_next(x: float, mu: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"logistic map state must lie in [0, 1], got {x}")
    return (mu * x) * (1.0 - x)


def generate(key: KeyParams, n_bytes: int) -> bytes:
    """Return ``n_bytes`` keystream bytes: floor(x * 2**24) mod 256 per step."""
    if not isinstance(key, KeyParams):
        raise KeyParamError("generate expects KeyParams")
    if n_bytes < 0:
        raise KeyParamError(f"n_bytes must be >= 0, got {n_bytes}")
    x, mu = key.x0, key.mu
    for _ in range(key.burn_in):
        x = (mu * x) * (1.0 - x)
    out = bytearray(n_bytes)
    for i in range(n_bytes):
        x = (mu * x) * (1.0 - x)
        out[i] = int(x * _SCALE) & 0xFF
    return bytes(out)


def keystream_length(height: int, width: int) -> int:
    """Bytes needed to cover the LL quadrant of an H x W image."""
    return (height // 2) * (width // 2)

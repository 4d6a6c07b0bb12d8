"""Statistical image measures and the LL-substitution experiment."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import dwt
from .cipher import finalize_pixels
from .errors import CorrelationError, DimensionError
from .image_io import GrayImage

DIRECTIONS = ("horizontal", "vertical", "diagonal")


def _pixels(img) -> np.ndarray:
    if isinstance(img, GrayImage):
        return img.pixels.astype(np.float64)
    return np.asarray(img, dtype=np.float64)


def mse(a: GrayImage, b: GrayImage) -> float:
    if a.pixels.shape != b.pixels.shape:
        raise DimensionError(f"image shapes differ: {a.pixels.shape} vs {b.pixels.shape}")
    d = _pixels(a) - _pixels(b)
    return float(np.mean(d * d))


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    peak = float(max(a.max_value, b.max_value))
    return 10.0 * math.log10(peak * peak / err)


def adjacent_pairs(img, direction: str) -> tuple[np.ndarray, np.ndarray]:
    f = _pixels(img)
    if direction == "horizontal":
        return f[:, :-1].ravel(), f[:, 1:].ravel()
    if direction == "vertical":
        return f[:-1, :].ravel(), f[1:, :].ravel()
    if direction == "diagonal":
        return f[:-1, :-1].ravel(), f[1:, 1:].ravel()
    raise ValueError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")


def adjacency_correlation(img, direction: str) -> float:
    """Pearson correlation over every adjacent pixel pair in one direction."""
    x, y = adjacent_pairs(img, direction)
    if x.size < 2:
        raise DimensionError("image too small to form two adjacent pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = np.mean(dx * dx)
    vy = np.mean(dy * dy)
    if vx == 0 or vy == 0:
        raise CorrelationError("correlation undefined for zero-variance pixel pairs")
    r = np.mean(dx * dy) / math.sqrt(vx * vy)
    return float(min(1.0, max(-1.0, r)))


def histogram(img: GrayImage) -> np.ndarray:
    return np.bincount(img.pixels.ravel(), minlength=img.max_value + 1)


def entropy(img: GrayImage) -> float:
    counts = histogram(img)
    p = counts[counts > 0] / counts.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


def spatial_frequency(img) -> tuple[float, float, float]:
    """Row, column and combined spatial frequency.

    Differences are taken between in-range neighbours only, and both sums are
    divided by M*N.
    """
    f = _pixels(img)
    m, n = f.shape
    if m < 2 or n < 2:
        raise DimensionError(f"spatial frequency needs at least 2x2 pixels, got {m}x{n}")
    rf = math.sqrt(np.sum(np.diff(f, axis=1) ** 2) / (m * n))
    cf = math.sqrt(np.sum(np.diff(f, axis=0) ** 2) / (m * n))
    return rf, cf, math.hypot(rf, cf)


def ablate_ll(img: GrayImage, fill: str = "zero") -> GrayImage:
    """Replace the LL band by zeros or by its maximum and reconstruct."""
    if fill not in ("zero", "max"):
        raise ValueError(f"fill must be 'zero' or 'max', got {fill!r}")
    bands = dwt.forward_d4_2d(img.pixels)
    value = 0.0 if fill == "zero" else float(bands.ll.max())
    ablated = dwt.SubbandSet(np.full_like(bands.ll, value), bands.hl, bands.lh, bands.hh)
    rec = dwt.inverse_d4_2d(ablated)
    return GrayImage(finalize_pixels(rec, img.bit_depth), img.bit_depth)


@dataclass
class MetricsReport:
    entropy_bits: float
    rf: float
    cf: float
    sf: float
    histogram: list
    correlations: dict = field(default_factory=dict)
    psnr_db: float | None = None
    height: int = 0
    width: int = 0

    def as_dict(self) -> dict:
        """Flat, key-ordered view used for the JSON report."""
        out = {"height": self.height, "width": self.width}
        if self.psnr_db is not None:
            out["psnr_db"] = self.psnr_db
        for d in DIRECTIONS:
            out[f"correlation_{d}"] = self.correlations.get(d)
        out["entropy_bits"] = self.entropy_bits
        out["rf"] = self.rf
        out["cf"] = self.cf
        out["sf"] = self.sf
        out["histogram"] = list(self.histogram)
        return out


def analyze(img: GrayImage, against: GrayImage | None = None) -> MetricsReport:
    correlations = {}
    for d in DIRECTIONS:
        try:
            correlations[d] = adjacency_correlation(img, d)
        except (CorrelationError, DimensionError):
            correlations[d] = None
    rf, cf, sf = spatial_frequency(img)
    return MetricsReport(
        entropy_bits=entropy(img),
        rf=rf,
        cf=cf,
        sf=sf,
        histogram=[int(c) for c in histogram(img)],
        correlations=correlations,
        psnr_db=psnr(against, img) if against is not None else None,
        height=img.height,
        width=img.width,
    )


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return '"inf"' if value > 0 else '"-inf"'
        if math.isnan(value):
            return "null"
        return f"{value:.6f}"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{_fmt(str(k))}: {_fmt(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(obj) -> str:
    """Serialize with reals fixed at six decimals; infinity becomes ``"inf"``."""
    if isinstance(obj, dict):
        lines = [f"  {_fmt(str(k))}: {_fmt(v)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(lines) + "\n}\n"
    return _fmt(obj) + "\n"


def histogram_csv(counts) -> str:
    return "".join(f"{v},{int(c)}\n" for v, c in enumerate(counts))

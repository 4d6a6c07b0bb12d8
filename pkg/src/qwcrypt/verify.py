"""Randomized equivalence checks between the circuits and classical byte operations."""

from __future__ import annotations

import numpy as np

from . import qcircuit as qc
from .cipher import xor_bytes
from .image_io import GrayImage

NORM_DRIFT_TOL = 1e-9


def classical_quadrant(pixels: np.ndarray) -> np.ndarray:
    """Upper-left quadrant kept, everything else zero."""
    out = np.zeros_like(pixels)
    m, n = pixels.shape[0] // 2, pixels.shape[1] // 2
    out[:m, :n] = pixels[:m, :n]
    return out


def classical_zero_fill(ll: np.ndarray) -> np.ndarray:
    m, n = ll.shape
    out = np.zeros((2 * m, 2 * n), dtype=ll.dtype)
    out[:m, :n] = ll
    return out


def classical_xor(pixels: np.ndarray, words: np.ndarray) -> np.ndarray:
    a = pixels.astype(np.uint8).tobytes()
    k = words.astype(np.uint8).tobytes()
    return np.frombuffer(xor_bytes(a, k), dtype=np.uint8).reshape(pixels.shape)


def _drift(state: qc.StateVector) -> float:
    return abs(state.norm() - 1.0)


def check_olc(img: GrayImage) -> tuple[bool, float]:
    h, w, q = img.h, img.w, img.bit_depth
    circuit = qc.build_olc_circuit(h, w, q)
    fresh = qc.basis_state(qc.QubitRegisterLayout((("target", q), ("anc", 1))))
    out = qc.apply(circuit, qc.gqir_encode(img).tensor(fresh))
    ok = (
        np.array_equal(qc.gqir_decode(out, color="target").pixels, classical_quadrant(img.pixels))
        and qc.gqir_decode(out) == img
        and not qc.gqir_decode(out, color="anc").pixels.any()
    )
    return ok, _drift(out)


def check_zfh(ll: GrayImage) -> tuple[bool, float]:
    h, w, q = ll.h + 1, ll.w + 1, ll.bit_depth
    circuit = qc.build_zfh_circuit(h, w, q)
    fresh = qc.basis_state(qc.QubitRegisterLayout.gqir(h, w, q, "out_"))
    out = qc.apply(circuit, qc.gqir_encode(ll, "ll_").tensor(fresh))
    ok = np.array_equal(qc.decode_zero_filled(out).pixels, classical_zero_fill(ll.pixels))
    return ok, _drift(out)


def check_xor(img: GrayImage, words: np.ndarray) -> tuple[bool, float]:
    circuit = qc.build_xor_circuit(words, q=img.bit_depth)
    state = qc.gqir_encode(img)
    out = qc.apply(circuit, state)
    ok = np.array_equal(qc.gqir_decode(out).pixels, classical_xor(img.pixels, words))
    twice = qc.apply(circuit, out)
    ok = ok and np.allclose(twice.amplitudes, state.amplitudes, atol=NORM_DRIFT_TOL)
    return ok, _drift(out)


def run_verification(size: int, q: int, trials: int, seed: int) -> dict:
    """Run ``trials`` random instances of each circuit kind and summarize."""
    if size < 4 or size & (size - 1):
        raise ValueError(f"size must be a power of two >= 4, got {size}")
    rng = np.random.default_rng(seed)
    h = w = size.bit_length() - 1
    top = 1 << q
    checks = {
        "olc": lambda: check_olc(GrayImage(rng.integers(0, top, (size, size)), q)),
        "zfh": lambda: check_zfh(GrayImage(rng.integers(0, top, (size // 2, size // 2)), q)),
        "xor": lambda: check_xor(
            GrayImage(rng.integers(0, top, (size, size)), q), rng.integers(0, top, (size, size))
        ),
    }
    circuits = {
        "olc": qc.build_olc_circuit(h, w, q),
        "zfh": qc.build_zfh_circuit(h, w, q),
        "xor": qc.build_xor_circuit(np.full((size, size), top - 1), q=q),
    }
    report = {"size": size, "q": q, "trials": trials, "seed": seed, "circuits": {}}
    all_ok = True
    for name, check in checks.items():
        failures, drift = 0, 0.0
        for _ in range(trials):
            ok, d = check()
            failures += not ok
            drift = max(drift, d)
        passed = failures == 0 and drift <= NORM_DRIFT_TOL
        all_ok &= passed
        entry = {
            "passed": passed,
            "failures": failures,
            "max_norm_drift": drift,
            "qubits": circuits[name].layout.n_qubits,
            "gate_counts": qc.gate_count(circuits[name]),
        }
        if name == "xor":
            entry["note"] = "gate_counts for an all-ones key (upper bound)"
        report["circuits"][name] = entry
    report["all_passed"] = all_ok
    return report

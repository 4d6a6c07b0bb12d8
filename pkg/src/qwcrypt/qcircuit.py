"""Gate-level model of the GQIR circuits and a dense state-vector simulator.

Qubit 0 is the most significant bit of a basis-state index. Within a
register the first qubit is likewise the most significant, so colour bit
C^0 and coordinate bits y_0 / x_0 are the leading bits of their values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CircuitError, DecodeError
from .image_io import GrayImage

MAX_QUBITS = 20
NORM_TOL = 1e-9


# ---------------------------------------------------------------- layout


@dataclass(frozen=True)
class QubitRegisterLayout:
    """Ordered, disjoint named registers covering qubits 0..n-1."""

    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(n), int(s)) for n, s in self.registers)
        names = [n for n, _ in regs]
        if len(set(names)) != len(names):
            raise CircuitError(f"duplicate register names in {names}")
        if any(s < 0 for _, s in regs):
            raise CircuitError("register sizes must be non-negative")
        object.__setattr__(self, "registers", regs)

    @property
    def n_qubits(self) -> int:
        return sum(s for _, s in self.registers)

    def span(self, name: str) -> range:
        start = 0
        for n, s in self.registers:
            if n == name:
                return range(start, start + s)
            start += s
        raise CircuitError(f"no register named {name!r}")

    def size(self, name: str) -> int:
        return len(self.span(name))

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.registers)

    def concat(self, other: "QubitRegisterLayout") -> "QubitRegisterLayout":
        return QubitRegisterLayout(self.registers + other.registers)

    def index_of(self, values: dict) -> int:
        """Basis-state index with each named register set to the given value."""
        idx = 0
        for name, size in self.registers:
            v = int(values.get(name, 0))
            if not 0 <= v < (1 << size):
                raise CircuitError(f"value {v} does not fit register {name!r} of {size} qubits")
            idx = (idx << size) | v
        return idx

    def read(self, indices: np.ndarray, name: str) -> np.ndarray:
        """Extract the value of one register from basis-state indices."""
        span = self.span(name)
        shift = self.n_qubits - span.stop
        return (np.asarray(indices) >> shift) & ((1 << len(span)) - 1)

    @classmethod
    def gqir(cls, h: int, w: int, q: int, prefix: str = "") -> "QubitRegisterLayout":
        return cls(((prefix + "color", q), (prefix + "y", h), (prefix + "x", w)))


# ---------------------------------------------------------------- gates


class GateKind(enum.Enum):
    PAULI_X = "PauliX"
    HADAMARD = "Hadamard"
    MCX = "MultiControlledX"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    controls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        controls = tuple((int(i), int(p)) for i, p in self.controls)
        object.__setattr__(self, "controls", controls)
        if self.kind is not GateKind.MCX and controls:
            raise CircuitError(f"{self.kind.value} takes no controls")
        idx = [i for i, _ in controls]
        if self.target in idx:
            raise CircuitError("target qubit is also a control")
        if len(set(idx)) != len(idx):
            raise CircuitError("duplicate control qubit")
        if any(p not in (0, 1) for _, p in controls):
            raise CircuitError("control polarity must be 0 or 1")

    def qubits(self) -> list[int]:
        return [self.target] + [i for i, _ in self.controls]


def x(target: int) -> Gate:
    return Gate(GateKind.PAULI_X, target)


def hadamard(target: int) -> Gate:
    return Gate(GateKind.HADAMARD, target)


def mcx(controls: Iterable[tuple[int, int]], target: int) -> Gate:
    """Extended Toffoli: flip ``target`` when every control equals its polarity."""
    return Gate(GateKind.MCX, target, tuple(controls))


@dataclass(frozen=True)
class Circuit:
    layout: QubitRegisterLayout
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        n = self.layout.n_qubits
        for g in gates:
            if any(not 0 <= i < n for i in g.qubits()):
                raise CircuitError(f"gate {g} addresses a qubit outside 0..{n - 1}")
        object.__setattr__(self, "gates", gates)

    def inverse(self) -> "Circuit":
        # every gate used here is self-inverse
        return Circuit(self.layout, tuple(reversed(self.gates)))

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.layout != self.layout:
            raise CircuitError("cannot concatenate circuits over different layouts")
        return Circuit(self.layout, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)


def gate_count(circuit: Circuit) -> dict[str, int]:
    counts = {k.value: 0 for k in GateKind}
    for g in circuit.gates:
        counts[g.kind.value] += 1
    return counts


def position_controls(layout: QubitRegisterLayout, reg: str, value: int, prefix_bits: Sequence[int] = ()) -> list:
    """Controls matching ``prefix_bits`` followed by the bits of ``value`` on register ``reg``."""
    qubits = list(layout.span(reg))
    rest = len(qubits) - len(prefix_bits)
    bits = list(prefix_bits) + [(value >> (rest - 1 - j)) & 1 for j in range(rest)]
    return list(zip(qubits, bits))


# ---------------------------------------------------------------- states


@dataclass(frozen=True, eq=False)
class StateVector:
    layout: QubitRegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.layout.n_qubits,):
            raise CircuitError(f"expected {1 << self.layout.n_qubits} amplitudes, got {amps.shape}")
        if abs(float(np.vdot(amps, amps).real) - 1.0) > NORM_TOL:
            raise CircuitError("state vector is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.layout.n_qubits

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.layout.concat(other.layout), np.kron(self.amplitudes, other.amplitudes))

    def project(self, keep: Sequence[str]) -> "StateVector":
        """Drop registers that are in a fixed basis state |v>, keeping ``keep``.

        Raises CircuitError if a dropped register is entangled or superposed.
        """
        drop = [n for n, _ in self.layout.registers if n not in keep]
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-12)
        for name in drop:
            if len(np.unique(self.layout.read(nz, name))) != 1:
                raise CircuitError(f"register {name!r} is not in a definite basis state")
        kept = QubitRegisterLayout(tuple((n, s) for n, s in self.layout.registers if n in keep))
        new_idx = np.zeros_like(nz)
        for name, size in kept.registers:
            new_idx = (new_idx << size) | self.layout.read(nz, name)
        amps = np.zeros(1 << kept.n_qubits, dtype=np.complex128)
        amps[new_idx] = self.amplitudes[nz]
        return StateVector(kept, amps)


def basis_state(layout: QubitRegisterLayout, values: dict | None = None) -> StateVector:
    amps = np.zeros(1 << layout.n_qubits, dtype=np.complex128)
    amps[layout.index_of(values or {})] = 1.0
    return StateVector(layout, amps)


def _check_size(n: int, max_qubits: int):
    if n > max_qubits:
        raise CircuitError(f"{n} qubits exceeds the simulation limit of {max_qubits}")


def apply(circuit: Circuit, state: StateVector, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Apply the gates of ``circuit`` in order to a copy of ``state``."""
    if circuit.layout.n_qubits != state.n_qubits:
        raise CircuitError(
            f"circuit acts on {circuit.layout.n_qubits} qubits, state has {state.n_qubits}"
        )
    n = state.n_qubits
    _check_size(n, max_qubits)
    psi = state.amplitudes.copy().reshape((2,) * n) if n else state.amplitudes.copy()
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for g in circuit.gates:
        sel = [slice(None)] * n
        for i, p in g.controls:
            sel[i] = p
        sel[g.target] = 0
        i0 = tuple(sel)
        sel[g.target] = 1
        i1 = tuple(sel)
        a0 = psi[i0].copy()
        if g.kind is GateKind.HADAMARD:
            a1 = psi[i1]
            psi[i0] = (a0 + a1) * inv_sqrt2
            psi[i1] = (a0 - a1) * inv_sqrt2
        else:
            psi[i0] = psi[i1]
            psi[i1] = a0
    return StateVector(circuit.layout, psi.reshape(-1))


# ---------------------------------------------------------------- GQIR


def _log2_exact(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise CircuitError(f"{what} must be a power of two, got {n}")
    return n.bit_length() - 1


def gqir_encode(img: GrayImage, prefix: str = "", max_qubits: int = MAX_QUBITS) -> StateVector:
    """Uniform superposition of |f(Y,X)>|Y>|X> over all pixel positions."""
    h = _log2_exact(img.height, "image height")
    w = _log2_exact(img.width, "image width")
    q = img.bit_depth
    layout = QubitRegisterLayout.gqir(h, w, q, prefix)
    _check_size(layout.n_qubits, max_qubits)
    ys, xs = np.indices(img.pixels.shape)
    color = img.pixels.astype(np.int64)
    idx = (color << (h + w)) | (ys << w) | xs
    amps = np.zeros(1 << layout.n_qubits, dtype=np.complex128)
    amps[idx.ravel()] = 1.0 / math.sqrt(img.height * img.width)
    return StateVector(layout, amps)


def gqir_decode(
    state: StateVector,
    color: str = "color",
    y: str = "y",
    x: str = "x",
    atol: float = 1e-9,
) -> GrayImage:
    """Read the pixel matrix back out of a GQIR state.

    Registers other than ``color``, ``y`` and ``x`` are treated as
    spectators. Every position must carry exactly one colour value with
    equal probability mass.
    """
    layout = state.layout
    h, w, q = layout.size(y), layout.size(x), layout.size(color)
    if q < 1:
        raise DecodeError("colour register is empty")
    prob = np.abs(state.amplitudes) ** 2
    nz = np.flatnonzero(prob > atol * atol)
    pos = (layout.read(nz, y) << w) | layout.read(nz, x)
    col = layout.read(nz, color)
    n_pos = 1 << (h + w)

    mass = np.bincount(pos, weights=prob[nz], minlength=n_pos)
    if np.any(np.abs(mass - 1.0 / n_pos) > atol):
        raise DecodeError("position amplitudes are not uniform")
    lo = np.full(n_pos, np.iinfo(np.int64).max)
    hi = np.full(n_pos, -1)
    np.minimum.at(lo, pos, col)
    np.maximum.at(hi, pos, col)
    if np.any(lo != hi):
        bad = int(np.flatnonzero(lo != hi)[0])
        raise DecodeError(f"position {divmod(bad, 1 << w)} holds more than one colour value")
    return GrayImage(hi.reshape(1 << h, 1 << w), q)


# ---------------------------------------------------------------- circuits


def low_positions(h: int, w: int) -> list[tuple[int, int]]:
    """(Y, X) positions with y_0 = x_0 = 0, ordered as in the 4x4 block diagram."""
    return [(yy, xx) for xx in range(1 << (w - 1)) for yy in range(1 << (h - 1))]


def olc_layout(h: int, w: int, q: int) -> QubitRegisterLayout:
    return QubitRegisterLayout.gqir(h, w, q).concat(
        QubitRegisterLayout((("target", q), ("anc", 1)))
    )


def build_olc_circuit(h: int, w: int, q: int) -> Circuit:
    """Copy the low-frequency quadrant's colours into a fresh ``target`` register.

    One block per low position: an ETOF marks the position on the ancilla,
    q Toffolis copy the colour bits, and a second ETOF restores the ancilla.
    The source registers are never modified.
    """
    if h < 1 or w < 1 or q < 1:
        raise CircuitError("h, w and q must all be >= 1")
    layout = olc_layout(h, w, q)
    anc = layout.span("anc")[0]
    color = list(layout.span("color"))
    target = list(layout.span("target"))
    gates = []
    for yy, xx in low_positions(h, w):
        select = position_controls(layout, "y", yy) + position_controls(layout, "x", xx)
        gates.append(mcx(select, anc))
        gates.extend(mcx([(anc, 1), (c, 1)], t) for c, t in zip(color, target))
        gates.append(mcx(select, anc))
    return Circuit(layout, tuple(gates))


def zfh_layout(h: int, w: int, q: int) -> QubitRegisterLayout:
    return QubitRegisterLayout.gqir(h - 1, w - 1, q, "ll_").concat(QubitRegisterLayout.gqir(h, w, q, "out_"))


def build_zfh_circuit(h: int, w: int, q: int, max_qubits: int = MAX_QUBITS) -> Circuit:
    """Embed a 2^(h-1) x 2^(w-1) LL image into a fresh 2^h x 2^w image.

    Hadamards spread the new position register, then one block per LL pixel
    copies its colour to the output position with y'_0 = x'_0 = 0 and the
    remaining coordinate bits equal to the LL position.
    """
    if h < 1 or w < 1 or q < 1:
        raise CircuitError("h, w and q must all be >= 1")
    layout = zfh_layout(h, w, q)
    _check_size(layout.n_qubits, max_qubits)
    gates = [hadamard(i) for i in list(layout.span("out_y")) + list(layout.span("out_x"))]
    src = list(layout.span("ll_color"))
    dst = list(layout.span("out_color"))
    for yy, xx in low_positions(h, w):
        select = (
            position_controls(layout, "ll_y", yy)
            + position_controls(layout, "ll_x", xx)
            + position_controls(layout, "out_y", yy, prefix_bits=[0])
            + position_controls(layout, "out_x", xx, prefix_bits=[0])
        )
        gates.extend(mcx(select + [(s, 1)], d) for s, d in zip(src, dst))
    return Circuit(layout, tuple(gates))


def decode_zero_filled(state: StateVector, atol: float = 1e-9) -> GrayImage:
    """Read the full-size image produced by the zero-filling circuit.

    The output register is entangled with the LL position register, so each
    low output position is read in the branch whose LL position matches its
    trailing coordinate bits. Every other branch must hold colour 0.
    """
    layout = state.layout
    h, w = layout.size("out_y"), layout.size("out_x")
    q = layout.size("out_color")
    prob = np.abs(state.amplitudes) ** 2
    nz = np.flatnonzero(prob > atol * atol)
    n_branches = 1 << (layout.size("ll_y") + layout.size("ll_x") + h + w)
    if len(nz) != n_branches or np.any(np.abs(prob[nz] - 1.0 / n_branches) > atol):
        raise DecodeError("zero-filled state is not a uniform superposition over all branches")
    ll_y, ll_x = layout.read(nz, "ll_y"), layout.read(nz, "ll_x")
    oy, ox = layout.read(nz, "out_y"), layout.read(nz, "out_x")
    ll_c, out_c = layout.read(nz, "ll_color"), layout.read(nz, "out_color")
    low = ((oy >> (h - 1)) == 0) & ((ox >> (w - 1)) == 0)
    match = low & (oy == ll_y) & (ox == ll_x)
    if np.any(out_c[~match] != 0):
        raise DecodeError("non-matching branch carries a non-zero colour")
    if np.any(out_c[match] != ll_c[match]):
        raise DecodeError("low output position does not carry the LL colour")
    img = np.zeros((1 << h, 1 << w), dtype=np.int64)
    img[oy[match], ox[match]] = out_c[match]
    return GrayImage(img, q)


def build_xor_circuit(key_words, layout: QubitRegisterLayout | None = None, q: int | None = None) -> Circuit:
    """XOR each position's colour with its key word.

    ``key_words`` is a 2^h x 2^w matrix of q-bit integers. Each set key bit
    becomes one ETOF gate conditioned on the full position pattern.
    """
    words = np.asarray(key_words, dtype=np.int64)
    if words.ndim != 2:
        raise CircuitError("key words must form a 2-D matrix")
    h = _log2_exact(words.shape[0], "key matrix height")
    w = _log2_exact(words.shape[1], "key matrix width")
    if layout is None:
        if q is None:
            raise CircuitError("either a layout or q is required")
        layout = QubitRegisterLayout.gqir(h, w, q)
    if layout.size("y") != h or layout.size("x") != w:
        raise CircuitError("key matrix shape does not match the position registers")
    q = layout.size("color")
    if words.min(initial=0) < 0 or words.max(initial=0) >= (1 << q):
        raise CircuitError(f"key words must be {q}-bit values")
    color = list(layout.span("color"))
    gates = []
    for yy in range(words.shape[0]):
        for xx in range(words.shape[1]):
            k = int(words[yy, xx])
            if not k:
                continue
            select = position_controls(layout, "y", yy) + position_controls(layout, "x", xx)
            gates.extend(mcx(select, color[i]) for i in range(q) if (k >> (q - 1 - i)) & 1)
    return Circuit(layout, tuple(gates))

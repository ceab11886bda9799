"""Pauli frames, CNOT propagation, and the depolarizing noise model.

A Pauli operator X_e Z_f on an n-qubit block is tracked as the bitmask pair
(e, f); composition is component-wise XOR.  Phases are intentionally not
tracked: every circuit in this package is CNOTs plus Pauli-basis
measurements, so no observable parity ever depends on the phase exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .gf2 import BinaryVector
from .kernels import depol1_code, depol2_code, prep_block

if TYPE_CHECKING:
    from .css import CssCode


@dataclass
class PauliError:
    """X_e Z_f on an n-qubit block; e and f are bitmasks (bit i = qubit i)."""

    e: int
    f: int
    n: int

    @classmethod
    def identity(cls, n: int) -> "PauliError":
        return cls(0, 0, n)

    @classmethod
    def from_vectors(cls, e: BinaryVector, f: BinaryVector) -> "PauliError":
        assert e.n == f.n
        return cls(e.mask, f.mask, e.n)

    def copy(self) -> "PauliError":
        return PauliError(self.e, self.f, self.n)

    def compose(self, other: "PauliError") -> "PauliError":
        assert self.n == other.n
        return PauliError(self.e ^ other.e, self.f ^ other.f, self.n)

    def is_identity(self) -> bool:
        return self.e == 0 and self.f == 0


def propagate_cnot(err: PauliError, c: int, t: int) -> PauliError:
    """Conjugate the error through CNOT(c -> t): X copies c->t, Z copies t->c."""
    if c == t or not (0 <= c < err.n) or not (0 <= t < err.n):
        raise IndexError(f"bad CNOT qubits ({c}, {t}) for n={err.n}")
    e, f = err.e, err.f
    if (e >> c) & 1:
        e ^= 1 << t
    if (f >> t) & 1:
        f ^= 1 << c
    return PauliError(e, f, err.n)


def transversal_block_cnot(blocks: list[PauliError], c_block: int,
                           t_block: int) -> None:
    """Qubit-wise CNOTs between two equal-size code blocks, in place."""
    cb = blocks[c_block]
    tb = blocks[t_block]
    if cb.n != tb.n:
        raise ValueError("blocks have different qubit counts")
    tb.e ^= cb.e
    cb.f ^= tb.f


@dataclass(frozen=True)
class NoiseModel:
    """Independent depolarizing noise at rate p (per prep and per CNOT)."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p = {self.p} outside [0, 1]")


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based stream: same (seed, stream) gives the same sequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, stream))))


def sample_depolarizing_1q(p: float, rng: np.random.Generator) -> tuple[int, int]:
    """(x, z) bits: (0,0) w.p. 1-p, each nonidentity Pauli w.p. p/3."""
    code = depol1_code(rng.random(), p)
    return (int(code in (1, 3)), int(code in (2, 3)))


def sample_depolarizing_2q(p: float, rng: np.random.Generator
                           ) -> tuple[tuple[int, int], tuple[int, int]]:
    """((x1,z1),(x2,z2)): identity w.p. 1-p, each of 15 pairs w.p. p/15."""
    code = depol2_code(rng.random(), p)
    out = []
    for q in (code >> 2, code & 3):
        out.append((int(q in (1, 2)), int(q in (2, 3))))
    return (out[0], out[1])


# --- circuits ---------------------------------------------------------------

PREP_ZERO = "P0"
PREP_PLUS = "P+"
CNOT = "CX"
MEAS_Z = "MZ"
MEAS_X = "MX"

_ONE_QUBIT_GATES = (PREP_ZERO, PREP_PLUS, MEAS_Z, MEAS_X)


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over n qubits.

    Gates are ("P0", q), ("P+", q), ("CX", c, t), ("MZ", q), ("MX", q).
    """

    n_qubits: int
    gates: tuple[tuple, ...]

    def __post_init__(self):
        measured = set()
        for gate in self.gates:
            kind = gate[0]
            qubits = gate[1:]
            if kind == CNOT:
                if len(qubits) != 2 or qubits[0] == qubits[1]:
                    raise ValueError(f"bad CNOT {gate}")
            elif kind in _ONE_QUBIT_GATES:
                if len(qubits) != 1:
                    raise ValueError(f"bad gate {gate}")
            else:
                raise ValueError(f"unknown gate kind {kind!r}")
            for q in qubits:
                if not (0 <= q < self.n_qubits):
                    raise ValueError(f"qubit {q} out of range in {gate}")
                if q in measured:
                    raise ValueError(f"gate {gate} acts on a measured qubit")
            if kind in (MEAS_Z, MEAS_X):
                measured.add(qubits[0])

    def cnots(self) -> list[tuple[int, int]]:
        return [(g[1], g[2]) for g in self.gates if g[0] == CNOT]

    def to_text(self) -> str:
        lines = []
        for gate in self.gates:
            lines.append(" ".join([gate[0]] + [str(q) for q in gate[1:]]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "Circuit":
        gates = []
        max_q = -1
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            kind, args = parts[0], parts[1:]
            try:
                qubits = [int(a) for a in args]
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {line!r}") from exc
            gates.append(tuple([kind] + qubits))
            max_q = max(max_q, *qubits)
        n = n_qubits if n_qubits is not None else max_q + 1
        return cls(n, tuple(gates))


def prep_from_uniforms(code: "CssCode", target: str, p: float,
                       draws: np.ndarray) -> PauliError:
    """Noisy-encoding Pauli frame from pre-drawn uniforms (kernel-identical).

    Consumes n + (number of encoder CNOTs) uniforms: one depolarizing event
    per qubit preparation, one two-qubit event after each CNOT.
    """
    enc_c, enc_t = code.encoder_cnot_arrays()
    e, f, off = prep_block(draws, 0, code.n, enc_c, enc_t, p)
    assert off == code.n + len(enc_c)
    return PauliError(int(e), int(f), code.n)


def simulate_noisy_prep(code: "CssCode", target: str, noise: NoiseModel,
                        rng: np.random.Generator) -> PauliError:
    """One noisy ancilla preparation through the code's encoding circuit.

    `target` in {"zero_L", "plus_L"} selects which stabilizer state the
    block notionally holds; the accumulated frame itself is basis-agnostic
    (the noise model does not depend on the data qubit's preparation basis).
    """
    if target not in ("zero_L", "plus_L"):
        raise ValueError(f"unknown target {target!r}")
    draws = rng.random(code.n + len(code.encoding_circuit.cnots()))
    return prep_from_uniforms(code, target, noise.p, draws)


def frame_measurement_parities(err: PauliError, code: "CssCode",
                               basis: str) -> tuple[BinaryVector, int]:
    """Parities a bitwise measurement of the block would yield.

    Z-basis measurement reads the X part: returns (e H_Z^T, parity of e on
    the logical-Z support).  X-basis reads the Z part against H_X and
    logical X.  The unknown codeword offset of the raw outcomes is already
    annihilated by the check matrix, so the frame gives the parities
    directly.
    """
    if err.n != code.n:
        raise ValueError(f"frame size {err.n} != code n {code.n}")
    if basis == "Z":
        v = BinaryVector(err.e, err.n)
        return code.syndrome_X(v), code.logical_parity(v, "Zbar")
    if basis == "X":
        v = BinaryVector(err.f, err.n)
        return code.syndrome_Z(v), code.logical_parity(v, "Xbar")
    raise ValueError(f"basis must be 'Z' or 'X', got {basis!r}")

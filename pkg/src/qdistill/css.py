"""[[n,k]] CSS codes: validation, syndromes, logicals, and CNOT-only encoders.

The check matrix convention follows the standard-form layout
[H_X | H_Z] = [[I_r A B | 0 0 0], [0 0 0 | D I_s F]]: after the qubit
permutation, positions 0..r-1 are |+>-prepared (X generators), positions
r..r+s-1 are |0>-prepared (Z generators), and the remaining k positions
carry data.  The encoding circuit is the reverse of the CNOT sequence that
Gaussian-eliminates this form down to bare single-qubit stabilizers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import classical
from .classical import _coset_leader_table
from .gf2 import (
    BinaryMatrix,
    BinaryVector,
    DimensionError,
    in_rowspace,
    mat_mul,
    rank,
    weight,
)
from .pauli import CNOT, PREP_PLUS, PREP_ZERO, Circuit

CSS_BUILTIN_NAMES = ("steane", "golay_q")


class CssError(ValueError):
    """The supplied matrices do not define a usable CSS code."""


class OrthogonalityError(CssError):
    """H_X H_Z^T != 0."""


class LogicalDimensionError(CssError):
    """The code does not encode the required number of logical qubits."""


@dataclass(frozen=True)
class StandardFormCheck:
    """Blocks of the standard-form check matrix, plus the qubit permutation.

    r counts the X generators (identity block [I_r A B] in the X half), s
    the Z generators ([D I_s F] in the Z half).  qubit_perm[pos] is the
    original qubit sitting at standard-form position pos.
    """

    r: int
    s: int
    A: BinaryMatrix
    B: BinaryMatrix
    D: BinaryMatrix
    F: BinaryMatrix
    qubit_perm: tuple[int, ...]
    hx_std: BinaryMatrix
    hz_std: BinaryMatrix


def _front_pivot_reduce(rows: list[int], cols: int, first_col: int
                        ) -> tuple[list[int], list[int]]:
    """RREF with pivot columns collected left-to-right starting at first_col."""
    pivots = []
    pivot_row = 0
    for col in range(first_col, cols):
        sel = None
        for i in range(pivot_row, len(rows)):
            if (rows[i] >> col) & 1:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        for i in range(len(rows)):
            if i != pivot_row and (rows[i] >> col) & 1:
                rows[i] ^= rows[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows, pivots


def _apply_col_order(rows: list[int], order: list[int]) -> list[int]:
    out = []
    for r in rows:
        mask = 0
        for newpos, old in enumerate(order):
            mask |= ((r >> old) & 1) << newpos
        out.append(mask)
    return out


@dataclass(eq=False)
class CssCode:
    """An [[n, n-r_Z-r_X]] CSS code (k = 1 for the distillation targets)."""

    name: str
    n: int
    hz: BinaryMatrix
    hx: BinaryMatrix
    logical_x: BinaryVector | None
    logical_z: BinaryVector | None
    standard: StandardFormCheck
    encoding_circuit: Circuit
    coset_x: np.ndarray = field(repr=False)   # X-syndrome -> X coset leader
    coset_z: np.ndarray = field(repr=False)   # Z-syndrome -> Z coset leader

    @property
    def r_z(self) -> int:
        return self.hz.nrows

    @property
    def r_x(self) -> int:
        return self.hx.nrows

    @property
    def k(self) -> int:
        return self.n - self.r_z - self.r_x

    def syndrome_X(self, e: BinaryVector) -> BinaryVector:
        """X-error syndrome e H_Z^T."""
        if e.n != self.n:
            raise DimensionError(f"vector length {e.n} != n {self.n}")
        return self.hz.mul_vec(e)

    def syndrome_Z(self, f: BinaryVector) -> BinaryVector:
        """Z-error syndrome f H_X^T."""
        if f.n != self.n:
            raise DimensionError(f"vector length {f.n} != n {self.n}")
        return self.hx.mul_vec(f)

    def logical_parity(self, v: BinaryVector, which: str) -> int:
        if v.n != self.n:
            raise DimensionError(f"vector length {v.n} != n {self.n}")
        if which == "Zbar":
            return v.dot(self.logical_z)
        if which == "Xbar":
            return v.dot(self.logical_x)
        raise ValueError(f"which must be 'Zbar' or 'Xbar', got {which!r}")

    def hz_masks(self) -> np.ndarray:
        return np.array(self.hz.rows, dtype=np.int64).reshape(self.r_z)

    def hx_masks(self) -> np.ndarray:
        return np.array(self.hx.rows, dtype=np.int64).reshape(self.r_x)

    def encoder_cnot_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        cnots = self.encoding_circuit.cnots()
        c = np.array([g[0] for g in cnots], dtype=np.int64)
        t = np.array([g[1] for g in cnots], dtype=np.int64)
        return c, t


def standard_form(hz: BinaryMatrix, hx: BinaryMatrix
                  ) -> StandardFormCheck:
    """Standard-form blocks of the check matrix, via row ops and qubit swaps."""
    n = hz.cols
    r = hx.nrows
    s = hz.nrows
    k = n - r - s
    ex = list(hx.rows)
    ez = list(hz.rows)
    perm = list(range(n))
    # X half -> [I_r A B]
    ex, piv_x = _front_pivot_reduce(ex, n, 0)
    if len(piv_x) != r:
        raise CssError("H_X is not full row rank")
    order = piv_x + [c for c in range(n) if c not in set(piv_x)]
    ex = _apply_col_order(ex, order)
    ez = _apply_col_order(ez, order)
    perm = [perm[c] for c in order]
    # Z half -> [D I_s F]; pivots exist among columns >= r by commutation.
    ez, piv_z = _front_pivot_reduce(ez, n, r)
    if len(piv_z) != s:
        raise CssError("H_Z is not full row rank")
    order = list(range(r)) + piv_z + [c for c in range(r, n)
                                      if c not in set(piv_z)]
    ex = _apply_col_order(ex, order)
    ez = _apply_col_order(ez, order)
    perm = [perm[c] for c in order]

    def block(rows, lo, hi):
        return BinaryMatrix(tuple((m >> lo) & ((1 << (hi - lo)) - 1)
                                  for m in rows), hi - lo)

    return StandardFormCheck(
        r=r, s=s,
        A=block(ex, r, r + s), B=block(ex, r + s, n),
        D=block(ez, 0, r), F=block(ez, r + s, n),
        qubit_perm=tuple(perm),
        hx_std=BinaryMatrix(tuple(ex), n),
        hz_std=BinaryMatrix(tuple(ez), n),
    )


def synthesize_encoding_circuit(n: int, std: StandardFormCheck,
                                target_prep: str = PREP_ZERO) -> Circuit:
    """CNOT-only encoder from the standard form.

    Builds the decoding sequence that clears A and B (controls on the first
    r positions) and then F (controls on the data positions); the reverse
    of that sequence, mapped back through the qubit permutation, is the
    encoder.  Preparation gates put |+> on the r X-generator positions and
    |0> on the s Z-generator positions; data positions get `target_prep`.
    """
    r, s = std.r, std.s
    m = n
    work = ([(e, 0) for e in std.hx_std.rows]
            + [(0, f) for f in std.hz_std.rows])

    def apply(gate_list, c, t):
        gate_list.append((c, t))
        for idx, (e, f) in enumerate(work):
            if (e >> c) & 1:
                e ^= 1 << t
            if (f >> t) & 1:
                f ^= 1 << c
            work[idx] = (e, f)

    decode: list[tuple[int, int]] = []
    for i in range(r):
        for t in range(r, m):
            if (work[i][0] >> t) & 1:
                apply(decode, i, t)
    for u in range(s):
        for c in range(r + s, m):
            if (work[r + u][1] >> c) & 1:
                apply(decode, c, r + u)
    for i in range(r):
        assert work[i] == (1 << i, 0), "X block failed to reduce"
    for u in range(s):
        assert work[r + u] == (0, 1 << (r + u)), "Z block failed to reduce"

    perm = std.qubit_perm
    gates: list[tuple] = []
    for i in range(r):
        gates.append((PREP_PLUS, perm[i]))
    for u in range(s):
        gates.append((PREP_ZERO, perm[r + u]))
    for pos in range(r + s, m):
        gates.append((target_prep, perm[pos]))
    for c, t in reversed(decode):
        gates.append((CNOT, perm[c], perm[t]))
    return Circuit(n, tuple(gates))


def _min_weight_coset_rep(v0: int, basis: tuple[int, ...], n: int) -> int:
    """Minimum-weight element of v0 + span(basis); ties lexicographically."""
    best = v0
    best_key = (weight(v0), tuple((v0 >> i) & 1 for i in range(n)))
    word = v0
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        key = (weight(word), tuple((word >> i) & 1 for i in range(n)))
        if key < best_key:
            best, best_key = word, key
    return best


def _derive_logicals(hz: BinaryMatrix, hx: BinaryMatrix
                     ) -> tuple[BinaryVector, BinaryVector]:
    from .gf2 import nullspace_basis
    n = hz.cols
    # logical X: in nullspace(H_Z), outside rowspace(H_X)
    out = []
    for stab, other in ((hx, hz), (hz, hx)):
        ns = nullspace_basis(other)
        v0 = None
        for row in ns.rows:
            if not in_rowspace(stab, BinaryVector(row, n)):
                v0 = row
                break
        if v0 is None:
            raise LogicalDimensionError("no logical operator found")
        out.append(BinaryVector(_min_weight_coset_rep(v0, stab.rows, n), n))
    logical_x, logical_z = out
    return logical_x, logical_z


def from_matrices(hz: BinaryMatrix, hx: BinaryMatrix,
                  logical_hint: tuple[BinaryVector, BinaryVector] | None = None,
                  name: str = "custom",
                  require_single_logical: bool = True) -> CssCode:
    """Validate (H_Z, H_X) and assemble the full code object."""
    n = hz.cols
    if hx.cols != n:
        raise DimensionError("H_Z and H_X have different column counts")
    if rank(hz) != hz.nrows:
        raise CssError("H_Z is not full row rank")
    if rank(hx) != hx.nrows:
        raise CssError("H_X is not full row rank")
    prod = mat_mul(hx, hz.transpose())
    if any(prod.rows):
        raise OrthogonalityError("H_X H_Z^T != 0")
    k = n - hz.nrows - hx.nrows
    if require_single_logical and k != 1:
        raise LogicalDimensionError(
            f"r_Z + r_X = {hz.nrows + hx.nrows} must equal n-1 = {n - 1}")
    if k < 1:
        raise LogicalDimensionError(f"k = {k} must be >= 1")

    if logical_hint is not None:
        logical_x, logical_z = logical_hint
        for v, stab, other, label in ((logical_x, hx, hz, "X"),
                                      (logical_z, hz, hx, "Z")):
            if any(other.mul_vec(v).bits()):
                raise CssError(f"logical {label} hint anticommutes with stabilizers")
            if in_rowspace(stab, v):
                raise CssError(f"logical {label} hint is a stabilizer")
    elif k == 1:
        logical_x, logical_z = _derive_logicals(hz, hx)
    else:
        logical_x = logical_z = None
    if logical_x is not None and logical_x.dot(logical_z) != 1:
        raise CssError("logical X and Z do not anticommute")

    std = standard_form(hz, hx)
    circuit = synthesize_encoding_circuit(n, std)
    coset_x = _coset_leader_table(hz.rows, n) if hz.nrows else np.zeros(1, np.int64)
    coset_z = _coset_leader_table(hx.rows, n) if hx.nrows else np.zeros(1, np.int64)
    return CssCode(name=name, n=n, hz=hz, hx=hx,
                   logical_x=logical_x, logical_z=logical_z,
                   standard=std, encoding_circuit=circuit,
                   coset_x=coset_x, coset_z=coset_z)


@lru_cache(maxsize=None)
def builtin_css(name: str) -> CssCode:
    """steane ([[7,1,3]]) or golay_q ([[23,1,7]])."""
    if name == "steane":
        h = classical._hamming74_check()
        logical = BinaryVector.from_string("1101000")   # X1X2X4 / Z1Z2Z4
        return from_matrices(h, h, logical_hint=(logical, logical), name=name)
    if name == "golay_q":
        h = classical.golay_parity_check()
        return from_matrices(h, h, name=name)
    raise CssError(f"unknown CSS code {name!r}; built-ins are "
                   f"{', '.join(CSS_BUILTIN_NAMES)}")

"""Dense GF(2) linear algebra on bit-packed rows.

Every vector and matrix row is stored as a Python int bitmask, bit i being
column i.  At the sizes this package works with (<= 23 columns for code
matrices, <= 46 for symplectic rows) a single machine word holds a row, so
all row operations are single XORs.  Public semantics are stated purely at
the bit level; the packing never leaks to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Matrix/vector dimensions do not conform."""


class RankError(ValueError):
    """An operation required full row rank and the input does not have it."""


def parity(x: int) -> int:
    """Parity (XOR-fold) of the set bits of a mask."""
    return bin(x).count("1") & 1


def weight(x: int) -> int:
    """Hamming weight of a mask."""
    return bin(x).count("1")


def bits_to_mask(bits: Iterable[int]) -> int:
    mask = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"entries must be 0/1, got {b!r}")
        mask |= b << i
    return mask


def mask_to_bits(mask: int, length: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(length)]


@dataclass(frozen=True)
class BinaryVector:
    """A length-`n` row vector over GF(2)."""

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.mask >> self.n:
            raise DimensionError(f"mask {self.mask:#x} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BinaryVector":
        return cls(bits_to_mask(bits), len(bits))

    @classmethod
    def from_string(cls, s: str) -> "BinaryVector":
        return cls.from_bits([int(c) for c in s])

    def bits(self) -> list[int]:
        return mask_to_bits(self.mask, self.n)

    def weight(self) -> int:
        return weight(self.mask)

    def dot(self, other: "BinaryVector") -> int:
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return parity(self.mask & other.mask)

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return BinaryVector(self.mask ^ other.mask, self.n)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits())


@dataclass(frozen=True)
class BinaryMatrix:
    """A dense GF(2) matrix, one int mask per row."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        for r in self.rows:
            if r >> self.cols:
                raise DimensionError(f"row {r:#x} does not fit in {self.cols} columns")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        if not rows:
            raise DimensionError("matrix needs at least one row; use zeros()/empty()")
        ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
        return cls(tuple(bits_to_mask(r) for r in rows), ncols)

    @classmethod
    def from_masks(cls, masks: Sequence[int], cols: int) -> "BinaryMatrix":
        return cls(tuple(int(m) for m in masks), cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BinaryMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def empty(cls, ncols: int) -> "BinaryMatrix":
        """A 0 x ncols matrix (useful for CSS codes with no X or Z checks)."""
        return cls((), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [mask_to_bits(r, self.cols) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BinaryVector:
        return BinaryVector(self.rows[i], self.cols)

    def transpose(self) -> "BinaryMatrix":
        out = []
        for j in range(self.cols):
            mask = 0
            for i, r in enumerate(self.rows):
                mask |= ((r >> j) & 1) << i
            out.append(mask)
        return BinaryMatrix(tuple(out), self.nrows)

    def mul_vec(self, v: BinaryVector) -> BinaryVector:
        """Matrix-vector product A v^T, returned as a length-nrows vector."""
        if v.n != self.cols:
            raise DimensionError(f"vector length {v.n} != cols {self.cols}")
        mask = 0
        for i, r in enumerate(self.rows):
            mask |= parity(r & v.mask) << i
        return BinaryVector(mask, self.nrows)

    def permute_cols(self, perm: Sequence[int]) -> "BinaryMatrix":
        """Column permutation: result[:, j] = self[:, perm[j]]."""
        if sorted(perm) != list(range(self.cols)):
            raise DimensionError("perm is not a permutation of the columns")
        out = []
        for r in self.rows:
            mask = 0
            for j, p in enumerate(perm):
                mask |= ((r >> p) & 1) << j
            out.append(mask)
        return BinaryMatrix(tuple(out), self.cols)


def mat_mul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Mod-2 matrix product A.B."""
    if a.cols != b.nrows:
        raise DimensionError(f"inner dimensions differ: {a.cols} vs {b.nrows}")
    out = []
    for r in a.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc ^= b.rows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BinaryMatrix(tuple(out), b.cols)


def _eliminate(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """Row-reduce in place toward RREF; returns (rows, pivot column list).

    Pivot search is leftmost column first, lowest row first, so the result
    is deterministic for a given input.
    """
    pivots: list[int] = []
    pivot_row = 0
    for col in range(cols):
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


def rank(a: BinaryMatrix) -> int:
    """GF(2) row rank via Gaussian elimination."""
    _, pivots = _eliminate(list(a.rows), a.cols)
    return len(pivots)


def row_reduce(a: BinaryMatrix) -> tuple[BinaryMatrix, list[int]]:
    """Reduced row-echelon form and its pivot columns (zero rows dropped)."""
    rows, pivots = _eliminate(list(a.rows), a.cols)
    return BinaryMatrix(tuple(rows[: len(pivots)]), a.cols), pivots


def in_rowspace(a: BinaryMatrix, v: BinaryVector) -> bool:
    if v.n != a.cols:
        raise DimensionError(f"vector length {v.n} != cols {a.cols}")
    reduced, pivots = row_reduce(a)
    m = v.mask
    for r, col in zip(reduced.rows, pivots):
        if (m >> col) & 1:
            m ^= r
    return m == 0


def rowspace_equal(a: BinaryMatrix, b: BinaryMatrix) -> bool:
    if a.cols != b.cols:
        raise DimensionError("column counts differ")
    ra, pa = row_reduce(a)
    rb, pb = row_reduce(b)
    return ra.rows == rb.rows and pa == pb


def systematic_form(h: BinaryMatrix) -> tuple[BinaryMatrix, list[int]]:
    """Bring a full-row-rank check matrix to the form [A^T | I_r].

    Returns (H_sys, col_perm) with H_sys[:, j] = (row-reduced H)[:, col_perm[j]].
    Pivots are searched from the rightmost column so a matrix that already
    ends in an identity block comes back unchanged with the identity
    permutation.
    """
    r = h.nrows
    m = h.cols
    rows = list(h.rows)
    pivot_of_col: dict[int, int] = {}
    used: set[int] = set()
    for col in range(m - 1, -1, -1):
        sel = None
        for i in range(len(rows)):
            if i not in used and (rows[i] >> col) & 1:
                sel = i
                break
        if sel is None:
            continue
        for i in range(len(rows)):
            if i != sel and (rows[i] >> col) & 1:
                rows[i] ^= rows[sel]
        pivot_of_col[col] = sel
        used.add(sel)
        if len(used) == r:
            break
    if len(used) < r:
        raise RankError(f"matrix has rank {len(used)} < {r} rows")
    pivot_cols = sorted(pivot_of_col)
    free_cols = [c for c in range(m) if c not in pivot_of_col]
    perm = free_cols + pivot_cols
    ordered = [rows[pivot_of_col[c]] for c in pivot_cols]
    out = []
    for row in ordered:
        mask = 0
        for j, p in enumerate(perm):
            mask |= ((row >> p) & 1) << j
        out.append(mask)
    return BinaryMatrix(tuple(out), m), perm


def nullspace_basis(a: BinaryMatrix) -> BinaryMatrix:
    """A basis (possibly empty) of {v : A v^T = 0}, one row per basis vector."""
    reduced, pivots = row_reduce(a)
    pivot_set = set(pivots)
    free = [j for j in range(a.cols) if j not in pivot_set]
    out = []
    for fcol in free:
        mask = 1 << fcol
        for r, pcol in zip(reduced.rows, pivots):
            if (r >> fcol) & 1:
                mask |= 1 << pcol
        out.append(mask)
    return BinaryMatrix(tuple(out), a.cols)

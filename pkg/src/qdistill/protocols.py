"""The four Pauli-frame procedures: Steane extraction, Distillation
Protocols I and II, and ancilla-saving syndrome extraction.

All routines operate on lists of PauliError frames and never touch
amplitudes; corrections are applied in-frame.  Block-level CNOTs follow the
transversal rule (X copies control->target, Z copies target->control), so
back-action of parity ancillas onto survivors emerges from the frame
algebra rather than being modelled separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classical import ClassicalCode, _coset_leader_table
from .css import CssCode
from .gf2 import BinaryVector, bits_to_mask, parity
from .pauli import (
    CNOT,
    Circuit,
    PauliError,
    frame_measurement_parities,
    transversal_block_cnot,
)


class ProtocolError(ValueError):
    """Block counts or codes do not match the protocol's requirements."""


@dataclass(frozen=True)
class DistillationConfig:
    css: CssCode
    code_round1: ClassicalCode
    code_round2: ClassicalCode
    target: str = "zero_L"          # or "plus_L"
    correct_logical: bool = True

    def __post_init__(self):
        if self.target not in ("zero_L", "plus_L"):
            raise ProtocolError(f"unknown target {self.target!r}")


@dataclass
class SyndromeRecord:
    """Estimated per-block syndromes (and decoded logical-flip bits)."""

    s_x: BinaryVector
    s_z: BinaryVector
    logical_x_flip: int = 0
    logical_z_flip: int = 0


def build_UD(code_d: ClassicalCode) -> Circuit:
    """Block-level coupling circuit: CNOT i -> k+j wherever A[i,j] = 1."""
    gates = []
    for i in range(code_d.k):
        for j in range(code_d.r):
            if code_d.A.entry(i, j):
                gates.append((CNOT, i, code_d.k + j))
    return Circuit(code_d.m, tuple(gates))


def build_UDH(code_d: ClassicalCode) -> Circuit:
    """The Z-round coupling circuit: controls and targets of U_D swapped."""
    gates = []
    for i in range(code_d.k):
        for j in range(code_d.r):
            if code_d.A.entry(i, j):
                gates.append((CNOT, code_d.k + j, i))
    return Circuit(code_d.m, tuple(gates))


def _decode_bitwise(sigs: list[BinaryVector], code_d: ClassicalCode,
                    n_bits: int) -> list[int]:
    """Recover per-block syndrome bits from the measured parity rows.

    For each syndrome-bit position j, the r measured parities form a
    classical syndrome of the coupling code; its coset leader gives the
    estimated bit j of every block.
    """
    r = code_d.r
    est = [0] * code_d.m
    for j in range(n_bits):
        syn = 0
        for u in range(r):
            syn |= ((sigs[u].mask >> j) & 1) << u
        ehat = code_d.decode(BinaryVector(syn, r)).mask
        for i in range(code_d.m):
            if (ehat >> i) & 1:
                est[i] |= 1 << j
    return est


def _decode_logical_row(lams: list[int], code_d: ClassicalCode) -> int:
    """Per-block raw logical parities decoded like any other bit row."""
    syn = 0
    for u in range(code_d.r):
        syn |= lams[u] << u
    return code_d.decode(BinaryVector(syn, code_d.r)).mask


def _lift_correction(est: int, lbit: int, coset: "np.ndarray",
                     parity_mask: int, flip_mask: int) -> int:
    """Error estimate consistent with a decoded (syndrome, logical parity).

    The coset leader fixes the syndrome; the conjugate logical operator is
    folded in when the leader's parity on `parity_mask` disagrees with the
    decoded logical bit, so the lift reproduces both observables.
    """
    corr = int(coset[est])
    if parity(corr & parity_mask) != lbit:
        corr ^= flip_mask
    return corr


def distill_round(blocks: list[PauliError], code_d: ClassicalCode,
                  css: CssCode, round_type: str, target: str,
                  correct_logical: bool = True,
                  trace: list | None = None
                  ) -> tuple[list[PauliError], list[SyndromeRecord]]:
    """One distillation round (steps 2-5 of Protocol I, or their Z duals).

    X_round couples with U_D and measures the r parity blocks in the Z
    basis; Z_round uses U_D^H and the X basis.  Blocks are copied, the last
    r are consumed, and the k survivors come back corrected in-frame.
    """
    if round_type not in ("X_round", "Z_round"):
        raise ProtocolError(f"unknown round type {round_type!r}")
    m, k, r = code_d.m, code_d.k, code_d.r
    if len(blocks) != m:
        raise ProtocolError(f"need {m} blocks, got {len(blocks)}")
    for b in blocks:
        if b.n != css.n:
            raise ProtocolError("block size does not match the CSS code")
    x_round = round_type == "X_round"
    blocks = [b.copy() for b in blocks]
    coupling = build_UD(code_d) if x_round else build_UDH(code_d)
    for _, c, t in coupling.gates:
        transversal_block_cnot(blocks, c, t)

    basis = "Z" if x_round else "X"
    sigs, lams = [], []
    for u in range(r):
        s, lam = frame_measurement_parities(blocks[k + u], css, basis)
        sigs.append(s)
        lams.append(lam)
        if trace is not None:
            trace.append({"event": "measured", "round": round_type,
                          "parity_block": u, "sigma": str(s), "logical": lam})

    n_bits = css.r_z if x_round else css.r_x
    decode_logical = correct_logical and (
        (x_round and target == "zero_L") or (not x_round and target == "plus_L"))
    est = _decode_bitwise(sigs, code_d, n_bits)
    lhat = _decode_logical_row(lams, code_d) if decode_logical else 0

    survivors = blocks[:k]
    records = []
    for i in range(k):
        lbit = (lhat >> i) & 1
        if x_round:
            if decode_logical:
                corr = _lift_correction(est[i], lbit, css.coset_x,
                                        css.logical_z.mask,
                                        css.logical_x.mask)
            else:
                corr = int(css.coset_x[est[i]])
            survivors[i].e ^= corr
            rec = SyndromeRecord(s_x=BinaryVector(est[i], n_bits),
                                 s_z=BinaryVector(0, css.r_x),
                                 logical_x_flip=lbit)
        else:
            if decode_logical:
                corr = _lift_correction(est[i], lbit, css.coset_z,
                                        css.logical_x.mask,
                                        css.logical_z.mask)
            else:
                corr = int(css.coset_z[est[i]])
            survivors[i].f ^= corr
            rec = SyndromeRecord(s_x=BinaryVector(0, css.r_z),
                                 s_z=BinaryVector(est[i], n_bits),
                                 logical_z_flip=lbit)
        records.append(rec)
        if trace is not None:
            trace.append({"event": "decoded", "round": round_type,
                          "survivor": i,
                          "s_tilde": str(BinaryVector(est[i], n_bits)),
                          "logical": lbit,
                          "correction": _correction_name(corr, css, x_round)})
    return survivors, records


def _correction_name(corr: int, css: CssCode, x_round: bool) -> str:
    if corr == 0:
        return "none"
    logical = css.logical_x.mask if x_round else css.logical_z.mask
    if corr == logical:
        return "Xbar" if x_round else "Zbar"
    kind = "X" if x_round else "Z"
    qubits = [str(i + 1) for i in range(css.n) if (corr >> i) & 1]
    return kind + "_" + ",".join(qubits)


def distill_protocol_I(pool: list[PauliError], cfg: DistillationConfig
                       ) -> list[PauliError]:
    """Two-round distillation with cross-round regrouping.

    The pool splits into groups of m1 for the X round; the survivor grid is
    then read across round-1 groups (a transposition interleaver) so no two
    Z-round groupmates share a round-1 group.
    """
    m1, k1 = cfg.code_round1.m, cfg.code_round1.k
    m2, k2 = cfg.code_round2.m, cfg.code_round2.k
    if len(pool) == 0 or len(pool) % m1 != 0:
        raise ProtocolError(f"pool size {len(pool)} is not a multiple of m1 = {m1}")
    n_groups = len(pool) // m1
    if n_groups % m2 != 0:
        raise ProtocolError(
            f"{n_groups} round-1 groups cannot form groups of m2 = {m2}")
    grid: list[list[tuple[PauliError, int]]] = [[] for _ in range(k1)]
    for g in range(n_groups):
        group = pool[g * m1:(g + 1) * m1]
        survivors, _ = distill_round(group, cfg.code_round1, cfg.css,
                                     "X_round", cfg.target,
                                     cfg.correct_logical)
        for i, s in enumerate(survivors):
            grid[i].append((s, g))
    out = []
    for i in range(k1):
        for chunk in range(n_groups // m2):
            entry = grid[i][chunk * m2:(chunk + 1) * m2]
            origins = [g for _, g in entry]
            assert len(set(origins)) == m2, "interleaver reunited round-1 groupmates"
            survivors, _ = distill_round([b for b, _ in entry],
                                         cfg.code_round2, cfg.css,
                                         "Z_round", cfg.target,
                                         cfg.correct_logical)
            out.extend(survivors)
    return out


def _pattern_cnot(mask: int, c: int, t: int, x_part: bool) -> int:
    """Propagate a one-css-qubit cross-block pattern through a block CNOT."""
    if x_part:
        if (mask >> c) & 1:
            mask ^= 1 << t
    else:
        if (mask >> t) & 1:
            mask ^= 1 << c
    return mask


def _protocol_ii_decoders(qd: CssCode):
    """Effective classical decode tables for Protocol II's measurements.

    Propagating a unit X (resp. Z) error on each block through the reverse
    encoding circuit and reading the Z-measured (resp. X-measured) block
    positions gives the linear map from per-block error bits to observed
    parities; its coset-leader table is the protocol's classical decoder.
    """
    m = qd.n
    std = qd.standard
    decode_cnots = list(reversed(qd.encoding_circuit.cnots()))
    z_positions = [std.qubit_perm[std.r + u] for u in range(std.s)]
    x_positions = [std.qubit_perm[i] for i in range(std.r)]
    mx_rows = [0] * std.s
    mz_rows = [0] * std.r
    for b in range(m):
        ept = 1 << b
        fpt = 1 << b
        for c, t in decode_cnots:
            ept = _pattern_cnot(ept, c, t, True)
            fpt = _pattern_cnot(fpt, c, t, False)
        for u, pos in enumerate(z_positions):
            mx_rows[u] |= ((ept >> pos) & 1) << b
        for u, pos in enumerate(x_positions):
            mz_rows[u] |= ((fpt >> pos) & 1) << b
    table_x = _coset_leader_table(tuple(mx_rows), m) if std.s else None
    table_z = _coset_leader_table(tuple(mz_rows), m) if std.r else None
    return (decode_cnots, z_positions, x_positions, table_x, table_z,
            mx_rows, mz_rows)


def distill_protocol_II(blocks: list[PauliError], qd: CssCode, css: CssCode,
                        target: str = "zero_L", correct_logical: bool = True
                        ) -> tuple[list[PauliError], list[SyndromeRecord]]:
    """Distillation by an [[m,k]] CSS coupling code in a single pass.

    Runs the reverse of qd's encoding circuit transversally on m noisy
    blocks, measures the blocks sitting at qd's |0> (Z basis) and |+>
    (X basis) positions, and decodes both error types per syndrome bit.
    """
    m = qd.n
    if len(blocks) != m:
        raise ProtocolError(f"need {m} blocks, got {len(blocks)}")
    std = qd.standard
    blocks = [b.copy() for b in blocks]
    (decode_cnots, z_positions, x_positions,
     table_x, table_z, mx_rows, mz_rows) = _protocol_ii_decoders(qd)
    for c, t in decode_cnots:
        transversal_block_cnot(blocks, c, t)

    def decode(positions, table, basis, n_bits, decode_logical):
        sigs, lams = [], []
        for pos in positions:
            s, lam = frame_measurement_parities(blocks[pos], css, basis)
            sigs.append(s)
            lams.append(lam)
        r = len(positions)
        x_part = basis == "Z"

        def estimate(syn):
            # The table's leaders live in pre-circuit block coordinates;
            # push them through the decoding CNOTs so the correction lands
            # on the blocks as they stand after the circuit.
            ehat = int(table[syn])
            for c, t in decode_cnots:
                ehat = _pattern_cnot(ehat, c, t, x_part)
            return ehat

        est = [0] * m
        for j in range(n_bits):
            syn = 0
            for u in range(r):
                syn |= ((sigs[u].mask >> j) & 1) << u
            ehat = estimate(syn)
            for b in range(m):
                if (ehat >> b) & 1:
                    est[b] |= 1 << j
        lhat = 0
        if decode_logical:
            syn = 0
            for u in range(r):
                syn |= lams[u] << u
            lhat = estimate(syn)
        return est, lhat

    dec_x = correct_logical and target == "zero_L"
    dec_z = correct_logical and target == "plus_L"
    est_x, lhat_x = ([0] * m, 0)
    if std.s:
        est_x, lhat_x = decode(z_positions, table_x, "Z", css.r_z, dec_x)
    est_z, lhat_z = ([0] * m, 0)
    if std.r:
        est_z, lhat_z = decode(x_positions, table_z, "X", css.r_x, dec_z)

    data_positions = [std.qubit_perm[pos] for pos in range(std.r + std.s, m)]
    survivors, records = [], []
    for pos in data_positions:
        blk = blocks[pos]
        if dec_x:
            corr_x = _lift_correction(est_x[pos], (lhat_x >> pos) & 1,
                                      css.coset_x, css.logical_z.mask,
                                      css.logical_x.mask)
        else:
            corr_x = int(css.coset_x[est_x[pos]])
        if dec_z:
            corr_z = _lift_correction(est_z[pos], (lhat_z >> pos) & 1,
                                      css.coset_z, css.logical_x.mask,
                                      css.logical_z.mask)
        else:
            corr_z = int(css.coset_z[est_z[pos]])
        blk.e ^= corr_x
        blk.f ^= corr_z
        survivors.append(blk)
        records.append(SyndromeRecord(
            s_x=BinaryVector(est_x[pos], css.r_z),
            s_z=BinaryVector(est_z[pos], css.r_x),
            logical_x_flip=(lhat_x >> pos) & 1,
            logical_z_flip=(lhat_z >> pos) & 1))
    return survivors, records


def _block_cnot(control: PauliError, targetb: PauliError) -> None:
    targetb.e ^= control.e
    control.f ^= targetb.f


def steane_extraction(data: PauliError, anc_plus: PauliError,
                      anc_zero: PauliError, css: CssCode
                      ) -> tuple[BinaryVector, BinaryVector]:
    """Steane syndrome extraction with two logical ancillas.

    CNOT data -> |+>_L ancilla copies X errors out; CNOT |0>_L ancilla ->
    data copies Z errors out.  Returns the observed (s_X, s_Z); the data
    frame keeps the ancillas' back-action.
    """
    for b in (data, anc_plus, anc_zero):
        if b.n != css.n:
            raise ProtocolError("frame size does not match the CSS code")
    _block_cnot(data, anc_plus)
    s_x, _ = frame_measurement_parities(anc_plus, css, "Z")
    _block_cnot(anc_zero, data)
    s_z, _ = frame_measurement_parities(anc_zero, css, "X")
    return s_x, s_z


def ancilla_saving(data: list[PauliError], anc_plus: list[PauliError],
                   anc_zero: list[PauliError], code_d: ClassicalCode,
                   css: CssCode) -> list[SyndromeRecord]:
    """Shared-ancilla Steane extraction over m data blocks with r of each
    ancilla type, wired by the coupling matrix A of the classical code.

    Data block k+j feeds ancilla j directly; data block i <= k feeds
    ancilla j wherever A[i,j] = 1.  Classical decoding then separates the
    per-block syndromes, including those of the m-k directly-wired blocks.
    Ancilla back-action is left on the data frames; no correction is
    applied here.
    """
    m, k, r = code_d.m, code_d.k, code_d.r
    if len(data) != m or len(anc_plus) != r or len(anc_zero) != r:
        raise ProtocolError(
            f"need {m} data and {r}+{r} ancilla blocks, got "
            f"{len(data)}/{len(anc_plus)}/{len(anc_zero)}")
    for j in range(r):
        _block_cnot(data[k + j], anc_plus[j])
    for i in range(k):
        for j in range(r):
            if code_d.A.entry(i, j):
                _block_cnot(data[i], anc_plus[j])
    sigs, lams = [], []
    for j in range(r):
        s, lam = frame_measurement_parities(anc_plus[j], css, "Z")
        sigs.append(s)
        lams.append(lam)
    est_x = _decode_bitwise(sigs, code_d, css.r_z)

    for j in range(r):
        _block_cnot(anc_zero[j], data[k + j])
    for i in range(k):
        for j in range(r):
            if code_d.A.entry(i, j):
                _block_cnot(anc_zero[j], data[i])
    sigs, lams = [], []
    for j in range(r):
        s, lam = frame_measurement_parities(anc_zero[j], css, "X")
        sigs.append(s)
        lams.append(lam)
    est_z = _decode_bitwise(sigs, code_d, css.r_x)

    return [SyndromeRecord(s_x=BinaryVector(est_x[i], css.r_z),
                           s_z=BinaryVector(est_z[i], css.r_x))
            for i in range(m)]


def residual_class(frame: PauliError, css: CssCode, target: str) -> str:
    """clean / stabilizer / error classification of a residual frame."""
    if frame.is_identity():
        return "clean"
    e = BinaryVector(frame.e, frame.n)
    f = BinaryVector(frame.f, frame.n)
    if css.syndrome_X(e).mask or css.syndrome_Z(f).mask:
        return "error"
    logical = (css.logical_parity(e, "Zbar") if target == "zero_L"
               else css.logical_parity(f, "Xbar"))
    return "error" if logical else "stabilizer"

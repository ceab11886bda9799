"""Distillation protocols, Steane extraction, and ancilla saving."""

from itertools import combinations, product

import pytest

from qdistill.classical import builtin
from qdistill.css import builtin_css, from_matrices
from qdistill.gf2 import BinaryMatrix, BinaryVector, rowspace_equal
from qdistill.pauli import CNOT, PauliError
from qdistill.protocols import (
    DistillationConfig,
    ProtocolError,
    _protocol_ii_decoders,
    ancilla_saving,
    build_UD,
    build_UDH,
    distill_protocol_I,
    distill_protocol_II,
    distill_round,
    residual_class,
    steane_extraction,
)


STEANE = builtin_css("steane")
REP3 = builtin("rep3")

# The worked three-block example: an X error on the full logical support,
# a single X on qubit 3, and X errors on qubits 6 and 7.
EXAMPLE_INJECTIONS = ("1101000", "0010000", "0000011")


def _x_blocks(strings):
    return [PauliError(BinaryVector.from_string(s).mask, 0, 7) for s in strings]


class TestCoupling:
    def test_build_ud_rep3(self):
        assert build_UD(REP3).gates == ((CNOT, 0, 1), (CNOT, 0, 2))
        assert build_UDH(REP3).gates == ((CNOT, 1, 0), (CNOT, 2, 0))

    def test_build_ud_hamming74(self):
        code = builtin("hamming74")
        gates = build_UD(code).gates
        assert all(g[0] == CNOT and g[1] < 4 <= g[2] for g in gates)
        assert len(gates) == sum(
            code.A.entry(i, j) for i in range(code.k) for j in range(code.r))


class TestWorkedExample:
    def test_golden_trace(self):
        trace = []
        survivors, records = distill_round(
            _x_blocks(EXAMPLE_INJECTIONS), REP3, STEANE,
            "X_round", "zero_L", trace=trace)
        measured = [ev for ev in trace if ev["event"] == "measured"]
        assert [(ev["sigma"], ev["logical"]) for ev in measured] == [
            ("001", 1), ("100", 1)]
        decoded = [ev for ev in trace if ev["event"] == "decoded"]
        assert len(decoded) == 1
        assert decoded[0]["s_tilde"] == "000"
        assert decoded[0]["logical"] == 1
        assert decoded[0]["correction"] == "Xbar"
        assert len(survivors) == 1
        assert residual_class(survivors[0], STEANE, "zero_L") == "clean"
        assert records[0].logical_x_flip == 1

    def test_without_logical_correction_the_example_fails(self):
        survivors, _ = distill_round(
            _x_blocks(EXAMPLE_INJECTIONS), REP3, STEANE,
            "X_round", "zero_L", correct_logical=False)
        assert residual_class(survivors[0], STEANE, "zero_L") == "error"


class TestSingleFaultExhaustive:
    def test_protocol_i_corrects_every_single_fault(self):
        # 9 blocks x 7 qubits x 3 Pauli types = 189 injections; a single
        # fault must never survive two rounds of rep3 distillation.
        cfg = DistillationConfig(css=STEANE, code_round1=REP3,
                                 code_round2=REP3)
        failures = 0
        for blk in range(9):
            for q in range(7):
                for ex, fz in ((1, 0), (0, 1), (1, 1)):
                    pool = [PauliError(0, 0, 7) for _ in range(9)]
                    pool[blk] = PauliError(ex << q, fz << q, 7)
                    out = distill_protocol_I(pool, cfg)
                    assert len(out) == 1
                    if residual_class(out[0], STEANE, "zero_L") == "error":
                        failures += 1
        assert failures == 0

    def test_plus_target_corrects_single_z_faults(self):
        cfg = DistillationConfig(css=STEANE, code_round1=REP3,
                                 code_round2=REP3, target="plus_L")
        for blk in range(9):
            for q in range(7):
                pool = [PauliError(0, 0, 7) for _ in range(9)]
                pool[blk] = PauliError(0, 1 << q, 7)
                out = distill_protocol_I(pool, cfg)
                assert residual_class(out[0], STEANE, "plus_L") != "error"


class TestProtocolIStructure:
    def test_yield_counts(self):
        rep5 = builtin("rep5")
        cfg = DistillationConfig(css=STEANE, code_round1=REP3,
                                 code_round2=rep5)
        pool = [PauliError(0, 0, 7) for _ in range(15)]
        out = distill_protocol_I(pool, cfg)
        assert len(out) == 1  # k1 * k2 * (15 / (m1 * m2))

    def test_pool_size_errors(self):
        cfg = DistillationConfig(css=STEANE, code_round1=REP3,
                                 code_round2=REP3)
        with pytest.raises(ProtocolError):
            distill_protocol_I([PauliError(0, 0, 7)] * 8, cfg)
        with pytest.raises(ProtocolError):
            distill_protocol_I([], cfg)
        # 6 blocks = two round-1 groups, not a multiple of m2 = 3.
        with pytest.raises(ProtocolError):
            distill_protocol_I([PauliError(0, 0, 7)] * 6, cfg)

    def test_bad_round_type_and_block_size(self):
        with pytest.raises(ProtocolError):
            distill_round([PauliError(0, 0, 7)] * 3, REP3, STEANE,
                          "Y_round", "zero_L")
        with pytest.raises(ProtocolError):
            distill_round([PauliError(0, 0, 5)] * 3, REP3, STEANE,
                          "X_round", "zero_L")
        with pytest.raises(ProtocolError):
            distill_round([PauliError(0, 0, 7)] * 4, REP3, STEANE,
                          "X_round", "zero_L")

    def test_bad_target_rejected(self):
        with pytest.raises(ProtocolError):
            DistillationConfig(css=STEANE, code_round1=REP3,
                               code_round2=REP3, target="one_L")

    def test_input_blocks_unmodified(self):
        blocks = _x_blocks(EXAMPLE_INJECTIONS)
        before = [(b.e, b.f) for b in blocks]
        distill_round(blocks, REP3, STEANE, "X_round", "zero_L")
        assert [(b.e, b.f) for b in blocks] == before


class TestSteaneExtraction:
    def test_syndromes_read_correctly(self):
        data = PauliError(0b0010000, 0b0000011, 7)
        s_x, s_z = steane_extraction(data, PauliError(0, 0, 7),
                                     PauliError(0, 0, 7), STEANE)
        assert s_x == STEANE.syndrome_X(BinaryVector(0b0010000, 7))
        assert s_z == STEANE.syndrome_Z(BinaryVector(0b0000011, 7))

    def test_ancilla_back_action_lands_on_data(self):
        data = PauliError(0, 0, 7)
        anc_plus = PauliError(0, 0b1, 7)   # Z error on the X-type ancilla
        anc_zero = PauliError(0b10, 0, 7)  # X error on the Z-type ancilla
        steane_extraction(data, anc_plus, anc_zero, STEANE)
        assert data.f == 0b1 and data.e == 0b10

    def test_size_mismatch(self):
        with pytest.raises(ProtocolError):
            steane_extraction(PauliError(0, 0, 5), PauliError(0, 0, 7),
                              PauliError(0, 0, 7), STEANE)


class TestAncillaSaving:
    def _saving_records(self, data_masks):
        data = [PauliError(m, 0, 7) for m in data_masks]
        recs = ancilla_saving(data, [PauliError(0, 0, 7) for _ in range(2)],
                              [PauliError(0, 0, 7) for _ in range(2)],
                              REP3, STEANE)
        return recs

    def test_matches_distillation_round_exhaustive_weight_two(self):
        # Every X pattern of weight <= 2 across the 3 x 7 data qubits gives
        # the same estimated survivor syndrome as the distillation round.
        qubits = list(range(21))
        patterns = [()] + [(q,) for q in qubits] + list(combinations(qubits, 2))
        for pat in patterns:
            masks = [0, 0, 0]
            for q in pat:
                masks[q // 7] |= 1 << (q % 7)
            recs = self._saving_records(masks)
            blocks = [PauliError(m, 0, 7) for m in masks]
            _, round_recs = distill_round(blocks, REP3, STEANE,
                                          "X_round", "zero_L",
                                          correct_logical=False)
            for i in range(REP3.k):
                assert recs[i].s_x == round_recs[i].s_x, pat

    def test_reports_all_blocks(self):
        recs = self._saving_records([0b0010000, 0, 0])
        assert len(recs) == 3
        assert recs[0].s_x == STEANE.syndrome_X(BinaryVector(0b0010000, 7))

    def test_z_side_symmetry(self):
        data = [PauliError(0, 0b0000011, 7) for _ in range(1)] + \
            [PauliError(0, 0, 7) for _ in range(2)]
        recs = ancilla_saving(data, [PauliError(0, 0, 7) for _ in range(2)],
                              [PauliError(0, 0, 7) for _ in range(2)],
                              REP3, STEANE)
        assert recs[0].s_z == STEANE.syndrome_Z(BinaryVector(0b0000011, 7))

    def test_block_count_errors(self):
        with pytest.raises(ProtocolError):
            ancilla_saving([PauliError(0, 0, 7)] * 2,
                           [PauliError(0, 0, 7)] * 2,
                           [PauliError(0, 0, 7)] * 2, REP3, STEANE)


HAMMING_QD = from_matrices(builtin("hamming74").H, builtin("hamming74").H,
                           name="hamming_qd", require_single_logical=True)


class TestProtocolII:
    def test_decode_tables_match_classical_code(self):
        # The measurement-derived decode rows span the hamming74 check
        # space, so both protocols use the same set of coset leaders.
        ham = builtin("hamming74")
        _, _, _, table_x, table_z, mx_rows, mz_rows = \
            _protocol_ii_decoders(HAMMING_QD)
        assert rowspace_equal(BinaryMatrix(tuple(mx_rows), 7), ham.H)
        assert rowspace_equal(BinaryMatrix(tuple(mz_rows), 7), ham.H)
        assert sorted(int(x) for x in table_x) == \
            sorted(int(ham.table[s]) for s in range(1 << ham.r))
        assert sorted(int(x) for x in table_z) == \
            sorted(int(ham.table[s]) for s in range(1 << ham.r))

    def test_single_fault_exhaustive(self):
        # 7 blocks x 7 qubits x 3 Pauli types: no single fault survives.
        for blk, q, (ex, fz) in product(range(7), range(7),
                                        ((1, 0), (0, 1), (1, 1))):
            blocks = [PauliError(0, 0, 7) for _ in range(7)]
            blocks[blk] = PauliError(ex << q, fz << q, 7)
            survivors, _ = distill_protocol_II(blocks, HAMMING_QD, STEANE)
            assert len(survivors) == 1
            assert residual_class(survivors[0], STEANE, "zero_L") != "error", \
                (blk, q, ex, fz)

    def test_some_weight_two_cross_block_x(self):
        for b1, b2 in combinations(range(7), 2):
            blocks = [PauliError(0, 0, 7) for _ in range(7)]
            blocks[b1] = PauliError(0b1, 0, 7)
            blocks[b2] = PauliError(0b100, 0, 7)
            survivors, _ = distill_protocol_II(blocks, HAMMING_QD, STEANE)
            assert residual_class(survivors[0], STEANE, "zero_L") != "error"

    def test_clean_input_clean_output(self):
        blocks = [PauliError(0, 0, 7) for _ in range(7)]
        survivors, records = distill_protocol_II(blocks, HAMMING_QD, STEANE)
        assert survivors[0].is_identity()
        assert records[0].s_x.mask == 0 and records[0].s_z.mask == 0

    def test_block_count_error(self):
        with pytest.raises(ProtocolError):
            distill_protocol_II([PauliError(0, 0, 7)] * 6, HAMMING_QD, STEANE)


class TestResidualClass:
    def test_classes(self):
        assert residual_class(PauliError(0, 0, 7), STEANE, "zero_L") == "clean"
        stab = STEANE.hx.rows[0]
        assert residual_class(PauliError(stab, 0, 7), STEANE,
                              "zero_L") == "stabilizer"
        # Z-bar stabilizes the zero_L target state.
        assert residual_class(PauliError(0, STEANE.logical_z.mask, 7),
                              STEANE, "zero_L") == "stabilizer"
        # X-bar flips it.
        assert residual_class(PauliError(STEANE.logical_x.mask, 0, 7),
                              STEANE, "zero_L") == "error"
        assert residual_class(PauliError(1, 0, 7), STEANE, "zero_L") == "error"

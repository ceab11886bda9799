"""Classical codes and exact coset-leader decoding."""

from itertools import combinations

import numpy as np
import pytest

from qdistill.classical import (
    BUILTIN_NAMES,
    ClassicalCode,
    CodeError,
    builtin,
    from_parity_check,
    golay_generator,
    golay_parity_check,
    min_distance,
)
from qdistill.gf2 import BinaryMatrix, BinaryVector, parity, weight


EXPECTED_PARAMS = {"rep3": (3, 1, 3), "rep5": (5, 1, 5),
                   "hamming74": (7, 4, 3), "golay23": (23, 11, 7)}


@pytest.fixture(scope="module", params=BUILTIN_NAMES)
def code(request):
    return builtin(request.param)


class TestBuiltins:
    def test_parameters(self, code):
        assert (code.m, code.k, code.d) == EXPECTED_PARAMS[code.name]
        assert code.r == code.m - code.k
        assert code.t == (code.d - 1) // 2

    def test_systematic_shape(self, code):
        # H = [A^T | I_r]: last r columns are the identity.
        r, m = code.r, code.m
        for i in range(r):
            for j in range(r):
                assert code.H.entry(i, m - r + j) == (1 if i == j else 0)
        assert code.A.nrows == code.k and code.A.cols == code.r

    def test_generator_orthogonal(self, code):
        from qdistill.gf2 import mat_mul
        prod = mat_mul(code.G, code.H.transpose())
        assert not any(prod.rows)

    def test_min_distance_recomputed(self, code):
        assert min_distance(code.G) == code.d


class TestDecoder:
    def test_rep3_table_pinned(self):
        # Syndrome bit j = parity against row j of [[1,1,0],[1,0,1]]:
        # block-2 error -> 01, block-3 error -> 10, block-1 error -> 11.
        c = builtin("rep3")
        assert c.decode(BinaryVector.from_string("10")).bits() == [0, 1, 0]
        assert c.decode(BinaryVector.from_string("01")).bits() == [0, 0, 1]
        assert c.decode(BinaryVector.from_string("11")).bits() == [1, 0, 0]
        assert c.decode(BinaryVector.from_string("00")).bits() == [0, 0, 0]

    def test_weight_up_to_t_decodes_exactly(self, code):
        for w in range(1, code.t + 1):
            for combo in combinations(range(code.m), w):
                e = BinaryVector.from_bits(
                    [1 if i in combo else 0 for i in range(code.m)])
                assert code.decode(code.syndrome(e)) == e

    def test_coset_leader_minimality_all_syndromes(self, code):
        # Independent oracle: minimum weight per syndrome over all 2^m
        # patterns, computed with vectorized numpy (no shared code paths).
        m, r = code.m, code.r
        e = np.arange(1 << m, dtype=np.int64)
        w = np.zeros(1 << m, dtype=np.int8)
        for b in range(m):
            w += ((e >> b) & 1).astype(np.int8)
        syn = np.zeros(1 << m, dtype=np.int64)
        for j, row in enumerate(code.H.rows):
            bits = np.zeros(1 << m, dtype=np.int64)
            masked = e & row
            for b in range(m):
                bits ^= (masked >> b) & 1
            syn |= bits << j
        min_w = np.full(1 << r, 127, dtype=np.int8)
        np.minimum.at(min_w, syn, w)
        leader_w = np.array([weight(int(code.table[s])) for s in range(1 << r)])
        assert (leader_w == min_w).all()

    def test_tie_break_lexicographic(self):
        # Single-parity-check code: weight-1 errors tie; the leader is the
        # lexicographically smallest bit sequence, i.e. 001 < 010 < 100.
        h = BinaryMatrix.from_lists([[1, 1, 1]])
        c = from_parity_check(h, name="spc3")
        lead = c.decode(c.syndrome(BinaryVector.from_string("100")))
        assert lead.bits() == [0, 0, 1]
        # And a weight-2 tie: syndrome 0 -> leader is the zero pattern.
        assert c.decode(BinaryVector(0, 1)).mask == 0

    def test_syndrome_length_checked(self, code):
        with pytest.raises(Exception):
            code.decode(BinaryVector(0, code.r + 1))


class TestConstruction:
    def test_declared_distance_checked(self):
        h = BinaryMatrix.from_lists([[1, 1, 0], [1, 0, 1]])
        with pytest.raises(CodeError):
            from_parity_check(h, d=4)

    def test_degenerate_dimension_rejected(self):
        h = BinaryMatrix.from_lists([[1, 0], [0, 1]])
        with pytest.raises(CodeError):
            from_parity_check(h)

    def test_unknown_builtin(self):
        with pytest.raises(CodeError):
            builtin("rep7")


class TestGolay:
    def test_full_golay_is_23_12_7(self):
        g = golay_generator()
        assert g.nrows == 12 and g.cols == 23
        assert min_distance(g) == 7
        h = golay_parity_check()
        from qdistill.gf2 import mat_mul
        assert not any(mat_mul(g, h.transpose()).rows)

    def test_subcode_words_inside_full_golay(self):
        # Every golay23 ([23,11,7]) codeword is a [23,12,7] Golay codeword.
        c = builtin("golay23")
        h_full = golay_parity_check()
        for row in c.G.rows:
            assert all(parity(row & hr) == 0 for hr in h_full.rows)

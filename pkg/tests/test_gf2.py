"""Bit-packed GF(2) linear algebra."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdistill.gf2 import (
    BinaryMatrix,
    BinaryVector,
    DimensionError,
    bits_to_mask,
    in_rowspace,
    mask_to_bits,
    mat_mul,
    nullspace_basis,
    parity,
    rank,
    row_reduce,
    rowspace_equal,
    systematic_form,
    weight,
)


def mats(max_rows=5, max_cols=8):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r)
        .map(lambda rows: BinaryMatrix(tuple(rows), c))))


class TestScalars:
    def test_parity_weight(self):
        assert parity(0b1011) == 1
        assert parity(0) == 0
        assert weight(0b1011) == 3

    def test_bits_roundtrip(self):
        assert bits_to_mask([1, 0, 1, 1]) == 0b1101
        assert mask_to_bits(0b1101, 4) == [1, 0, 1, 1]
        with pytest.raises(ValueError):
            bits_to_mask([2])


class TestVector:
    def test_from_string_and_str(self):
        v = BinaryVector.from_string("1101000")
        assert v.mask == 0b0001011 and v.n == 7
        assert str(v) == "1101000"

    def test_dot_and_xor(self):
        a = BinaryVector.from_string("110")
        b = BinaryVector.from_string("011")
        assert a.dot(b) == 1
        assert (a ^ b).bits() == [1, 0, 1]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            BinaryVector.from_string("11").dot(BinaryVector.from_string("111"))


class TestMatrix:
    def test_identity_mul(self):
        m = BinaryMatrix.from_lists([[1, 0, 1], [0, 1, 1]])
        assert mat_mul(BinaryMatrix.identity(2), m).rows == m.rows

    def test_transpose_involution(self):
        m = BinaryMatrix.from_lists([[1, 0, 1], [0, 1, 1]])
        assert m.transpose().transpose().rows == m.rows

    def test_mul_vec(self):
        m = BinaryMatrix.from_lists([[1, 1, 0], [1, 0, 1]])
        v = BinaryVector.from_string("100")
        assert m.mul_vec(v).bits() == [1, 1]

    @given(mats())
    @settings(max_examples=80, deadline=None)
    def test_rank_bounds(self, m):
        r = rank(m)
        assert 0 <= r <= min(m.nrows, m.cols)

    @given(mats())
    @settings(max_examples=80, deadline=None)
    def test_row_reduce_preserves_rowspace(self, m):
        red, pivots = row_reduce(m)
        assert rowspace_equal(red, m)
        assert len(pivots) == rank(m)

    @given(mats())
    @settings(max_examples=80, deadline=None)
    def test_nullspace_orthogonal(self, m):
        ns = nullspace_basis(m)
        assert ns.nrows == m.cols - rank(m)
        if ns.nrows:
            prod = mat_mul(m, ns.transpose())
            assert not any(prod.rows)

    @given(mats(4, 6), mats(4, 6))
    @settings(max_examples=60, deadline=None)
    def test_mat_mul_transpose_identity(self, a, b):
        # (A B^T)^T == B A^T whenever shapes line up.
        if a.cols != b.cols:
            return
        left = mat_mul(a, b.transpose()).transpose()
        right = mat_mul(b, a.transpose())
        assert left.rows == right.rows


class TestSystematicForm:
    def test_already_systematic_unchanged(self):
        # [A^T | I_r] input: identity permutation, matrix unchanged.
        h = BinaryMatrix.from_lists([[1, 1, 0], [1, 0, 1]])
        h_sys, perm = systematic_form(h)
        assert h_sys.rows == h.rows
        assert perm == [0, 1, 2]

    def test_permutation_semantics(self):
        h = BinaryMatrix.from_lists([[1, 0, 1, 0], [0, 1, 1, 1]])
        h_sys, perm = systematic_form(h)
        r, m = h.nrows, h.cols
        # Last r columns form the identity.
        for j in range(r):
            col = [(h_sys.rows[i] >> (m - r + j)) & 1 for i in range(r)]
            assert col == [1 if i == j else 0 for i in range(r)]
        # Column j of the output is column perm[j] of a row-equivalent input.
        permuted_back = BinaryMatrix(
            tuple(sum((((row >> j) & 1) << perm[j]) for j in range(m))
                  for row in h_sys.rows), m)
        assert rowspace_equal(permuted_back, h)

    def test_rank_deficient_rejected(self):
        from qdistill.gf2 import RankError
        h = BinaryMatrix.from_lists([[1, 1, 0], [1, 1, 0]])
        with pytest.raises(RankError):
            systematic_form(h)


class TestNullspaceExample:
    def test_two_row_example(self):
        # Rows (1,1,0) and (1,0,1): the only nonzero orthogonal vector is 111.
        a = BinaryMatrix.from_lists([[1, 1, 0], [1, 0, 1]])
        ns = nullspace_basis(a)
        assert ns.nrows == 1
        assert mask_to_bits(ns.rows[0], 3) == [1, 1, 1]

    def test_in_rowspace(self):
        a = BinaryMatrix.from_lists([[1, 1, 0], [1, 0, 1]])
        assert in_rowspace(a, BinaryVector.from_string("011"))
        assert not in_rowspace(a, BinaryVector.from_string("100"))

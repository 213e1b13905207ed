#
# This file is part of the pyrotcon package.
#
# Copyright (c) 2024 pyrotcon Developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.
#

import numpy as np
import pytest

from pyrotcon.core.ldpc import (CheckProfile, ParityCheckMatrix, build_encoder, construct_code,
                                encode, mixed_row_degrees, peg_construct, sum_product_decode,
                                syndrome_weight)
from pyrotcon.errors import (ConstructionError, InvalidParameter, LengthMismatch,
                             RankDeficient)
from pyrotcon.test import all_codewords, bitwise_map_llrs, hamming_code, ml_decode, small_code


@pytest.fixture(scope="module")
def peg_code():
    return construct_code(96, 48, 3, seed=1)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


class Test_ParityCheckMatrix:
    def test_from_dense_to_dense(self):
        dense = np.array([[1, 1, 0, 1], [0, 1, 1, 0]], dtype=np.uint8)
        h = ParityCheckMatrix.from_dense(dense)
        assert h.n_rows == 2 and h.n_cols == 4
        assert h.rows == ((0, 1, 3), (1, 2))
        assert h.cols == ((0,), (0, 1), (1,), (0,))
        assert np.array_equal(h.to_dense(), dense)

    def test_degrees(self):
        h = ParityCheckMatrix.from_dense([[1, 1, 0, 1], [0, 1, 1, 0]])
        assert h.row_degrees.tolist() == [3, 2]
        assert h.col_degrees.tolist() == [1, 2, 1, 1]
        assert h.n_edges == 5
        assert h.regularity() is None

    def test_regularity(self):
        h = ParityCheckMatrix.from_dense([[1, 0, 1, 0], [0, 1, 0, 1]])
        assert h.regularity() == (1, 2)

    def test_duplicate_index(self):
        with pytest.raises(InvalidParameter, match="Duplicate"):
            ParityCheckMatrix(n_cols=3, n_rows=1, rows=((0, 0),), cols=((0, 0), (), ()))

    def test_index_out_of_range(self):
        with pytest.raises(InvalidParameter):
            ParityCheckMatrix.from_rows(3, [[0, 3]])

    def test_rows_and_cols_disagree(self):
        with pytest.raises(InvalidParameter, match="different"):
            ParityCheckMatrix(n_cols=2, n_rows=1, rows=((0,),), cols=((), (0,)))

    def test_wrong_number_of_rows(self):
        with pytest.raises(LengthMismatch):
            ParityCheckMatrix(n_cols=2, n_rows=2, rows=((0,),), cols=((0,), ()))

    @pytest.mark.parametrize("dense, result", (
        ([[1, 0, 1, 0], [0, 1, 0, 1]], False),
        ([[1, 1, 0], [1, 1, 1]], True),
        ([[1, 1, 0], [0, 1, 1]], False),
    ))
    def test_has_four_cycle(self, dense, result):
        assert ParityCheckMatrix.from_dense(dense).has_four_cycle() is result

    def test_syndrome(self):
        h, _ = hamming_code()
        assert h.syndrome([1, 0, 0, 0, 0, 0, 0]).tolist() == [1, 1, 0]


class Test_peg_construct:
    def test_small_regular(self):
        h = peg_construct(8, 4, 2, seed=1)
        assert h.regularity() == (2, 4)
        assert h.n_edges == 16

    def test_no_duplicate_edges(self):
        h = peg_construct(12, 6, 3, seed=7)
        assert h.regularity() == (3, 6)
        for col in h.cols:
            assert len(set(col)) == len(col) == 3

    def test_deterministic(self):
        assert peg_construct(48, 24, 3, seed=3) == peg_construct(48, 24, 3, seed=3)

    def test_seed_matters(self):
        assert peg_construct(48, 24, 3, seed=3) != peg_construct(48, 24, 3, seed=4)

    def test_uneven_degrees(self):
        with pytest.raises(ConstructionError):
            peg_construct(10, 4, 3, seed=1)

    @pytest.mark.parametrize("n_vars, n_checks, col_degree", ((4, 4, 2), (8, 0, 2), (8, 4, 5)))
    def test_invalid_sizes(self, n_vars, n_checks, col_degree):
        with pytest.raises(InvalidParameter):
            peg_construct(n_vars, n_checks, col_degree, seed=1)

    def test_row_degrees_wrong_sum(self):
        with pytest.raises(ConstructionError):
            peg_construct(8, 4, 2, seed=1, row_degrees=[4, 4, 4, 3])

    def test_row_degrees_wrong_length(self):
        with pytest.raises(LengthMismatch):
            peg_construct(8, 4, 2, seed=1, row_degrees=[8, 8])

    @pytest.mark.slow
    def test_full_size(self):
        h = peg_construct(2304, 1152, 3, seed=1)
        assert h.regularity() == (3, 6)
        assert h.n_edges == 6912


class Test_mixed_row_degrees:
    def test_pattern(self):
        assert mixed_row_degrees(8, 6).tolist() == [6, 5, 6, 7, 6, 5, 6, 7]

    @pytest.mark.parametrize("n_checks", (1, 2, 3, 6, 1152))
    def test_sum_is_kept(self, n_checks):
        assert mixed_row_degrees(n_checks, 6).sum() == 6 * n_checks

    def test_odd_fraction(self):
        degrees = mixed_row_degrees(1152, 6)
        assert np.count_nonzero(degrees % 2) == 576

    def test_row_degree_too_small(self):
        with pytest.raises(InvalidParameter):
            mixed_row_degrees(8, 1)


class Test_build_encoder:
    def test_copy_code(self):
        h = ParityCheckMatrix.from_dense([[1, 0, 1, 0], [0, 1, 0, 1]])
        enc = build_encoder(h)
        assert enc.k == 2
        assert enc.information_positions.tolist() == [2, 3]
        assert encode(enc, [1, 0]).tolist() == [1, 0, 1, 0]
        assert encode(enc, [0, 1]).tolist() == [0, 1, 0, 1]

    def test_random_full_rank(self, rng):
        p = rng.integers(0, 2, size=(5, 5))
        h = ParityCheckMatrix.from_dense(np.hstack((p, np.eye(5, dtype=int))))
        enc = build_encoder(h)
        assert enc.k == 5
        codewords = all_codewords(enc)
        assert len({c.tobytes() for c in codewords}) == 32
        for c in codewords:
            assert syndrome_weight(c, h) == 0

    def test_rank_deficient(self):
        h = ParityCheckMatrix.from_dense([[1, 1, 0], [1, 1, 0]])
        with pytest.raises(RankDeficient) as exc_info:
            build_encoder(h)
        assert exc_info.value.rank == 1
        assert exc_info.value.n_rows == 2

    def test_permutation_is_bijection(self, peg_code):
        _, enc = peg_code
        assert sorted(enc.column_permutation.tolist()) == list(range(96))


class Test_encode:
    def test_zero(self, peg_code):
        _, enc = peg_code
        assert not encode(enc, np.zeros(enc.k, dtype=np.uint8)).any()

    def test_linearity(self, peg_code, rng):
        _, enc = peg_code
        u1, u2 = rng.integers(0, 2, size=(2, enc.k))
        assert np.array_equal(encode(enc, u1) ^ encode(enc, u2), encode(enc, u1 ^ u2))

    def test_basis_vectors(self, peg_code):
        h, enc = peg_code
        for i in range(enc.k):
            u = np.zeros(enc.k, dtype=np.uint8)
            u[i] = 1
            assert syndrome_weight(encode(enc, u), h) == 0

    def test_random_payloads(self, peg_code, rng):
        h, enc = peg_code
        for _ in range(1000):
            u = rng.integers(0, 2, size=enc.k)
            c = encode(enc, u)
            assert syndrome_weight(c, h) == 0
            assert np.array_equal(enc.extract_information(c), u)

    def test_length_mismatch(self, peg_code):
        _, enc = peg_code
        with pytest.raises(LengthMismatch):
            encode(enc, [0, 1])


class Test_syndrome_weight:
    def test_single_flip(self, peg_code, rng):
        h, enc = peg_code
        c = encode(enc, rng.integers(0, 2, size=enc.k))
        c[17] ^= 1
        assert syndrome_weight(c, h) == 3

    def test_linearity_over_codewords(self, peg_code, rng):
        h, enc = peg_code
        c = encode(enc, rng.integers(0, 2, size=enc.k))
        e = rng.integers(0, 2, size=h.n_cols).astype(np.uint8)
        assert syndrome_weight(c ^ e, h) == syndrome_weight(e, h)

    def test_random_mean(self, peg_code, rng):
        h, _ = peg_code
        weights = [syndrome_weight(rng.integers(0, 2, size=h.n_cols), h) for _ in range(10_000)]
        assert 0.48 * h.n_rows <= np.mean(weights) <= 0.52 * h.n_rows

    def test_length_mismatch(self, peg_code):
        h, _ = peg_code
        with pytest.raises(LengthMismatch):
            syndrome_weight([0, 1, 1], h)


class Test_construct_code:
    def test_regular(self, peg_code):
        h, enc = peg_code
        assert h.regularity() == (3, 6)
        assert enc.k == 48

    def test_mixed(self):
        h, enc = construct_code(96, 48, 3, seed=1, profile="mixed")
        assert h.col_degrees.tolist() == [3] * 96
        assert sorted(h.row_degrees.tolist()) == sorted(mixed_row_degrees(48, 6).tolist())
        assert h.n_edges == 288
        assert enc.k == 48

    def test_mixed_excludes_all_ones(self):
        h, _ = construct_code(96, 48, 3, seed=1, profile=CheckProfile.MIXED)
        assert syndrome_weight(np.ones(96, dtype=np.uint8), h) == 24

    def test_regular_contains_all_ones(self, peg_code):
        h, _ = peg_code
        assert syndrome_weight(np.ones(96, dtype=np.uint8), h) == 0

    def test_uneven(self):
        with pytest.raises(ConstructionError):
            construct_code(10, 4, 3, seed=1, profile="mixed")


class Test_sum_product_decode:
    def test_valid_codeword(self, peg_code):
        h, _ = peg_code
        result = sum_product_decode(np.full(96, 20.0), h)
        assert result.converged is True
        assert result.iterations_used == 0
        assert not result.hard_bits.any()

    def test_zero_llrs(self, peg_code):
        h, _ = peg_code
        result = sum_product_decode(np.zeros(96), h)
        assert result.converged is True
        assert result.iterations_used == 0
        assert not result.hard_bits.any()

    def test_single_error_corrected(self, rng):
        h, enc = small_code()
        codewords = all_codewords(enc)
        c = codewords[5]
        llrs = 20.0 * (1 - 2 * c.astype(float))
        llrs[0] = -llrs[0]
        result = sum_product_decode(llrs, h)
        assert result.converged is True
        assert np.array_equal(result.hard_bits, c)
        assert np.array_equal(result.hard_bits, ml_decode(llrs, codewords))

    def test_noisy_peg_codeword(self, peg_code, rng):
        h, enc = peg_code
        c = encode(enc, rng.integers(0, 2, size=enc.k))
        sigma = 0.5
        y = (1 - 2 * c.astype(float)) + sigma * rng.standard_normal(96)
        result = sum_product_decode(2 * y / sigma ** 2, h)
        assert result.converged is True
        assert np.array_equal(result.hard_bits, c)
        assert 0 <= result.iterations_used <= 50

    def test_not_converged(self, peg_code):
        h, _ = peg_code
        llrs = np.full(96, 5.0)
        llrs[:3] = -5.0
        result = sum_product_decode(llrs, h, max_iters=0)
        assert result.converged is False
        assert result.iterations_used == 0

    def test_extreme_llrs_stay_finite(self, peg_code, rng):
        h, _ = peg_code
        llrs = rng.choice([-1e6, 1e6], size=96)
        result = sum_product_decode(llrs, h, max_iters=5)
        assert result.iterations_used <= 5
        assert set(np.unique(result.hard_bits).tolist()) <= {0, 1}

    def test_matches_bitwise_map(self, rng):
        h, enc = small_code()
        codewords = all_codewords(enc)
        sigma = 0.5
        agree = total = 0
        for _ in range(300):
            c = codewords[rng.integers(len(codewords))]
            y = (1 - 2 * c.astype(float)) + sigma * rng.standard_normal(h.n_cols)
            llrs = 2 * y / sigma ** 2
            map_bits = (bitwise_map_llrs(llrs, codewords) < 0).astype(np.uint8)
            if not np.array_equal(map_bits, c):
                continue
            total += 1
            agree += np.array_equal(sum_product_decode(llrs, h).hard_bits, map_bits)
        assert total > 250
        assert agree >= 0.95 * total

    def test_length_mismatch(self, peg_code):
        h, _ = peg_code
        with pytest.raises(LengthMismatch):
            sum_product_decode(np.zeros(10), h)

    def test_non_finite(self, peg_code):
        h, _ = peg_code
        llrs = np.zeros(96)
        llrs[3] = np.nan
        with pytest.raises(InvalidParameter):
            sum_product_decode(llrs, h)

    def test_negative_max_iters(self, peg_code):
        h, _ = peg_code
        with pytest.raises(InvalidParameter):
            sum_product_decode(np.zeros(96), h, max_iters=-1)

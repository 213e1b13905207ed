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

"""
Binary LDPC codes: construction, systematic encoding, syndromes and sum-product decoding.

.. code::

    h, encoder = construct_code(n_vars=2304, n_checks=1152, col_degree=3, seed=1)
    codeword = encode(encoder, u)
    assert syndrome_weight(codeword, h) == 0
"""

from __future__ import annotations
from dataclasses import dataclass, field
from functools import cached_property
import logging
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import sparse

from . import DEFAULT_MAX_ITERATIONS, LLR_CLAMP, TANH_CLAMP
from ..errors import ConstructionError, InvalidParameter, LengthMismatch, RankDeficient
from ..utils.enums import StrEnum


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

# Additional attempts of `construct_code` with incremented seeds
MAX_CONSTRUCTION_RETRIES = 10

BitsLike = Union[np.ndarray, Sequence[int]]


def _as_bits(bits: BitsLike, length: int, name: str) -> np.ndarray:
    array = np.asarray(bits, dtype=np.uint8)
    if array.ndim != 1 or array.size != length:
        raise LengthMismatch(name, expected=length, actual=array.size)
    return array


@dataclass(frozen=True)
class TannerLayout:
    """Edges of the Tanner graph arranged per check, padded to the largest row degree.

    `edge_vars[i, k]` is the variable of the k-th edge of check `i`, valid where `mask` is set.
    """

    edge_vars: np.ndarray
    mask: np.ndarray

    @cached_property
    def flat_vars(self) -> np.ndarray:
        return self.edge_vars[self.mask]


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse binary M x N parity-check matrix, stored as index lists per row and per column.

    :param n_cols: code length N.
    :param n_rows: number of checks M.
    :param rows: sorted variable indices of each check.
    :param cols: sorted check indices of each variable.
    """

    n_cols: int
    n_rows: int
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise LengthMismatch("rows", expected=self.n_rows, actual=len(self.rows))
        if len(self.cols) != self.n_cols:
            raise LengthMismatch("cols", expected=self.n_cols, actual=len(self.cols))
        self._check_lists(self.rows, self.n_cols, "row")
        self._check_lists(self.cols, self.n_rows, "column")
        from_rows = {(i, j) for i, row in enumerate(self.rows) for j in row}
        from_cols = {(i, j) for j, col in enumerate(self.cols) for i in col}
        if from_rows != from_cols:
            raise InvalidParameter("Row and column index lists describe different matrices.")

    @staticmethod
    def _check_lists(lists: Iterable[Sequence[int]], bound: int, kind: str) -> None:
        for position, indices in enumerate(lists):
            if len(set(indices)) != len(indices):
                raise InvalidParameter(f"Duplicate index in {kind} {position}.")
            if any(i < 0 or i >= bound for i in indices):
                raise InvalidParameter(f"Index out of range in {kind} {position}.")
            if list(indices) != sorted(indices):
                raise InvalidParameter(f"Indices of {kind} {position} are not sorted.")

    @classmethod
    def from_rows(cls, n_cols: int, rows: Iterable[Iterable[int]]) -> ParityCheckMatrix:
        """Create the matrix from the variable index lists of the checks."""
        row_tuples = tuple(tuple(sorted(row)) for row in rows)
        cols: list[list[int]] = [[] for _ in range(n_cols)]
        for i, row in enumerate(row_tuples):
            for j in row:
                if not 0 <= j < n_cols:
                    raise InvalidParameter(f"Index out of range in row {i}.")
                cols[j].append(i)
        return cls(n_cols=n_cols, n_rows=len(row_tuples), rows=row_tuples,
                   cols=tuple(tuple(col) for col in cols))

    @classmethod
    def from_dense(cls, matrix: Union[np.ndarray, Sequence[Sequence[int]]]) -> ParityCheckMatrix:
        array = np.asarray(matrix) % 2
        if array.ndim != 2:
            raise InvalidParameter("A parity-check matrix needs two dimensions.")
        return cls.from_rows(array.shape[1], (np.flatnonzero(row).tolist() for row in array))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            dense[i, list(row)] = 1
        return dense

    @property
    def n_edges(self) -> int:
        """Number of nonzero elements (delta)."""
        return sum(len(row) for row in self.rows)

    @property
    def row_degrees(self) -> np.ndarray:
        return np.array([len(row) for row in self.rows], dtype=np.int64)

    @property
    def col_degrees(self) -> np.ndarray:
        return np.array([len(col) for col in self.cols], dtype=np.int64)

    def regularity(self) -> Optional[tuple[int, int]]:
        """Return (gamma, rho) if all columns and all rows have equal weight, else None."""
        col_degrees = set(self.col_degrees.tolist())
        row_degrees = set(self.row_degrees.tolist())
        if len(col_degrees) == 1 and len(row_degrees) == 1:
            return col_degrees.pop(), row_degrees.pop()
        return None

    def has_four_cycle(self) -> bool:
        """Whether two checks share more than one variable."""
        overlap = (self.sparse @ self.sparse.T).toarray()
        np.fill_diagonal(overlap, 0)
        return bool((overlap > 1).any())

    @cached_property
    def sparse(self) -> sparse.csr_matrix:
        """The matrix as scipy csr matrix with integer entries."""
        row_index = np.repeat(np.arange(self.n_rows), self.row_degrees)
        col_index = np.fromiter((j for row in self.rows for j in row), dtype=np.int64,
                                count=self.n_edges)
        data = np.ones(self.n_edges, dtype=np.int32)
        return sparse.csr_matrix((data, (row_index, col_index)),
                                 shape=(self.n_rows, self.n_cols))

    @cached_property
    def layout(self) -> TannerLayout:
        width = int(self.row_degrees.max()) if self.n_rows else 0
        edge_vars = np.zeros((self.n_rows, width), dtype=np.int64)
        mask = np.zeros((self.n_rows, width), dtype=bool)
        for i, row in enumerate(self.rows):
            edge_vars[i, :len(row)] = row
            mask[i, :len(row)] = True
        return TannerLayout(edge_vars=edge_vars, mask=mask)

    def syndrome(self, bits: BitsLike) -> np.ndarray:
        """Compute c*H^T over GF(2)."""
        c = _as_bits(bits, self.n_cols, "c_hat")
        return ((self.sparse @ c.astype(np.int32)) & 1).astype(np.uint8)


def syndrome_weight(c_hat: BitsLike, h: ParityCheckMatrix) -> int:
    """Count the unsatisfied parity-check equations W(c_hat H^T)."""
    return int(np.count_nonzero(h.syndrome(c_hat)))


# Progressive edge growth
class CheckProfile(StrEnum):
    """Degree distribution of the checks of a PEG matrix."""

    REGULAR = "regular"
    MIXED = "mixed"


def mixed_row_degrees(n_checks: int, row_degree: int) -> np.ndarray:
    """Check degrees with the mean `row_degree`, where every other pair of checks trades one edge.

    Half of the checks keep `row_degree`, a quarter gets one edge less, a quarter one more, so
    the row weights have mixed parity. With even row weights only, the all-ones word is a
    codeword, and a QPSK frame rotated by pi equals the frame of the complementary codeword.
    """
    if row_degree < 2:
        raise InvalidParameter(f"Mixed check degrees need a row degree >= 2, got {row_degree}.")
    degrees = np.full(n_checks, row_degree, dtype=np.int64)
    plus = np.arange(3, n_checks, 4)
    degrees[plus - 2] -= 1
    degrees[plus] += 1
    return degrees


def peg_construct(n_vars: int, n_checks: int, col_degree: int, seed: int,
                  row_degrees: Optional[Sequence[int]] = None) -> ParityCheckMatrix:
    """Build a matrix with `col_degree` ones per column with progressive edge growth.

    Without `row_degrees`, the matrix is (col_degree, row_degree)-regular. Otherwise check `i`
    receives exactly `row_degrees[i]` edges, which have to sum up to `n_vars * col_degree`.

    Variables are processed in increasing index order. The first edge of a variable goes to any
    open check, every further edge to a check at the deepest level of the computation tree
    spanned by the variable (or to a check not reachable at all). Among those candidates, the
    check with the most missing edges wins; remaining ties are resolved by a check priority order
    which is a seeded permutation of the check indices. Full checks are never chosen.
    """
    if n_checks < 1 or n_vars <= n_checks:
        raise InvalidParameter(f"Need 0 < n_checks < n_vars, got {n_checks} and {n_vars}.")
    if not 1 <= col_degree <= n_checks:
        raise InvalidParameter(f"Column degree {col_degree} is not in 1..{n_checks}.")
    n_edges = n_vars * col_degree
    if row_degrees is None:
        if n_edges % n_checks:
            raise ConstructionError(
                f"{n_vars} * {col_degree} edges cannot be spread evenly over {n_checks} checks.")
        targets = np.full(n_checks, n_edges // n_checks, dtype=np.int64)
    else:
        targets = np.asarray(row_degrees, dtype=np.int64)
        if targets.shape != (n_checks,):
            raise LengthMismatch("row_degrees", expected=n_checks, actual=targets.size)
        if targets.sum() != n_edges or targets.min() < 1 or targets.max() > n_vars:
            raise ConstructionError(
                f"Check degrees summing up to {targets.sum()} cannot hold {n_edges} edges.")
    priority = np.random.default_rng(seed).permutation(n_checks)
    check_degree = np.zeros(n_checks, dtype=np.int64)
    var_checks: list[list[int]] = [[] for _ in range(n_vars)]
    check_vars: list[list[int]] = [[] for _ in range(n_checks)]

    for var in range(n_vars):
        for k in range(col_degree):
            open_checks = check_degree < targets
            if k == 0:
                candidates = np.flatnonzero(open_checks)
            else:
                candidates = _deepest_checks(var, var_checks, check_vars, open_checks)
            if candidates.size == 0:
                raise ConstructionError(f"No open check left for edge {k} of variable {var}.")
            missing = targets[candidates] - check_degree[candidates]
            order = np.lexsort((priority[candidates], -missing))
            check = int(candidates[order[0]])
            var_checks[var].append(check)
            check_vars[check].append(var)
            check_degree[check] += 1
    return ParityCheckMatrix.from_rows(n_vars, check_vars)


def _deepest_checks(var: int, var_checks: list[list[int]], check_vars: list[list[int]],
                    open_checks: np.ndarray) -> np.ndarray:
    """Return the open checks farthest away from `var` in the current Tanner graph."""
    reached = np.zeros(open_checks.size, dtype=bool)
    frontier = list(var_checks[var])
    reached[frontier] = True
    seen_vars = {var}
    available = open_checks & ~reached
    if not available.any():
        return np.empty(0, dtype=np.int64)
    while True:
        new_vars: set[int] = set()
        for check in frontier:
            new_vars.update(check_vars[check])
        new_vars -= seen_vars
        seen_vars |= new_vars
        new_checks: set[int] = set()
        for v in new_vars:
            new_checks.update(var_checks[v])
        expansion = np.fromiter(new_checks, dtype=np.int64, count=len(new_checks))
        expansion = expansion[~reached[expansion]]
        if expansion.size == 0:
            # the tree stopped growing, unreachable checks are the deepest ones
            return np.flatnonzero(available)
        reached[expansion] = True
        deeper = open_checks & ~reached
        if not deeper.any():
            return np.flatnonzero(available)
        available = deeper
        frontier = expansion.tolist()


# Encoding
@dataclass(frozen=True, eq=False)
class Encoder:
    """Systematic encoder of the code defined by `matrix`.

    After the column permutation the reduced matrix has the form [P | I_M]: positions
    `column_permutation[:K]` carry the information bits, the parity bits at
    `column_permutation[K:]` are `parity_table @ u` over GF(2).
    """

    matrix: ParityCheckMatrix
    column_permutation: np.ndarray
    parity_table: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.matrix.n_cols

    @property
    def k(self) -> int:
        return self.matrix.n_cols - self.matrix.n_rows

    @property
    def information_positions(self) -> np.ndarray:
        return self.column_permutation[:self.k]

    @property
    def parity_positions(self) -> np.ndarray:
        return self.column_permutation[self.k:]

    def extract_information(self, codeword: BitsLike) -> np.ndarray:
        """Read the information bits from a codeword in original column order."""
        return _as_bits(codeword, self.n, "codeword")[self.information_positions]


def build_encoder(h: ParityCheckMatrix) -> Encoder:
    """Reduce `h` over GF(2) with column pivoting and create the systematic encoder."""
    reduced = h.to_dense().astype(bool)
    m, n = reduced.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.flatnonzero(reduced[row:, col])
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            reduced[[row, pivot]] = reduced[[pivot, row]]
        others = np.flatnonzero(reduced[:, col])
        others = others[others != row]
        reduced[others] ^= reduced[row]
        pivots.append(col)
        row += 1
    if len(pivots) < m:
        raise RankDeficient(rank=len(pivots), n_rows=m)
    is_pivot = np.zeros(n, dtype=bool)
    is_pivot[pivots] = True
    free = np.flatnonzero(~is_pivot)
    permutation = np.concatenate((free, np.asarray(pivots, dtype=np.int64)))
    return Encoder(matrix=h, column_permutation=permutation,
                   parity_table=reduced[:, free].astype(np.uint8))


def encode(enc: Encoder, u: BitsLike) -> np.ndarray:
    """Encode K information bits into a codeword of length N."""
    info = _as_bits(u, enc.k, "u")
    codeword = np.zeros(enc.n, dtype=np.uint8)
    codeword[enc.information_positions] = info
    parity = enc.parity_table[:, info == 1].sum(axis=1) & 1
    codeword[enc.parity_positions] = parity
    return codeword


def construct_code(n_vars: int, n_checks: int, col_degree: int, seed: int,
                   profile: Union[CheckProfile, str] = CheckProfile.REGULAR,
                   ) -> tuple[ParityCheckMatrix, Encoder]:
    """Construct a PEG matrix with full rank and its encoder.

    On a rank deficient matrix or a PEG dead end the construction is repeated with the next seed,
    up to :data:`MAX_CONSTRUCTION_RETRIES` times.

    :param profile: regular check degrees, or mixed ones from :func:`mixed_row_degrees`.
    """
    row_degrees = None
    if CheckProfile(profile) == CheckProfile.MIXED:
        if (n_vars * col_degree) % n_checks:
            raise ConstructionError(
                f"{n_vars} * {col_degree} edges cannot be spread evenly over {n_checks} checks.")
        row_degrees = mixed_row_degrees(n_checks, n_vars * col_degree // n_checks)
    last_error: Union[ConstructionError, RankDeficient, None] = None
    for attempt in range(MAX_CONSTRUCTION_RETRIES + 1):
        try:
            h = peg_construct(n_vars, n_checks, col_degree, seed + attempt, row_degrees)
            encoder = build_encoder(h)
        except (ConstructionError, RankDeficient) as exc:
            log.debug(f"PEG attempt with seed {seed + attempt} failed: {exc}")
            last_error = exc
        else:
            log.info(f"Constructed C[{n_vars},{encoder.k}] ({profile} checks) with seed "
                     f"{seed + attempt}.")
            return h, encoder
    assert last_error is not None
    raise last_error


# Decoding
@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Outcome of the sum-product decoder, `converged` iff `hard_bits` has zero syndrome."""

    hard_bits: np.ndarray
    converged: bool
    iterations_used: int


def _hard_decision(llrs: np.ndarray) -> np.ndarray:
    # LLR 0 decides for bit 0
    return (llrs < 0).astype(np.uint8)


def _exclusive_products(values: np.ndarray) -> np.ndarray:
    """Product of all other entries of each row, without division."""
    ones = np.ones((values.shape[0], 1))
    prefix = np.cumprod(np.hstack((ones, values[:, :-1])), axis=1)
    suffix = np.cumprod(np.hstack((ones, values[:, :0:-1])), axis=1)[:, ::-1]
    return prefix * suffix


def sum_product_decode(llrs: Union[np.ndarray, Sequence[float]], h: ParityCheckMatrix,
                       max_iters: int = DEFAULT_MAX_ITERATIONS) -> DecodeResult:
    """Decode with the flooding sum-product algorithm (positive LLR means bit 0).

    The hard decision is checked before the first iteration and after each one; a zero syndrome
    stops the decoder. Messages are clamped to +-LLR_CLAMP.
    """
    channel = np.asarray(llrs, dtype=float)
    if channel.ndim != 1 or channel.size != h.n_cols:
        raise LengthMismatch("llrs", expected=h.n_cols, actual=channel.size)
    if not np.all(np.isfinite(channel)):
        raise InvalidParameter("LLRs must be finite.")
    if max_iters < 0:
        raise InvalidParameter(f"max_iters must not be negative, got {max_iters}.")
    channel = np.clip(channel, -LLR_CLAMP, LLR_CLAMP)
    hard = _hard_decision(channel)
    if not h.syndrome(hard).any():
        return DecodeResult(hard_bits=hard, converged=True, iterations_used=0)

    layout = h.layout
    padding = ~layout.mask
    var_to_check = channel[layout.edge_vars]
    for iteration in range(1, max_iters + 1):
        tanh_half = np.tanh(var_to_check / 2)
        tanh_half[padding] = 1.0
        products = np.clip(_exclusive_products(tanh_half), -TANH_CLAMP, TANH_CLAMP)
        check_to_var = np.clip(2 * np.arctanh(products), -LLR_CLAMP, LLR_CLAMP)
        check_to_var[padding] = 0.0
        total = channel + np.bincount(layout.flat_vars, weights=check_to_var[layout.mask],
                                      minlength=h.n_cols)
        hard = _hard_decision(total)
        if not h.syndrome(hard).any():
            return DecodeResult(hard_bits=hard, converged=True, iterations_used=iteration)
        var_to_check = np.clip(total[layout.edge_vars] - check_to_var, -LLR_CLAMP, LLR_CLAMP)
    return DecodeResult(hard_bits=hard, converged=False, iterations_used=max_iters)

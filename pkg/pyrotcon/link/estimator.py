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
Estimation of the rotation angle at the receiver.

A brute-force search evaluates the likelihood objective F at all 2**ell grid angles. Symmetric
constellations yield several angles with the same maximal F; these candidates are told apart by
the syndrome weight of the hard decisions after derotation, the correct angle leaving only a few
parity checks unsatisfied.
"""

from __future__ import annotations
from dataclasses import dataclass, replace
import logging
from typing import Any, Optional, Union

import numpy as np
from scipy.special import logsumexp

from ..core.ldpc import ParityCheckMatrix, syndrome_weight
from ..core.modem import Constellation, hard_demap
from ..core.rotation import RotationAngle, bits_of_angle, check_ell, grid_angles, rotate
from ..errors import EmptyCandidateSet, InvalidParameter


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

# Relative tolerance for objective values to count as tie
TIE_TOLERANCE = 1e-9
# Upper bound of elements of the intermediate distance array
_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class Candidate:
    angle: RotationAngle
    objective: float
    syndrome_weight: Optional[int] = None


@dataclass(frozen=True)
class CandidateSet:
    """Candidate rotation angles sorted by descending objective, ties by grid index.

    The counters record the work done: objective evaluations of the search and syndrome
    computations of the disambiguation.
    """

    entries: tuple[Candidate, ...]
    ell: int
    objective_evaluations: int = 0
    syndrome_computations: int = 0
    chosen: Optional[int] = None

    @property
    def size(self) -> int:
        """The list size I."""
        return len(self.entries)

    @property
    def grid_indices(self) -> list[int]:
        return [entry.angle.grid_index for entry in self.entries]  # type: ignore[misc]

    @property
    def objective_max(self) -> float:
        return max(entry.objective for entry in self.entries)

    def diagnostics(self) -> dict[str, Any]:
        """Describe the candidates as a flat record, e.g. for a CSV row."""
        return {
            "angles": ";".join(str(i) for i in self.grid_indices),
            "objectives": ";".join(repr(entry.objective) for entry in self.entries),
            "weights": ";".join("" if entry.syndrome_weight is None
                                else str(entry.syndrome_weight) for entry in self.entries),
            "chosen": "" if self.chosen is None else str(self.chosen),
        }


@dataclass(frozen=True)
class SearchMode:
    """How the candidate list is formed.

    Tie mode (default) keeps all angles with F >= F_max - tolerance * max(1, |F_max|) and adds
    the symmetry coset of the best angle. Threshold mode keeps all angles with F >= threshold,
    or F >= F_max - threshold_delta.
    """

    tolerance: float = TIE_TOLERANCE
    threshold: Optional[float] = None
    threshold_delta: Optional[float] = None
    widen_by_coset: bool = True

    def __post_init__(self) -> None:
        if self.threshold is not None and self.threshold_delta is not None:
            raise InvalidParameter("Give either an absolute threshold or a delta, not both.")
        if self.threshold_delta is not None and self.threshold_delta < 0:
            raise InvalidParameter(f"threshold_delta has to be >= 0, got {self.threshold_delta}.")

    @property
    def is_threshold(self) -> bool:
        return self.threshold is not None or self.threshold_delta is not None

    def limit(self, f_max: float) -> float:
        if self.threshold is not None:
            return self.threshold
        if self.threshold_delta is not None:
            return f_max - self.threshold_delta
        return f_max - self.tolerance * max(1.0, abs(f_max))


def _check_sigma2(sigma2: float) -> None:
    if not sigma2 > 0:
        raise InvalidParameter(f"sigma2 has to be positive, got {sigma2}.")


def objectives(y: np.ndarray, cons: Constellation, radians: np.ndarray, sigma2: float
               ) -> np.ndarray:
    """Evaluate F at each angle of `radians`."""
    _check_sigma2(sigma2)
    samples = np.asarray(y, dtype=complex).reshape(-1)
    radians = np.atleast_1d(np.asarray(radians, dtype=float))
    values = np.empty(radians.size)
    step = max(1, _CHUNK_ELEMENTS // max(1, samples.size * cons.size))
    for start in range(0, radians.size, step):
        chunk = radians[start:start + step]
        rotated = cons.points[np.newaxis, :] * np.exp(1j * chunk)[:, np.newaxis]
        distances = np.abs(samples[np.newaxis, :, np.newaxis]
                           - rotated[:, np.newaxis, :]) ** 2
        values[start:start + step] = logsumexp(-distances / sigma2, axis=2).sum(axis=1)
    return values


def objective(y: np.ndarray, cons: Constellation, theta: Union[RotationAngle, float],
              sigma2: float) -> float:
    """F(theta) = sum_t log sum_i exp(-|y_t - s_i exp(j theta)|^2 / sigma2)."""
    radians = theta.radians if isinstance(theta, RotationAngle) else float(theta)
    return float(objectives(y, cons, np.array([radians]), sigma2)[0])


def symmetry_coset(theta: RotationAngle, cons: Constellation, ell: int) -> list[RotationAngle]:
    """Angles theta + 2*pi*k/q (modulo 2*pi) which lie on the grid, starting with theta."""
    size = 1 << check_ell(ell)
    index = theta.grid_index if theta.ell == ell else None
    if index is None:
        index = bits_of_angle(theta, ell).d
    q = cons.symmetry_order
    return [RotationAngle.on_grid(index + (k * size) // q, ell)
            for k in range(q) if (k * size) % q == 0]


def brute_force_search(y: np.ndarray, cons: Constellation, ell: int, sigma2: float,
                       mode: SearchMode = SearchMode()) -> CandidateSet:
    """Evaluate F at all 2**ell grid angles and form the candidate list.

    :raises EmptyCandidateSet: if an absolute threshold lies above F_max.
    """
    values = objectives(y, cons, grid_angles(ell), sigma2)
    best = int(np.argmax(values))
    f_max = float(values[best])
    limit = mode.limit(f_max)
    if limit > f_max:
        raise EmptyCandidateSet(threshold=limit, maximum=f_max)
    selected = set(np.flatnonzero(values >= limit).tolist())
    if mode.widen_by_coset and not mode.is_threshold:
        best_angle = RotationAngle.on_grid(best, ell)
        selected.update(a.grid_index for a in symmetry_coset(best_angle, cons, ell))  # type: ignore  # noqa
    indices = np.array(sorted(selected), dtype=np.int64)
    indices = indices[np.lexsort((indices, -values[indices]))]
    entries = tuple(Candidate(angle=RotationAngle.on_grid(int(i), ell),
                              objective=float(values[i])) for i in indices)
    return CandidateSet(entries=entries, ell=ell, objective_evaluations=values.size)


def disambiguate(y: np.ndarray, candidates: CandidateSet, h: ParityCheckMatrix,
                 cons: Constellation) -> tuple[RotationAngle, CandidateSet]:
    """Pick the candidate whose derotated hard decisions violate the fewest parity checks.

    Ties go to the lowest grid index. Hard decisions beyond the code length (padding) are
    ignored.
    """
    if not candidates.entries:
        raise InvalidParameter("The candidate set is empty.")
    weighted = []
    for entry in candidates.entries:
        bits = hard_demap(rotate(y, -entry.angle), cons)[:h.n_cols]
        weighted.append(replace(entry, syndrome_weight=syndrome_weight(bits, h)))
    winner = min(weighted, key=lambda e: (e.syndrome_weight, e.angle.grid_index))
    log.debug(f"Syndrome weights {[e.syndrome_weight for e in weighted]}, "
              f"chose grid index {winner.angle.grid_index}.")
    result = replace(candidates, entries=tuple(weighted), syndrome_computations=len(weighted),
                     chosen=winner.angle.grid_index)
    return winner.angle, result

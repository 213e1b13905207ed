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
Monte Carlo harness: error rate sweeps over SNR points and syndrome weight statistics.

Frames are simulated in batches of fixed size, either in this process or in a process pool.
Every frame draws its random numbers from substreams of the master seed, and the outcomes are
reduced in frame order, so the results do not depend on the number of workers.
"""

from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import io
import logging
import math
from typing import Any, Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from ..core import DEFAULT_MAX_ITERATIONS
from ..core.channel import NoiseSpec, SnrConvention, awgn, frame_streams
from ..core.ldpc import Encoder, ParityCheckMatrix, syndrome_weight
from ..core.modem import ConstellationKind, hard_demap
from ..core.rotation import angle_of, rotate
from ..errors import InvalidParameter
from ..link.estimator import symmetry_coset
from ..link.pipeline import Frame, FrameOutcome, TxConfig, encode_frame, rotation_collisions
from ..link.pipeline import simulate_frame
from .sim_config import SimConfig


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

T = TypeVar("T")

CSV_COLUMNS = (
    "snr_db", "convention", "constellation", "ell", "frames",
    "extra_fer", "extra_err_count", "payload_ber", "payload_bit_errs", "baseline_ber",
    "mean_iters", "mean_list_size",
    "mean_objective_evals", "mean_syndrome_comps", "non_converged",
)
DEFAULT_BIN_WIDTH = 8


def binomial_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Normal approximation confidence interval of the rate k/n, clipped to [0, 1]."""
    if n < 1:
        return 0.0, 1.0
    p = k / n
    half = z * math.sqrt(p * (1 - p) / n)
    return max(0.0, p - half), min(1.0, p + half)


def _rate_sigma(k: int, n: int) -> float:
    p = k / n
    return math.sqrt(p * (1 - p) / n)


@dataclass
class PointResult:
    """Counts of one SNR point."""

    snr_db: float
    convention: SnrConvention
    constellation: ConstellationKind
    ell: int
    k: int
    frames: int = 0
    extra_errors: int = 0
    frame_errors: int = 0
    payload_bit_errors: int = 0
    baseline_bit_errors: Optional[int] = None
    spa_iterations: int = 0
    list_sizes: int = 0
    objective_evaluations: int = 0
    syndrome_computations: int = 0
    non_converged: int = 0

    def add(self, outcome: FrameOutcome) -> None:
        self.frames += 1
        self.extra_errors += outcome.extra_error
        self.frame_errors += outcome.frame_error
        self.payload_bit_errors += outcome.payload_bit_errors
        if outcome.baseline_bit_errors is not None:
            self.baseline_bit_errors = ((self.baseline_bit_errors or 0)
                                        + outcome.baseline_bit_errors)
        self.spa_iterations += outcome.spa_iterations
        self.list_sizes += outcome.list_size
        self.objective_evaluations += outcome.objective_evaluations
        self.syndrome_computations += outcome.syndrome_computations
        self.non_converged += not outcome.converged

    @property
    def extra_fer(self) -> float:
        return self.extra_errors / self.frames

    @property
    def payload_ber(self) -> float:
        return self.payload_bit_errors / (self.frames * self.k)

    @property
    def baseline_ber(self) -> Optional[float]:
        if self.baseline_bit_errors is None:
            return None
        return self.baseline_bit_errors / (self.frames * self.k)

    @property
    def mean_iters(self) -> float:
        return self.spa_iterations / self.frames

    @property
    def mean_list_size(self) -> float:
        return self.list_sizes / self.frames

    @property
    def mean_objective_evaluations(self) -> float:
        return self.objective_evaluations / self.frames

    @property
    def mean_syndrome_computations(self) -> float:
        return self.syndrome_computations / self.frames

    def row(self) -> dict[str, str]:
        """Values formatted for the CSV output."""
        baseline = self.baseline_ber
        return {
            "snr_db": f"{self.snr_db:g}",
            "convention": str(self.convention),
            "constellation": str(self.constellation),
            "ell": str(self.ell),
            "frames": str(self.frames),
            "extra_fer": f"{self.extra_fer:.6e}",
            "extra_err_count": str(self.extra_errors),
            "payload_ber": f"{self.payload_ber:.6e}",
            "payload_bit_errs": str(self.payload_bit_errors),
            "baseline_ber": "" if baseline is None else f"{baseline:.6e}",
            "mean_iters": f"{self.mean_iters:.4f}",
            "mean_list_size": f"{self.mean_list_size:.4f}",
            "mean_objective_evals": f"{self.mean_objective_evaluations:.4f}",
            "mean_syndrome_comps": f"{self.mean_syndrome_computations:.4f}",
            "non_converged": str(self.non_converged),
        }


def format_csv(points: Iterable[PointResult]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for point in points:
        writer.writerow(point.row())
    return buffer.getvalue()


@dataclass
class SimResult:
    config: SimConfig
    points: list[PointResult] = field(default_factory=list)

    def to_csv(self) -> str:
        return format_csv(self.points)


def check_monotonicity(points: Sequence[PointResult]) -> list[str]:
    """Flag rates which rise between consecutive SNR points by more than two standard deviations.

    :return: list of the logged warnings.
    """
    warnings = []
    ordered = sorted(points, key=lambda p: p.snr_db)
    for low, high in zip(ordered, ordered[1:]):
        rates = (
            ("extra_fer", low.extra_errors, low.frames, high.extra_errors, high.frames),
            ("payload_ber", low.payload_bit_errors, low.frames * low.k,
             high.payload_bit_errors, high.frames * high.k),
        )
        for name, k_low, n_low, k_high, n_high in rates:
            p_low, p_high = k_low / n_low, k_high / n_high
            sigma = math.hypot(_rate_sigma(k_low, n_low), _rate_sigma(k_high, n_high))
            if p_high > p_low + 2 * sigma:
                message = (f"{name} rises from {p_low:.3e} at {low.snr_db:g} dB to {p_high:.3e} "
                           f"at {high.snr_db:g} dB (ell={low.ell}).")
                log.warning(message)
                warnings.append(message)
    return warnings


# Worker side
_worker_state: dict[str, Any] = {}


def _init_worker(tx: TxConfig) -> None:
    _worker_state["tx"] = tx


@dataclass(frozen=True)
class FrameBatch:
    """Frames start..stop-1 of one SNR point."""

    point_index: int
    start: int
    stop: int
    noise: NoiseSpec
    seed: int
    max_iters: int = DEFAULT_MAX_ITERATIONS
    baseline: bool = False


def simulate_batch(batch: FrameBatch) -> list[FrameOutcome]:
    tx: TxConfig = _worker_state["tx"]
    return [simulate_frame(tx, batch.noise, frame_streams(batch.seed, i, batch.point_index),
                           batch.max_iters, batch.baseline)
            for i in range(batch.start, batch.stop)]


def weigh_batch(batch: FrameBatch) -> list[list[int]]:
    """Syndrome weights of the hard decisions derotated by each angle of the symmetry coset of
    the true angle, the weight of the true angle first."""
    tx: TxConfig = _worker_state["tx"]
    weights = []
    for i in range(batch.start, batch.stop):
        streams = frame_streams(batch.seed, i, batch.point_index)
        frame = Frame.random(tx, streams.data)
        y = awgn(encode_frame(frame.u, frame.v, tx), batch.noise, streams.noise)
        weights.append([
            syndrome_weight(hard_demap(rotate(y, -angle), tx.cons)[:tx.n], tx.h)
            for angle in symmetry_coset(angle_of(frame.v), tx.cons, tx.ell)])
    return weights


class FrameRunner:
    """Run frame batches in this process (one worker) or in a process pool.

    Results are returned in the order of the batches.

    .. code::

        with FrameRunner(tx, workers=4) as runner:
            outcomes = runner.map(simulate_batch, batches)
    """

    def __init__(self, tx: TxConfig, workers: int = 1) -> None:
        self.tx = tx
        self.workers = workers
        self._executor: Optional[ProcessPoolExecutor] = None

    def __enter__(self) -> FrameRunner:
        if self.workers > 1:
            self._executor = ProcessPoolExecutor(max_workers=self.workers,
                                                 initializer=_init_worker,
                                                 initargs=(self.tx,))
        else:
            _init_worker(self.tx)
        return self

    def __exit__(self, *args: Any) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None
        else:
            _worker_state.clear()

    def map(self, function: Callable[[FrameBatch], T], batches: Sequence[FrameBatch]
            ) -> list[T]:
        if self._executor is None:
            return [function(batch) for batch in batches]
        return list(self._executor.map(function, batches))


def _run_point(runner: FrameRunner, cfg: SimConfig, tx: TxConfig, point_index: int,
               snr_db: float) -> PointResult:
    noise = cfg.noise(snr_db, tx)
    point = PointResult(snr_db=snr_db, convention=cfg.snr_convention,
                        constellation=cfg.constellation, ell=cfg.ell, k=tx.k)
    wave = cfg.batch_size * cfg.workers
    for wave_start in range(0, cfg.frames, wave):
        wave_stop = min(cfg.frames, wave_start + wave)
        batches = [FrameBatch(point_index=point_index, start=start,
                              stop=min(wave_stop, start + cfg.batch_size), noise=noise,
                              seed=cfg.seed, max_iters=cfg.max_iters, baseline=cfg.baseline)
                   for start in range(wave_start, wave_stop, cfg.batch_size)]
        for outcomes in runner.map(simulate_batch, batches):
            for outcome in outcomes:
                point.add(outcome)
                if point.frame_errors >= cfg.max_errors:
                    log.debug(f"Reached {point.frame_errors} frame errors after {point.frames} "
                              "frames.")
                    return point
        log.debug(f"{point.frames} frames, {point.frame_errors} frame errors.")
    return point


def run_monte_carlo(cfg: SimConfig,
                    code: Optional[tuple[ParityCheckMatrix, Encoder]] = None) -> SimResult:
    """Simulate all SNR points of `cfg`.

    A point stops after `cfg.frames` frames or at the frame which reaches `cfg.max_errors` frame
    errors (wrong extra bits or any wrong payload bit).

    :param code: parity-check matrix and encoder, built from `cfg` if not given.
    """
    cfg.validate()
    tx = cfg.tx_config(code)
    log.info(f"Simulating {cfg.constellation} with ell={cfg.ell} and C[{tx.n},{tx.k}] at "
             f"{len(cfg.snr_points)} SNR points ({cfg.snr_convention}).")
    collisions = rotation_collisions(tx, np.random.default_rng(cfg.seed))
    if collisions:
        log.warning(f"Rotations by {[round(a.radians, 6) for a in collisions]} rad map codewords "
                    "onto codewords, these extra bit values can not be told apart.")
    result = SimResult(config=cfg)
    with FrameRunner(tx, cfg.workers) as runner:
        for index, snr_db in enumerate(cfg.snr_points):
            point = _run_point(runner, cfg, tx, index, snr_db)
            log.info(f"{snr_db:g} dB: {point.frames} frames, {point.extra_errors} extra bit "
                     f"errors, {point.payload_bit_errors} payload bit errors.")
            if point.non_converged:
                log.warning(f"{snr_db:g} dB: the decoder did not converge on "
                            f"{point.non_converged} of {point.frames} frames.")
            result.points.append(point)
    check_monotonicity(result.points)
    return result


def run_sweep(cfg: SimConfig, ells: Iterable[int],
              code: Optional[tuple[ParityCheckMatrix, Encoder]] = None) -> list[SimResult]:
    """Run :func:`run_monte_carlo` for several numbers of extra bits on the same code."""
    code = code or cfg.build_code()
    return [run_monte_carlo(cfg.with_ell(ell), code) for ell in ells]


@dataclass(frozen=True, eq=False)
class SyndromeWeights:
    """Syndrome weights for the true angle (one per frame) and the erroneous coset angles."""

    correct: np.ndarray
    erroneous: np.ndarray
    n_checks: int

    def histogram(self, bin_width: int = DEFAULT_BIN_WIDTH
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bin both distributions on the same edges, covering 0..n_checks.

        :return: bin edges, counts of correct and of erroneous angles.
        """
        edges = np.arange(0, self.n_checks + bin_width, bin_width)
        correct, _ = np.histogram(self.correct, bins=edges)
        erroneous, _ = np.histogram(self.erroneous, bins=edges)
        return edges, correct, erroneous

    def to_csv(self, bin_width: int = DEFAULT_BIN_WIDTH) -> str:
        edges, correct, erroneous = self.histogram(bin_width)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("bin_start", "bin_stop", "correct", "erroneous"))
        for i in range(correct.size):
            writer.writerow((int(edges[i]), int(edges[i + 1]), int(correct[i]),
                             int(erroneous[i])))
        return buffer.getvalue()


def histogram_syndrome_weights(cfg: SimConfig, snr_db: float, frames: int,
                               code: Optional[tuple[ParityCheckMatrix, Encoder]] = None
                               ) -> SyndromeWeights:
    """Record the syndrome weight of the true angle and of every other angle of its symmetry
    coset for `frames` random frames at `snr_db`."""
    cfg.validate()
    if frames < 1:
        raise InvalidParameter(f"frames has to be >= 1, got {frames}.")
    tx = cfg.tx_config(code)
    noise = cfg.noise(snr_db, tx)
    batches = [FrameBatch(point_index=0, start=start,
                          stop=min(frames, start + cfg.batch_size), noise=noise, seed=cfg.seed)
               for start in range(0, frames, cfg.batch_size)]
    with FrameRunner(tx, cfg.workers) as runner:
        per_frame = [w for weights in runner.map(weigh_batch, batches) for w in weights]
    correct = np.array([w[0] for w in per_frame], dtype=np.int64)
    erroneous = np.array([x for w in per_frame for x in w[1:]], dtype=np.int64)
    result = SyndromeWeights(correct=correct, erroneous=erroneous, n_checks=tx.h.n_rows)
    log.info(f"Mean syndrome weight {correct.mean() if correct.size else math.nan:.2f} for the "
             f"correct angle, {erroneous.mean() if erroneous.size else math.nan:.2f} for the "
             f"other coset angles (M={tx.h.n_rows}).")
    return result

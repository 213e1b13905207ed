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
End-to-end transmitter and receiver of the rotated constellation scheme.

Transmitter: encode the payload u, map the codeword onto the constellation and rotate the frame
by r(v). Receiver: search the rotation angle, resolve the symmetry ambiguity with the syndrome
weight, derotate and decode the payload with the sum-product algorithm.

.. code::

    cfg = TxConfig.build(h, make_constellation("qpsk"), ell=4, encoder=encoder)
    x = encode_frame(u, v, cfg)
    result = decode_frame(awgn(x, noise, rng), cfg, sigma2=noise.sigma2)
"""

from __future__ import annotations
from dataclasses import dataclass
import logging
from typing import Optional, Union, Sequence

import numpy as np

from ..core import DEFAULT_MAX_ITERATIONS
from ..core.channel import FrameStreams, NoiseSpec, awgn
from ..core.ldpc import DecodeResult, Encoder, ParityCheckMatrix, build_encoder, encode
from ..core.ldpc import sum_product_decode, syndrome_weight
from ..core.modem import Constellation, hard_demap, map_bits, soft_demap
from ..core.rotation import ExtraBits, RotationAngle, angle_of, bits_of_angle, check_ell, rotate
from ..errors import InvalidParameter, LengthMismatch
from .estimator import CandidateSet, SearchMode, brute_force_search, disambiguate, symmetry_coset


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True, eq=False)
class TxConfig:
    """Code, constellation and number of extra bits shared by transmitter and receiver.

    Codewords whose length is not a multiple of `cons.m` get zero bits appended before
    modulation; the receiver knows and drops them.
    """

    h: ParityCheckMatrix
    encoder: Encoder
    cons: Constellation
    ell: int
    search: SearchMode = SearchMode()

    def __post_init__(self) -> None:
        check_ell(self.ell)
        if self.encoder.matrix != self.h:
            raise InvalidParameter("The encoder belongs to another parity-check matrix.")

    @classmethod
    def build(cls, h: ParityCheckMatrix, cons: Constellation, ell: int,
              encoder: Optional[Encoder] = None, search: SearchMode = SearchMode()
              ) -> TxConfig:
        return cls(h=h, encoder=encoder or build_encoder(h), cons=cons, ell=ell, search=search)

    @property
    def n(self) -> int:
        return self.h.n_cols

    @property
    def k(self) -> int:
        return self.encoder.k

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def padding(self) -> int:
        return (-self.n) % self.cons.m

    @property
    def n_symbols(self) -> int:
        return (self.n + self.padding) // self.cons.m


@dataclass(frozen=True, eq=False)
class Frame:
    """Payload bits u and extra bits v of one transmission."""

    u: np.ndarray
    v: ExtraBits

    @classmethod
    def random(cls, cfg: TxConfig, rng: np.random.Generator) -> Frame:
        u = rng.integers(0, 2, size=cfg.k, dtype=np.uint8)
        d = int(rng.integers(0, 1 << cfg.ell))
        return cls(u=u, v=ExtraBits.from_int(d, cfg.ell))


@dataclass(frozen=True, eq=False)
class FrameResult:
    """Receiver output of one frame.

    `angle_correct` and `payload_bit_errors` are only known if the sent frame was given.
    """

    u_hat: np.ndarray
    v_hat: ExtraBits
    angle: RotationAngle
    angle_correct: Optional[bool]
    payload_bit_errors: Optional[int]
    spa_iterations: int
    converged: bool
    candidate_diagnostics: CandidateSet


def modulate(codeword: np.ndarray, cfg: TxConfig) -> np.ndarray:
    """Append the padding zeros and map the codeword onto the constellation."""
    padded = np.concatenate((codeword, np.zeros(cfg.padding, dtype=np.uint8)))
    return map_bits(padded, cfg.cons)


def encode_frame(u: Union[np.ndarray, Sequence[int]], v: ExtraBits, cfg: TxConfig
                 ) -> np.ndarray:
    """Encode, modulate and rotate a frame by r(v)."""
    if v.ell != cfg.ell:
        raise LengthMismatch("v", expected=cfg.ell, actual=v.ell)
    return rotate(modulate(encode(cfg.encoder, u), cfg), angle_of(v))


def _check_received(y: np.ndarray, cfg: TxConfig) -> np.ndarray:
    samples = np.asarray(y, dtype=complex)
    if samples.ndim != 1 or samples.size != cfg.n_symbols:
        raise LengthMismatch("y", expected=cfg.n_symbols, actual=samples.size)
    return samples


def detect_extra_bits(y: np.ndarray, cfg: TxConfig, sigma2: float
                      ) -> tuple[ExtraBits, CandidateSet]:
    """Estimate the extra bits without decoding the payload."""
    samples = _check_received(y, cfg)
    candidates = brute_force_search(samples, cfg.cons, cfg.ell, sigma2, cfg.search)
    angle, candidates = disambiguate(samples, candidates, cfg.h, cfg.cons)
    return bits_of_angle(angle, cfg.ell), candidates


def decode_payload(y_tilde: np.ndarray, cfg: TxConfig, sigma2: float,
                   max_iters: int = DEFAULT_MAX_ITERATIONS) -> tuple[np.ndarray, DecodeResult]:
    """Demap a derotated frame softly, run the decoder and read the information bits."""
    llrs = soft_demap(y_tilde, cfg.cons, sigma2)[:cfg.n]
    result = sum_product_decode(llrs, cfg.h, max_iters)
    return cfg.encoder.extract_information(result.hard_bits), result


def decode_frame(y: np.ndarray, cfg: TxConfig, sigma2: float,
                 max_iters: int = DEFAULT_MAX_ITERATIONS,
                 sent: Optional[Frame] = None,
                 forced_angle: Optional[RotationAngle] = None,
                 ) -> FrameResult:
    """Run the complete receiver on the received samples `y`.

    :param sent: the transmitted frame, to score the result.
    :param forced_angle: use this angle instead of the syndrome based choice (for tests).
    """
    samples = _check_received(y, cfg)
    candidates = brute_force_search(samples, cfg.cons, cfg.ell, sigma2, cfg.search)
    if forced_angle is None:
        angle, candidates = disambiguate(samples, candidates, cfg.h, cfg.cons)
    else:
        angle = forced_angle
    v_hat = bits_of_angle(angle, cfg.ell)
    u_hat, decoded = decode_payload(rotate(samples, -angle), cfg, sigma2, max_iters)
    angle_correct: Optional[bool] = None
    errors: Optional[int] = None
    if sent is not None:
        angle_correct = v_hat == sent.v
        errors = int(np.count_nonzero(u_hat != np.asarray(sent.u, dtype=np.uint8)))
    return FrameResult(u_hat=u_hat, v_hat=v_hat, angle=angle, angle_correct=angle_correct,
                       payload_bit_errors=errors, spa_iterations=decoded.iterations_used,
                       converged=decoded.converged, candidate_diagnostics=candidates)


@dataclass(frozen=True)
class FrameOutcome:
    """Counts of one simulated frame."""

    extra_error: bool
    payload_bit_errors: int
    spa_iterations: int
    converged: bool
    list_size: int
    objective_evaluations: int
    syndrome_computations: int
    baseline_bit_errors: Optional[int] = None

    @property
    def frame_error(self) -> bool:
        return self.extra_error or self.payload_bit_errors > 0


def simulate_frame(cfg: TxConfig, noise: NoiseSpec, streams: FrameStreams,
                   max_iters: int = DEFAULT_MAX_ITERATIONS, baseline: bool = False
                   ) -> FrameOutcome:
    """Transmit a random frame over the AWGN channel and receive it.

    With `baseline`, the channel output derotated by the true angle is also decoded directly,
    which is the payload link without extra bits under the same noise realization. Whenever the
    receiver finds the true angle, both payload paths see identical input.
    """
    frame = Frame.random(cfg, streams.data)
    y = awgn(encode_frame(frame.u, frame.v, cfg), noise, streams.noise)
    result = decode_frame(y, cfg, noise.sigma2, max_iters, sent=frame)
    baseline_errors: Optional[int] = None
    if baseline:
        u_base, _ = decode_payload(rotate(y, -angle_of(frame.v)), cfg, noise.sigma2, max_iters)
        baseline_errors = int(np.count_nonzero(u_base != frame.u))
    diagnostics = result.candidate_diagnostics
    return FrameOutcome(
        extra_error=not result.angle_correct,
        payload_bit_errors=result.payload_bit_errors or 0,
        spa_iterations=result.spa_iterations,
        converged=result.converged,
        list_size=diagnostics.size,
        objective_evaluations=diagnostics.objective_evaluations,
        syndrome_computations=diagnostics.syndrome_computations,
        baseline_bit_errors=baseline_errors,
    )


def rotation_collisions(cfg: TxConfig, rng: np.random.Generator, trials: int = 3
                        ) -> list[RotationAngle]:
    """Symmetry rotations which map every codeword frame onto the frame of another codeword.

    The syndrome can not tell such an angle from the true one, for example the rotation by pi of
    QPSK if the all-ones word is a codeword. The test uses `trials` random codewords.
    """
    frames = [modulate(encode(cfg.encoder, rng.integers(0, 2, size=cfg.k, dtype=np.uint8)), cfg)
              for _ in range(trials)]
    collisions = []
    for angle in symmetry_coset(RotationAngle.on_grid(0, cfg.ell), cfg.cons, cfg.ell)[1:]:
        if all(syndrome_weight(hard_demap(rotate(x, -angle), cfg.cons)[:cfg.n], cfg.h) == 0
               for x in frames):
            collisions.append(angle)
    return collisions

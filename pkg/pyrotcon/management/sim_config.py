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
Configuration of a Monte Carlo simulation.

The same field names serve as long command line options (dashes instead of underscores) and as
keys of the plain text config file.
"""

from __future__ import annotations
from dataclasses import dataclass, fields, replace
import logging
from typing import Any, Callable, Mapping, Optional, Union

from ..core import DEFAULT_MAX_ITERATIONS, MAX_EXTRA_BITS
from ..core.alist import read_alist
from ..core.channel import NoiseSpec, SnrConvention, sigma_from_snr
from ..core.ldpc import CheckProfile, Encoder, ParityCheckMatrix, build_encoder, construct_code
from ..core.modem import ConstellationKind, make_constellation
from ..errors import InvalidConfig
from ..link.estimator import SearchMode
from ..link.pipeline import TxConfig


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


# Exploratory SNR sweeps in dB
DEFAULT_SNRS: dict[ConstellationKind, tuple[float, ...]] = {
    ConstellationKind.QPSK: (0.0, 1.0, 2.0, 3.0, 4.0),
    ConstellationKind.GRAY16QAM: (3.0, 4.0, 5.0, 6.0, 7.0),
}

# Check profile of the PEG code if none is configured
DEFAULT_PROFILES: dict[ConstellationKind, CheckProfile] = {
    ConstellationKind.QPSK: CheckProfile.MIXED,
    ConstellationKind.GRAY16QAM: CheckProfile.REGULAR,
}


def parse_float_list(value: Union[str, float, tuple, list]) -> tuple[float, ...]:
    """Read "1,2.5,3" (or an already parsed sequence) as a tuple of floats."""
    if isinstance(value, str):
        return tuple(float(item) for item in value.split(",") if item.strip())
    if isinstance(value, (int, float)):
        return (float(value),)
    return tuple(float(item) for item in value)


def parse_int_list(value: Union[str, int, tuple, list]) -> tuple[int, ...]:
    if isinstance(value, str):
        return tuple(int(item) for item in value.split(",") if item.strip())
    if isinstance(value, int):
        return (value,)
    return tuple(int(item) for item in value)


def parse_bool(value: Union[str, bool]) -> bool:
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"'{value}' is not a boolean")


def _optional(converter: Callable[[Any], Any]) -> Callable[[Any], Any]:
    def convert(value: Any) -> Any:
        if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none")):
            return None
        return converter(value)
    return convert


@dataclass(frozen=True)
class SimConfig:
    """Parameters of a sweep.

    The code is read from `alist` if given, otherwise a PEG matrix is built from `n_vars`,
    `n_checks`, `col_degree`, `code_profile` and `code_seed`. Without `snr`, the exploratory
    range of the constellation is used.
    """

    constellation: ConstellationKind = ConstellationKind.QPSK
    ell: int = 4
    snr: Optional[tuple[float, ...]] = None
    snr_convention: SnrConvention = SnrConvention.EBN0
    frames: int = 1000
    max_errors: int = 100
    max_iters: int = DEFAULT_MAX_ITERATIONS
    seed: int = 0
    workers: int = 1
    batch_size: int = 32
    baseline: bool = False
    threshold_delta: Optional[float] = None
    alist: Optional[str] = None
    n_vars: int = 2304
    n_checks: int = 1152
    col_degree: int = 3
    check_profile: Optional[CheckProfile] = None
    code_seed: int = 0
    out: Optional[str] = None

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> SimConfig:
        """Create a validated config from strings (config file) or parsed values.

        :raises InvalidConfig: for unknown keys and values which can not be converted.
        """
        known = {f.name for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in values.items():
            name = key.replace("-", "_")
            if name not in known:
                raise InvalidConfig(name, "unknown option")
            try:
                kwargs[name] = _CONVERTERS[name](value)
            except ValueError as exc:
                raise InvalidConfig(name, f"can not read '{value}': {exc}")
        config = cls(**kwargs)
        config.validate()
        log.debug(f"Simulation configuration: {config}")
        return config

    def validate(self) -> None:
        """Check the value ranges.

        :raises InvalidConfig: naming the first offending field.
        """
        if self.frames < 1:
            raise InvalidConfig("frames", f"has to be >= 1, got {self.frames}")
        if not 1 <= self.ell <= MAX_EXTRA_BITS:
            raise InvalidConfig("ell", f"has to be in 1..{MAX_EXTRA_BITS}, got {self.ell}")
        if self.snr is not None and len(self.snr) == 0:
            raise InvalidConfig("snr", "the list of SNR points is empty")
        for name in ("max_errors", "workers", "batch_size"):
            if getattr(self, name) < 1:
                raise InvalidConfig(name, f"has to be >= 1, got {getattr(self, name)}")
        for name in ("max_iters", "seed", "code_seed"):
            if getattr(self, name) < 0:
                raise InvalidConfig(name, f"has to be >= 0, got {getattr(self, name)}")
        if self.threshold_delta is not None and not self.threshold_delta >= 0:
            raise InvalidConfig("threshold_delta", f"has to be >= 0, got {self.threshold_delta}")
        if self.alist is None:
            if not 0 < self.n_checks < self.n_vars:
                raise InvalidConfig("n_checks", f"has to be in 1..{self.n_vars - 1}, "
                                    f"got {self.n_checks}")
            if self.col_degree < 1:
                raise InvalidConfig("col_degree", f"has to be >= 1, got {self.col_degree}")

    @property
    def snr_points(self) -> tuple[float, ...]:
        return self.snr if self.snr is not None else DEFAULT_SNRS[self.constellation]

    @property
    def search_mode(self) -> SearchMode:
        return SearchMode(threshold_delta=self.threshold_delta)

    @property
    def code_profile(self) -> CheckProfile:
        """The check profile of the PEG code, by default the one of the constellation.

        QPSK needs mixed check degrees: with even degrees only, the rotation by pi maps every
        codeword frame onto the frame of the complementary codeword. 16QAM uses the regular code.
        """
        if self.check_profile is not None:
            return self.check_profile
        return DEFAULT_PROFILES[self.constellation]

    def with_ell(self, ell: int) -> SimConfig:
        config = replace(self, ell=ell)
        config.validate()
        return config

    def build_code(self) -> tuple[ParityCheckMatrix, Encoder]:
        """Read the alist file or construct the PEG code."""
        if self.alist is not None:
            h = read_alist(self.alist)
            return h, build_encoder(h)
        return construct_code(self.n_vars, self.n_checks, self.col_degree, self.code_seed,
                              self.code_profile)

    def tx_config(self, code: Optional[tuple[ParityCheckMatrix, Encoder]] = None) -> TxConfig:
        h, encoder = code or self.build_code()
        return TxConfig.build(h, make_constellation(self.constellation), self.ell,
                              encoder=encoder, search=self.search_mode)

    def noise(self, snr_db: float, tx: TxConfig) -> NoiseSpec:
        return sigma_from_snr(snr_db, tx.rate, tx.cons.m, self.snr_convention)


_CONVERTERS: dict[str, Callable[[Any], Any]] = {
    "constellation": ConstellationKind,
    "ell": int,
    "snr": _optional(parse_float_list),
    "snr_convention": SnrConvention,
    "frames": int,
    "max_errors": int,
    "max_iters": int,
    "seed": int,
    "workers": int,
    "batch_size": int,
    "baseline": parse_bool,
    "threshold_delta": _optional(float),
    "alist": _optional(str),
    "n_vars": int,
    "n_checks": int,
    "col_degree": int,
    "check_profile": _optional(CheckProfile),
    "code_seed": int,
    "out": _optional(str),
}

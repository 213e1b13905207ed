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
Command line interface of the Monte Carlo harness.

.. code::

    pyrotcon make-code --out peg2304.alist
    pyrotcon -v sweep --constellation qpsk --ell 3,4 --snr 0,1,2,3 --alist peg2304.alist \
        --baseline --workers 8 --out qpsk.csv
    pyrotcon histogram --constellation 16qam --ell 3 --snr 6 --frames 1000 --out weights.csv

Options may also be given in a config file (``-c FILE``, ``key = value`` per line), the command
line wins.
"""

from __future__ import annotations
from argparse import ArgumentParser
import logging
from os import PathLike
import sys
from typing import Any, Callable, Optional, Union

from ..core.alist import read_alist, serialize_alist, write_alist
from ..core.channel import SnrConvention
from ..core.ldpc import CheckProfile, ParityCheckMatrix, construct_code
from ..core.modem import ConstellationKind
from ..errors import InvalidConfig, PyrotconError
from ..utils.parser import parser, parse_command_line_parameters
from .sim_config import SimConfig, parse_int_list
from .simulation import DEFAULT_BIN_WIDTH, format_csv, histogram_syndrome_weights, run_sweep


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

StrFormatter = logging.Formatter("%(asctime)s\t%(levelname)s\t%(name)s\t%(message)s")


def export_matrix(h: ParityCheckMatrix, path: Union[str, PathLike]) -> None:
    """Store the parity-check matrix as alist file."""
    write_alist(h, path)


def import_matrix(path: Union[str, PathLike]) -> ParityCheckMatrix:
    """Read and validate an alist file.

    :raises AlistParseError: naming the line of a malformed file.
    """
    return read_alist(path)


def _add_code_options(sub: ArgumentParser) -> None:
    sub.add_argument("--n-vars", type=int, help="code length N of a PEG code")
    sub.add_argument("--n-checks", type=int, help="number of parity checks M of a PEG code")
    sub.add_argument("--col-degree", type=int, help="variable node degree of a PEG code")
    sub.add_argument("--code-seed", type=int, help="seed of the PEG construction")
    sub.add_argument("--check-profile", choices=[p.value for p in CheckProfile],
                     help="regular check degrees or a mix of odd and even ones "
                          "(default: mixed for qpsk, regular for 16qam)")


def _add_simulation_options(sub: ArgumentParser) -> None:
    sub.add_argument("--constellation", choices=[k.value for k in ConstellationKind],
                     help="modulation of the payload")
    sub.add_argument("--ell", help="number of extra bits, a comma separated list for a sweep")
    sub.add_argument("--snr", help="comma separated SNR points in dB, write negative "
                     "values with an equals sign: --snr=-1,0,1")
    sub.add_argument("--snr-convention", choices=[c.value for c in SnrConvention],
                     help="SNR per information bit (ebn0) or per symbol (esn0)")
    sub.add_argument("--frames", type=int, help="frames per SNR point")
    sub.add_argument("--seed", type=int, help="master seed of all random numbers")
    sub.add_argument("--workers", type=int, help="number of worker processes")
    sub.add_argument("--batch-size", type=int, help="frames per work item")
    sub.add_argument("--alist", help="read the parity-check matrix from this alist file")
    sub.add_argument("--max-iters", type=int, help="maximum sum-product iterations")
    sub.add_argument("--threshold-delta", type=float,
                     help="keep all angles within this distance of the maximal objective")
    sub.add_argument("--out", help="write the CSV to this file instead of stdout")
    _add_code_options(sub)


def make_parser() -> ArgumentParser:
    """Create the parser with the subcommands on top of the shared verbosity options."""
    cli = ArgumentParser(prog="pyrotcon", parents=[parser], add_help=False,
                         description="Simulate extra bits carried by constellation rotation.")
    subparsers = cli.add_subparsers(dest="command", required=True)

    sweep = subparsers.add_parser("sweep", help="extra bit FER and payload BER over SNR")
    _add_simulation_options(sweep)
    sweep.add_argument("--max-errors", type=int,
                       help="stop an SNR point after this many frame errors")
    sweep.add_argument("--baseline", action="store_true", default=None,
                       help="also decode the payload without extra bits on the same noise")

    histogram = subparsers.add_parser(
        "histogram", help="syndrome weights of the correct and the erroneous angles")
    _add_simulation_options(histogram)
    histogram.add_argument("--bin-width", type=int, help="histogram bin width")

    make_code = subparsers.add_parser("make-code", help="construct a PEG code as alist file")
    make_code.add_argument("--constellation", choices=[k.value for k in ConstellationKind],
                           help="modulation the code is meant for, selects the default profile")
    _add_code_options(make_code)
    make_code.add_argument("--out", help="write the alist file here instead of stdout")
    return cli


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as file:
        file.write(text)
    log.info(f"Wrote '{path}'.")


def _ell_list(value: Any) -> tuple[int, ...]:
    try:
        ells = parse_int_list(value)
    except ValueError as exc:
        raise InvalidConfig("ell", f"can not read '{value}': {exc}")
    if not ells:
        raise InvalidConfig("ell", "no value given")
    return ells


def run_sweep_command(options: dict[str, Any]) -> None:
    options.pop("bin_width", None)
    ells = _ell_list(options.pop("ell", SimConfig.ell))
    cfg = SimConfig.from_mapping(options)
    results = run_sweep(cfg, ells)
    _write_output(format_csv(point for result in results for point in result.points), cfg.out)


def run_histogram_command(options: dict[str, Any]) -> None:
    try:
        bin_width = int(options.pop("bin_width", DEFAULT_BIN_WIDTH))
    except ValueError as exc:
        raise InvalidConfig("bin_width", str(exc))
    if bin_width < 1:
        raise InvalidConfig("bin_width", f"has to be >= 1, got {bin_width}")
    ells = _ell_list(options.pop("ell", SimConfig.ell))
    if len(ells) != 1:
        raise InvalidConfig("ell", "the histogram takes a single value")
    cfg = SimConfig.from_mapping({**options, "ell": ells[0]})
    if len(cfg.snr_points) != 1 and cfg.snr is not None:
        raise InvalidConfig("snr", "the histogram takes a single SNR point")
    snr_db = cfg.snr_points[-1]
    weights = histogram_syndrome_weights(cfg, snr_db, cfg.frames)
    _write_output(weights.to_csv(bin_width), cfg.out)


def run_make_code_command(options: dict[str, Any]) -> None:
    options.pop("bin_width", None)
    options.pop("ell", None)
    cfg = SimConfig.from_mapping(options)
    h, _ = construct_code(cfg.n_vars, cfg.n_checks, cfg.col_degree, cfg.code_seed,
                          cfg.code_profile)
    if cfg.out is None:
        sys.stdout.write(serialize_alist(h))
    else:
        export_matrix(h, cfg.out)


COMMANDS: dict[str, Callable[[dict[str, Any]], None]] = {
    "sweep": run_sweep_command,
    "histogram": run_histogram_command,
    "make-code": run_make_code_command,
}


def main(arguments: Optional[list[str]] = None) -> None:
    """Run a subcommand, exit with status 1 on invalid input."""
    gLog = logging.getLogger()  # print all log entries!
    if not gLog.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(StrFormatter)
        gLog.addHandler(handler)
    try:
        kwargs = parse_command_line_parameters(parser=make_parser(), logger=gLog,
                                               arguments=arguments)
        COMMANDS[kwargs.pop("command")](kwargs)
    except (PyrotconError, OSError) as exc:
        log.error(str(exc))
        raise SystemExit(1)


if __name__ == "__main__":  # pragma: no cover
    main()

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

from __future__ import annotations
from argparse import ArgumentParser
import logging
from os import PathLike
from typing import Optional, Union

from ..errors import InvalidConfig


parser = ArgumentParser()
parser.add_argument("-c", "--config",
                    help="read option values from a plain text file with 'key = value' lines, "
                         "options given on the command line take precedence")
parser.add_argument("-q", "--quiet", action="count", default=0,
                    help="decrease the logging level by one, may be used more than once")
parser.add_argument("-v", "--verbose", action="count", default=0,
                    help="increase the logging level by one, may be used more than once")


def read_config_file(path: Union[str, PathLike]) -> dict[str, str]:
    """Read 'key = value' lines, ignoring blank lines and '#' comments.

    Keys are the long option names, dashes and underscores are equivalent.
    """
    values: dict[str, str] = {}
    with open(path, "r") as file:
        for number, line in enumerate(file, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise InvalidConfig(f"{path}:{number}", f"expected 'key = value', got '{line}'")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def parse_command_line_parameters(parser: ArgumentParser = parser,
                                  logger: Optional[logging.Logger] = None,
                                  arguments: Optional[list[str]] = None,
                                  parser_description: Optional[str] = None,
                                  logging_default: int = logging.WARNING,
                                  ) -> dict:
    """Parse the command line parameters and return a dictionary of the set values.

    Values from a config file (``--config``) are included unless the same option is given on
    the command line. Options without value (None) are removed.

    :param parser: parser to use, for example with more settings.
    :param logger: The logger whose log level to set. Defaults to "__main__" logger.
    :param list arguments: Arguments for the parser to parse. Per default, take it from `sys.argv`.
    :param str parser_description: Override the parsers program description description.
    :param int logging_default: Default level for logging.
    :return: Dictionary with keyword arguments parsed from the command line parameters.
    """
    if parser_description is not None:
        parser.description = parser_description
    kwargs = vars(parser.parse_args(arguments))
    verbosity = logging_default + (kwargs.pop("quiet", 0) - kwargs.pop("verbose", 0)) * 10
    if logger is None:
        logger = logging.getLogger("__main__")
    logger.setLevel(verbosity)
    for key, value in list(kwargs.items()):
        # remove not set values
        if value is None:
            del kwargs[key]
    config_path = kwargs.pop("config", None)
    if config_path is not None:
        kwargs = {**read_config_file(config_path), **kwargs}
    return kwargs

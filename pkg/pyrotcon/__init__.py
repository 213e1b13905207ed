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
pyrotcon - extra bits carried by the rotation of an LDPC coded QPSK or 16QAM frame.

:mod:`pyrotcon.core` holds the building blocks (code, modem, rotation, channel),
:mod:`pyrotcon.link` the transmitter and receiver of a frame and :mod:`pyrotcon.management`
the Monte Carlo harness with the ``pyrotcon`` command.
"""

from importlib.metadata import PackageNotFoundError, version
import logging

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


def _find_version() -> str:
    """Version of the checkout if setuptools_scm is available, otherwise of the installation.

    Editable installs report the version of their installation time.
    """
    try:
        import setuptools_scm  # type: ignore
        return setuptools_scm.get_version(root="..", relative_to=__file__)
    except (ImportError, LookupError):  # pragma: no cover
        pass
    try:  # pragma: no cover
        return version("pyrotcon")
    except PackageNotFoundError:  # pragma: no cover
        log.warning("Could not find the pyrotcon version, install pyrotcon (editable or full) "
                    "or setuptools_scm.")
        return "0.0.0"


__version__ = _find_version()

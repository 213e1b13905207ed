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

import pytest

from pyrotcon.errors import (AlistParseError, DataError, Error, InvalidConfig, InvalidParameter,
                             LengthMismatch, OffGridAngle, PyrotconError, RankDeficient)


def test_PyrotconError():
    error = Error(5, "abc")
    exc = PyrotconError(error)
    assert exc.error == error
    assert exc.args[0] == "5: abc"


def test_PyrotconError_with_data():
    exc = PyrotconError(DataError(7, "abc", data=[1, 2]))
    assert exc.args[0] == "7: abc\nError Data: [1, 2]"


def test_model_dump():
    assert DataError.from_error(Error(5, "abc"), 3).model_dump() == {
        "code": 5, "message": "abc", "data": 3}


@pytest.mark.parametrize("exc, code", (
    (LengthMismatch("u", expected=4, actual=3), 100),
    (InvalidParameter("bad"), 101),
    (OffGridAngle(0.3, 2), 102),
    (RankDeficient(rank=1, n_rows=2), 201),
    (AlistParseError(line=3, description="bad"), 400),
    (InvalidConfig("frames", "bad"), 401),
))
def test_codes(exc, code):
    assert isinstance(exc, PyrotconError)
    assert exc.error.code == code


def test_value_errors():
    assert isinstance(InvalidParameter("bad"), ValueError)
    assert isinstance(InvalidConfig("ell", "bad"), ValueError)


def test_length_mismatch_message():
    assert "'u' has length 3, expected 4." in str(LengthMismatch("u", expected=4, actual=3))

# ------------------------------------------------------------------------ #
# Copyright 2024 diffgws Working Group                                     #
#                                                                          #
# Licensed under the Apache License, Version 2.0 (the "License");          #
# you may not use this file except in compliance with the License.         #
# You may obtain a copy of the License at                                  #
#                                                                          #
#     http://www.apache.org/licenses/LICENSE-2.0                           #
#                                                                          #
# Unless required by applicable law or agreed to in writing, software      #
# distributed under the License is distributed on an "AS IS" BASIS,        #
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. #
# See the License for the specific language governing permissions and      #
# limitations under the License.                                           #
# ------------------------------------------------------------------------ #

import numpy as np
import pytest

import diffgws
import tests.utils as U


def test_example():
    res = diffgws.linprog([2, 3], [[1, 1], [6, 3], [1, 2]], [100, 360, 120])
    assert res.status == "optimal"
    assert U.allclose(res.x, [40, 40])
    assert U.allclose(res.fun, 200)

    # Strong duality.
    assert np.all(0 <= res.dual)
    assert U.allclose(res.dual @ np.array([100, 360, 120]), res.fun)


def test_unbounded():
    res = diffgws.linprog([1, 0], [[-1, 1]], [0])
    assert res.status == "unbounded"


def test_degenerate_cycling():
    # Cycles under the largest-coefficient rule.
    c = [10, -57, -9, -24]
    A = [[0.5, -5.5, -2.5, 9], [0.5, -1.5, -0.5, 1], [1, 0, 0, 0]]
    b = [0, 0, 1]
    res = diffgws.linprog(c, A, b)
    assert res.status == "optimal"
    assert U.allclose(res.fun, 1)
    assert np.all(np.array(A) @ res.x <= np.array(b) + 1e-9)


def test_zero_objective():
    res = diffgws.linprog([0, 0], [[1, 1]], [1])
    assert res.n_iter == 0
    assert U.allclose(res.x, 0)


def test_max_iter():
    with pytest.raises(RuntimeError):
        diffgws.linprog([2, 3], [[1, 1], [6, 3], [1, 2]], [100, 360, 120], max_iter=1)


def test_negative_rhs():
    with pytest.raises(AssertionError):
        diffgws.linprog([1], [[1]], [-1])

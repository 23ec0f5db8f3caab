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

import math

import pytest
import torch

import diffgws
import tests.utils as U


def test_example():
    tws = diffgws.TWS([0, 0, 1, 0, 0, 0], math.radians(30))
    t = tws(torch.tensor([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]))
    assert U.allclose(t, [0.5, 0, math.sqrt(3) / 2, 0, 0, 0])


@pytest.mark.parametrize("gamma_deg", [5, 15, 45, 90, 150])
def test_support_is_maximal(gamma_deg, K=300):
    gamma = math.radians(gamma_deg)
    w_t = torch.tensor([1.0, -1.0, 0.5, 0.0, 0.2, 0.0])
    tws = diffgws.TWS(w_t, gamma)
    u = diffgws.sample_unit_directions(K, seed=1)
    t = tws(u)

    assert U.allclose(t.norm(dim=-1), 1)
    assert torch.all(tws.contains(t))

    x = diffgws.sample_sector_directions(2000, w_t, gamma, seed=2)
    h = (u * t).sum(-1)
    assert torch.all((u @ x.T).max(-1).values <= h + 1e-9)


def test_inside_is_unchanged(K=100):
    w_t = torch.tensor([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    tws = diffgws.TWS(w_t, math.radians(20))
    x = diffgws.sample_sector_directions(K, w_t, math.radians(20), seed=0)
    assert U.allclose(tws(3 * x), x)


def test_antipodal():
    w_t = torch.tensor([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    tws = diffgws.TWS(w_t, math.radians(15))
    t = tws(-w_t)
    assert U.allclose(t.norm(), 1)
    assert U.allclose(tws.angle(t), math.radians(15))


def test_full_sphere(K=10):
    tws = diffgws.TWS([1, 0, 0, 0, 0, 0], math.pi)
    u = diffgws.sample_unit_directions(K)
    assert U.allclose(tws(2 * u), u)
    assert torch.all(tws.contains(u))


def test_angle():
    tws = diffgws.TWS([0, 2, 0, 0, 0, 0], math.radians(45))
    x = torch.tensor([[0.0, 1.0, 1.0, 0, 0, 0], [1.0, 0.0, 0.0, 0, 0, 0]])
    assert U.allclose(tws.angle(x), [math.pi / 4, math.pi / 2])
    assert tws.contains(x).tolist() == [True, False]


def test_zero_axis():
    with pytest.raises(ValueError):
        diffgws.TWS([0, 0, 0, 0, 0, 0])

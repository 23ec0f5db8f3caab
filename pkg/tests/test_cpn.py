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

import pytest
import torch

import diffgws
import tests.utils as U


def test_example():
    p = torch.tensor([[2.0, 0.0, 0.0], [4.0, 0.0, 0.0]])
    p_norm, center, scale, degenerate = diffgws.CPN()(p)
    assert U.allclose(p_norm, [[-1, 0, 0], [1, 0, 0]])
    assert U.allclose(center, [3, 0, 0])
    assert U.allclose(scale, 1)
    assert not degenerate


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_mean_zero_unit_scale(device, B=4, m=5):
    if device == "cuda" and not torch.cuda.is_available():
        return

    torch.manual_seed(1234)
    p = 10 * torch.randn(B, m, 3, device=device) + 3
    p_norm, _, _, degenerate = diffgws.CPN().to(device)(p)
    assert p_norm.shape == (B, m, 3)
    assert U.allclose(p_norm.mean(-2), 0)
    assert U.allclose(p_norm.norm(dim=-1).mean(-1), 1)
    assert not torch.any(degenerate)


def test_similarity_invariance(m=6):
    torch.manual_seed(1234)
    p = torch.randn(m, 3)
    t = torch.tensor([1.0, -2.0, 5.0])
    cpn = diffgws.CPN()
    assert U.allclose(cpn(p)[0], cpn(0.01 * p + t)[0])


def test_coincident_contacts():
    p = torch.ones(3, 3)
    with pytest.warns(UserWarning):
        p_norm, center, scale, degenerate = diffgws.CPN()(p)
    assert degenerate
    assert U.allclose(scale, 1)
    assert U.allclose(center, 1)
    assert U.allclose(p_norm, 0)


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_differentiable(device, m=4):
    cpn = diffgws.CPN()
    U.check_differentiable(device, [lambda x: x[0] ** 3, cpn], [m, 3])

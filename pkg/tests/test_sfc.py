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


def cone_points(mu1, mu2, n_point=4000, seed=0):
    """Random points of the unit-height soft finger cone."""
    g = torch.Generator().manual_seed(seed)
    f1 = torch.rand(n_point, 1, generator=g)
    z = torch.randn(n_point, 3, generator=g)
    z = z / z.norm(dim=-1, keepdim=True)
    r = f1 * torch.rand(n_point, 1, generator=g) ** (1 / 3)
    return torch.cat((f1, r * z * torch.tensor([mu1, mu1, mu2])), dim=-1)


def test_example():
    sfc = diffgws.SoftContactSupport(mu1=0.5, mu2=0.2)
    f = sfc(torch.tensor([0.0, 1.0, 0.0, 0.0]))
    assert U.allclose(f, [1, 0.5, 0, 0])


def test_support_is_maximal(mu1=0.5, mu2=0.2, B=200):
    torch.manual_seed(1234)
    u = torch.randn(B, 4)
    f = diffgws.SoftContactSupport(mu1=mu1, mu2=mu2)(u)
    x = cone_points(mu1, mu2)

    h = (u * f).sum(-1)
    assert torch.all((u @ x.T).max(-1).values <= h + 1e-9)

    q = (f[:, 1:3] / mu1).square().sum(-1) + (f[:, 3] / mu2).square()
    assert torch.all(q <= f[:, 0].square() + 1e-9)


@pytest.mark.parametrize("delta_deg", [0, 15])
def test_reduces_to_point_contact(delta_deg, B=100):
    delta = math.radians(delta_deg)
    torch.manual_seed(1234)
    u = torch.randn(B, 3)
    u4 = torch.cat((u, torch.zeros(B, 1)), dim=-1)
    f = diffgws.SoftContactSupport(mu1=0.5, mu2=0.1, delta=delta)(u4)
    g = diffgws.PointContactSupport(mu=0.5, delta=delta)(u)
    assert U.allclose(f[:, :3], g)
    assert U.allclose(f[:, 3], 0)


def test_pure_torsion():
    sfc = diffgws.SoftContactSupport(mu1=0.5, mu2=0.2)
    f = sfc(torch.tensor([0.0, 0.0, 0.0, -1.0]))
    assert U.allclose(f, [1, 0, 0, -0.2])


def test_relaxed_below_exact(B=300):
    torch.manual_seed(1234)
    u = torch.randn(B, 4)
    exact = diffgws.SoftContactSupport(0.5, 0.2)(u)
    relaxed = diffgws.SoftContactSupport(0.5, 0.2, delta=math.radians(30))(u)
    assert torch.all((u * relaxed).sum(-1) <= (u * exact).sum(-1) + 1e-9)


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_differentiable(device, B=10):
    sfc = diffgws.SoftContactSupport(0.5, 0.2, delta=math.radians(15))
    U.check_differentiable(device, sfc, [B, 4])

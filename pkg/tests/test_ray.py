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
import torch

import diffgws
import tests.utils as U


def test_example():
    ray = diffgws.BoundaryRay(32)
    p = torch.tensor([[0.0, 0.0, 0.0]])
    n = torch.tensor([[1.0, 0.0, 0.0]])
    res = ray(torch.tensor([1.0, 0, 0, 0, 0, 0]), p, n)
    assert res.status == "optimal"
    assert U.allclose(res.scale, 1)


def test_outside():
    ray = diffgws.BoundaryRay(16)
    p = torch.tensor([[0.0, 0.0, 0.0]])
    n = torch.tensor([[1.0, 0.0, 0.0]])
    res = ray(torch.tensor([-1.0, 0, 0, 0, 0, 0]), p, n)
    assert res.status == "infeasible"
    assert res.scale == 0


@pytest.mark.parametrize("model", ["pcf", "sfc"])
def test_duality(model, n_edge=16):
    p, n = U.fc5_contacts()
    ray = diffgws.BoundaryRay(n_edge, model)
    w = diffgws.sample_unit_directions(3, seed=5)
    for x in w:
        res = ray(x, p, n)
        assert res.status == "optimal"
        assert U.allclose(res.dual_bound, res.scale)

        # The multipliers reproduce the scaled wrench within the force bound.
        lam = res.multipliers
        assert np.all(-1e-9 <= lam)
        assert np.all(lam.sum(-1) <= 1 + 1e-9)
        W = ray.wrench_edges(p, n).numpy()
        y = np.einsum("md,mdj->j", lam, W)
        assert U.allclose(y, res.scale * x.numpy())


def test_scale_is_inverse_length():
    p, n = U.fc5_contacts()
    ray = diffgws.BoundaryRay(8)
    w = torch.tensor([0.0, 0.0, 1.0, 0.2, 0.0, 0.0])
    assert U.allclose(ray(2 * w, p, n).scale, 0.5 * ray(w, p, n).scale)


def test_zero_wrench():
    p, n = U.fc5_contacts()
    with pytest.raises(ValueError):
        diffgws.BoundaryRay(8)(torch.zeros(6), p, n)

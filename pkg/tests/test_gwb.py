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
    p = torch.tensor([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    n = torch.tensor([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    samples = diffgws.GWB(K=10)(p, n)
    assert samples.w.shape == (10, 6)
    assert samples.u.shape == (10, 6)


def test_reproducible(K=30):
    p, n = U.fc5_contacts()
    w1 = diffgws.GWB(K=K, seed=3)(p, n).w
    w2 = diffgws.GWB(K=K, seed=3)(p, n).w
    w3 = diffgws.GWB(K=K, seed=4)(p, n).w
    assert torch.equal(w1, w2)
    assert not torch.equal(w1, w3)


def test_normalization(K=20):
    p, n = U.fc5_contacts()
    p = 0.05 * p + torch.tensor([1.0, 2.0, 3.0])

    samples = diffgws.GWB(K=K, cpn=True)(p, n)
    assert samples.cpn
    assert U.allclose(samples.p.mean(0), 0)
    assert U.allclose(samples.cpn_center, [1, 2, 3])
    assert U.allclose(samples.cpn_scale, 0.05)
    assert not samples.degenerate

    samples = diffgws.GWB(K=K, cpn=False)(p, n)
    assert not samples.cpn
    assert U.allclose(samples.p, p)
    assert U.allclose(samples.cpn_scale, 1)


def test_exact_on_oracle(K=20):
    p, n = U.fc5_contacts()
    samples = diffgws.GWB(K=K, delta=0, mu=0.5)(p, n)
    ray = diffgws.BoundaryRay(64, mu=0.5)
    for w in samples.w:
        q = ray(w, samples.p, samples.n).scale
        assert 0.995 <= q <= 1.005


def test_relaxation_shrinks_support(K=200):
    p, n = U.fc5_contacts()
    h = []
    for delta_deg in [0, 15, 30, 45]:
        samples = diffgws.GWB(K=K, delta=math.radians(delta_deg))(p, n)
        h.append((samples.u * samples.w).sum(-1))
    for a, b in zip(h[:-1], h[1:]):
        assert torch.all(b <= a + 1e-9)


def test_given_directions(K=5):
    p, n = U.fc5_contacts()
    u = diffgws.sample_unit_directions(K, seed=9)
    samples = diffgws.GWB(K=100)(p, n, u)
    assert samples.w.shape == (K, 6)
    assert torch.equal(samples.u, u)


def test_batch(B=3, K=10, m=4):
    p, n = U.sphere_contacts(m)
    p = p.expand(B, m, 3)
    n = n.expand(B, m, 3)
    samples = diffgws.GWB(K=K)(p, n)
    assert samples.w.shape == (B, K, 6)
    assert samples.cpn_scale.shape == (B,)


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_differentiable(device, K=20, m=3):
    if device == "cuda" and not torch.cuda.is_available():
        return

    gwb = diffgws.GWB(K=K).to(device)
    U.check_differentiable(device, lambda p, n: gwb(p, n).w, [(m, 3), (m, 3)])

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
    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], math.pi)
    u = diffgws.sample_unit_directions(4)
    assert U.allclose(energy(2 * u, u).value, -4)


def test_scale_invariance(K=50):
    p, n = U.fc5_contacts()
    samples = diffgws.GWB(K=K)(p, n)
    w, u = samples.w, samples.u

    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], variant="cos")
    assert U.allclose(energy(w, u).value, energy(3 * w, u).value)

    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], variant="l2")
    assert not U.allclose(energy(w, u).value, energy(3 * w, u).value)


def test_range(K=50):
    p, n = U.fc5_contacts()
    samples = diffgws.GWB(K=K)(p, n)
    report = diffgws.TaskOrientedEnergy([1, 0, 0, 0, 0, 0])(samples.w, samples.u)
    assert torch.all(report.per_sample_cos.abs() <= 1 + 1e-9)
    assert -K <= report.value <= K
    assert report.skipped == 0


def test_zero_samples(K=10):
    u = diffgws.sample_unit_directions(K)
    w = u.clone()
    w[:3] = 0
    report = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], math.pi)(w, u)
    assert report.skipped == 3
    assert U.allclose(report.per_sample_cos[:3], 0)
    assert U.allclose(report.value, -(K - 3))


def test_invalid_variant():
    with pytest.raises(ValueError):
        diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], variant="l1")


@pytest.mark.parametrize("model", ["pcf", "sfc"])
@pytest.mark.parametrize("variant", ["cos", "l2"])
def test_gradient(model, variant, K=30):
    p, n = U.fc5_contacts()
    p = p + 0.1 * torch.tensor([0.3, -0.2, 0.1])
    gwb = diffgws.GWB(K=K, delta=math.radians(15), model=model)
    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0.1, 0, 0], variant=variant)
    value, grad_p, grad_n = energy.gradient(gwb, p, n)
    assert value.shape == ()

    def fn_p(x):
        return energy(gwb(x, n).w, gwb.u).value

    def fn_n(x):
        return energy(gwb(p, x).w, gwb.u).value

    fd_p = U.finite_difference(fn_p, p)
    fd_n = U.finite_difference(fn_n, n)
    assert (grad_p - fd_p).norm() <= 1e-4 * max(float(fd_p.norm()), 1)
    assert (grad_n - fd_n).norm() <= 1e-4 * max(float(fd_n.norm()), 1)


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_differentiable(device, K=20, m=4):
    if device == "cuda" and not torch.cuda.is_available():
        return

    gwb = diffgws.GWB(K=K).to(device)
    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0]).to(device)
    U.check_differentiable(
        device, lambda p, n: energy(gwb(p, n).w, gwb.u).value, [(m, 3), (m, 3)]
    )


@pytest.mark.parametrize("model", ["pcf", "sfc"])
def test_rotation_equivariance(model, K=200):
    p, n = U.fc5_contacts()
    p = p + torch.tensor([0.1, -0.2, 0.05])
    R = diffgws.random_rotation(seed=1)
    B = torch.block_diag(R, R)
    w_t = torch.tensor([0.0, 0.3, 1.0, 0.2, 0.0, -0.1])

    gwb = diffgws.GWB(K=K, delta=math.radians(15), model=model)
    samples = gwb(p, n)
    rotated = gwb(p @ R.T, n @ R.T, u=samples.u @ B.T)
    assert U.allclose(rotated.w, samples.w @ B.T, rtol=0, atol=1e-9)

    for variant in ["cos", "l2"]:
        gamma = math.radians(30)
        energy = diffgws.TaskOrientedEnergy(w_t.tolist(), gamma, variant)
        energy_rotated = diffgws.TaskOrientedEnergy((B @ w_t).tolist(), gamma, variant)
        value = energy(samples.w, samples.u).value
        value_rotated = energy_rotated(rotated.w, rotated.u).value
        assert U.allclose(value, value_rotated, rtol=0, atol=1e-9)


def test_tetrahedral_grasp(K=1000):
    p = torch.tensor([[1.0, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
    p = p / math.sqrt(3)
    gwb = diffgws.GWB(K=K, delta=math.radians(15), mu=0.5)
    samples = gwb(p, -p)
    energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], math.pi)
    assert energy(samples.w, samples.u).value / K <= -0.8

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
from diffgws.misc.sampling import quaternion_to_matrix


def test_neutral():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
    assert fk.dim == 11
    q = fk.neutral(translation=(0, 0, 1))
    out = fk(q)
    assert out.transforms.shape == (5, 4, 4)
    assert U.allclose(out.contacts, [[0.05, 0, 0.92], [-0.05, 0, 0.92]])
    assert out.spheres.shape == (5, 3)
    assert U.allclose(out.spheres[0], [0, 0, 1])
    assert not out.clamped


def test_root_pose():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("tripod"))
    c0 = fk(fk.neutral()).contacts

    rotation = (math.cos(math.pi / 8), 0.3, -0.2, math.sin(math.pi / 8))
    q = fk.neutral(translation=(0.1, 0.2, 0.3), rotation=rotation)
    assert U.allclose(q[3:7].norm(), 1)
    R = quaternion_to_matrix(q[3:7])
    c = fk(q).contacts
    assert U.allclose(c, c0 @ R.T + torch.tensor([0.1, 0.2, 0.3]))


@pytest.mark.parametrize("theta", [0.3, 1.2])
def test_revolute(theta):
    fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
    q = fk.neutral()
    q[7] = theta
    c = fk(q).contacts
    # The first finger lies in the xz-plane and flexes about +y.
    target = [0.05 - 0.08 * math.sin(theta), 0, -0.08 * math.cos(theta)]
    assert U.allclose(c[0], target)
    assert U.allclose(c[1], [-0.05, 0, -0.08])

    q[8] = theta
    c = fk(q).contacts
    target = [
        0.05 - 0.04 * math.sin(theta) - 0.04 * math.sin(2 * theta),
        0,
        -0.04 * math.cos(theta) - 0.04 * math.cos(2 * theta),
    ]
    assert U.allclose(c[0], target)


def test_clamping():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
    q = fk.neutral()
    q[8] = -1
    out = fk(q)
    assert out.clamped
    assert U.allclose(out.contacts, fk(fk.neutral()).contacts)

    q[8] = 5
    q2 = fk.neutral()
    q2[8] = 1.6
    assert U.allclose(fk(q).contacts, fk(q2).contacts)


def test_prismatic():
    spec = diffgws.RigSpec(
        "slider",
        [
            diffgws.Link("base"),
            diffgws.Link(
                "carriage",
                "base",
                "prismatic",
                [2.0, 0.0, 0.0],
                [0.0, 0.0, 0.1],
                lower=-1,
                upper=1,
            ),
        ],
        [diffgws.Sphere("carriage", [0.0, 0.0, 0.0], 0.01)],
        [diffgws.ContactPoint("carriage", [0.0, 0.0, 0.0])],
    )
    fk = diffgws.ForwardKinematics(spec)
    assert fk.dim == 8
    q = fk.neutral()
    q[7] = 0.3
    out = fk(q)
    assert U.allclose(out.contacts, [[0.3, 0, 0.1]])
    assert U.allclose(out.spheres, [[0.3, 0, 0.1]])
    assert len(fk.self_collision_pairs()) == 0


def test_self_collision_pairs():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
    pairs = fk.self_collision_pairs()
    assert pairs.tolist() == [[0, 2], [0, 4], [1, 3], [1, 4], [2, 3], [2, 4]]


def test_batch():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("fan"))
    g = torch.Generator().manual_seed(0)
    q = torch.randn(4, fk.dim, generator=g)
    out = fk(q)
    assert out.contacts.shape == (4, 5, 3)
    assert out.clamped.shape == (4,)
    for i in range(4):
        assert U.allclose(out.contacts[i], fk(q[i]).contacts)


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_differentiable(device):
    fk = diffgws.ForwardKinematics(diffgws.load_rig("tripod"))
    U.check_differentiable(device, [lambda out: out.contacts, fk], [2, fk.dim])


def test_invalid():
    fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
    with pytest.raises(AssertionError):
        fk(torch.zeros(7))

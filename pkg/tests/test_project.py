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


@pytest.mark.parametrize("device", ["cpu", "cuda"])
def test_compatibility(device):
    if device == "cuda" and not torch.cuda.is_available():
        return

    mesh = diffgws.TriangleMesh(*diffgws.box(1)).to(device)
    project = diffgws.ContactProjection(mesh)
    x = torch.tensor([[1.0, 0.1, 0.2], [0.1, -2.0, 0.0]], device=device)
    p, n = project(x)
    assert U.allclose(p, [[0.5, 0.1, 0.2], [0.1, -0.5, 0.0]])
    assert U.allclose(n, [[-1, 0, 0], [0, 1, 0]])
    assert not p.requires_grad


def test_sphere():
    mesh = diffgws.TriangleMesh(*diffgws.icosphere(3))
    project = diffgws.ContactProjection(mesh)
    assert project.fd_step == pytest.approx(1e-4 * mesh.bounding_radius)
    p, n = project(torch.tensor([0.0, 0.0, 2.0]))
    assert U.allclose(p.norm(), 1, atol=1e-2)
    assert U.allclose(n, [0, 0, -1], atol=5e-2)


def test_gradient():
    mesh = diffgws.TriangleMesh(*diffgws.box(1))
    project = diffgws.ContactProjection(mesh)
    x = torch.tensor([1.0, 0.1, 0.2], requires_grad=True)
    p, n = project(x)
    assert U.allclose(p, [0.5, 0.1, 0.2])
    p.sum().backward()
    # Sliding along the face moves the projection, the normal direction does not.
    assert U.allclose(x.grad, [0, 1, 1], atol=1e-6)

    x.grad = None
    p, n = project(x)
    n.sum().backward()
    assert U.allclose(x.grad, [0, 0, 0], atol=1e-6)


def test_jacobian():
    mesh = diffgws.TriangleMesh(*diffgws.box(1))
    project = diffgws.ContactProjection(mesh, fd_step=1e-5)
    x = torch.tensor([[1.0, 0.1, 0.2], [0.1, 0.2, 0.9]])
    J_p, J_n = project.jacobian(x)
    assert J_p.shape == (2, 3, 3)
    assert U.allclose(J_p[0], torch.diag(torch.tensor([0.0, 1.0, 1.0])), atol=1e-6)
    assert U.allclose(J_p[1], torch.diag(torch.tensor([1.0, 1.0, 0.0])), atol=1e-6)
    assert U.allclose(J_n, torch.zeros(2, 3, 3), atol=1e-6)


def test_invalid():
    mesh = diffgws.TriangleMesh(*diffgws.box(1))
    with pytest.raises(AssertionError):
        diffgws.ContactProjection(mesh, fd_step=0)
    with pytest.raises(AssertionError):
        diffgws.ContactProjection(mesh)(torch.zeros(2))


def _normal_path(smooth, T=400):
    mesh = diffgws.TriangleMesh(*diffgws.icosphere(3))
    project = diffgws.ContactProjection(mesh, smooth=smooth)
    t = torch.linspace(0, 0.5, T).unsqueeze(-1)
    x = 1.2 * torch.cat((torch.sin(t), 0.3 * torch.sin(t), torch.cos(t)), dim=-1)
    _, n = project(x)
    return (n[1:] - n[:-1]).norm(dim=-1)


def test_smooth_normal_is_continuous():
    assert _normal_path(True).max() < 0.01
    assert 0.03 < _normal_path(False).max()


def test_smooth_normal_jacobian():
    mesh = diffgws.TriangleMesh(*diffgws.icosphere(4))
    project = diffgws.ContactProjection(mesh, fd_step=1e-4)
    x = torch.tensor([[0.3, 0.4, 1.1], [-0.9, 0.2, 0.5]])
    _, n = project(x)
    _, J_n = project.jacobian(x)
    # The projection slides along flat triangles while the normal turns with
    # the unit sphere.
    r = x / x.norm(dim=-1, keepdim=True)
    expected = -(torch.eye(3) - r.unsqueeze(-1) * r.unsqueeze(-2))
    assert U.allclose(n, -r, atol=1e-2)
    assert U.allclose(J_n, expected, atol=0.1)

    project = diffgws.ContactProjection(mesh, fd_step=1e-4, smooth=False)
    _, J_n = project.jacobian(x)
    assert U.allclose(J_n, torch.zeros(2, 3, 3), atol=1e-6)

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

from typing import NamedTuple

import numpy as np
import torch
import torch.nn as nn

from ..misc.sampling import quaternion_to_matrix
from ..misc.utils import check_size
from ..misc.utils import numpy_to_torch


class KinematicsResult(NamedTuple):
    #: World transforms of links, shape (..., L, 4, 4).
    transforms: torch.Tensor

    #: Posed designated contact points, shape (..., C, 3).
    contacts: torch.Tensor

    #: Posed sphere centers, shape (..., S, 3).
    spheres: torch.Tensor

    #: True where a joint value was outside its limits and got clamped.
    clamped: torch.Tensor


def rpy_to_matrix(rpy):
    r, p, y = rpy
    Rx = np.array([[1, 0, 0], [0, np.cos(r), -np.sin(r)], [0, np.sin(r), np.cos(r)]])
    Ry = np.array([[np.cos(p), 0, np.sin(p)], [0, 1, 0], [-np.sin(p), 0, np.cos(p)]])
    Rz = np.array([[np.cos(y), -np.sin(y), 0], [np.sin(y), np.cos(y), 0], [0, 0, 1]])
    return Rz @ Ry @ Rx


def axis_angle_to_matrix(axis, angle):
    """Rodrigues' formula for a unit axis and a batch of angles."""
    x, y, z = axis.unbind(-1)
    o = torch.zeros_like(x)
    K = torch.stack((o, -z, y, z, o, -x, -y, x, o), dim=-1).reshape(3, 3)
    s = torch.sin(angle)[..., None, None]
    c = torch.cos(angle)[..., None, None]
    eye = torch.eye(3, dtype=angle.dtype, device=angle.device)
    return eye + s * K + (1 - c) * (K @ K)


class ForwardKinematics(nn.Module):
    """Forward kinematics of an articulated contact rig.

    The configuration is :math:`\\boldsymbol{q} = (\\boldsymbol{t},
    \\boldsymbol{r}, \\boldsymbol{\\theta})`, where :math:`\\boldsymbol{t}` is the
    root translation, :math:`\\boldsymbol{r}` the root rotation as a quaternion
    (w, x, y, z), and :math:`\\boldsymbol{\\theta}` the joint values in the order of
    movable links of the rig.

    Parameters
    ----------
    spec : RigSpec
        Rig.

    """

    def __init__(self, spec):
        super(ForwardKinematics, self).__init__()

        self.spec = spec
        names = [link.name for link in spec.links]
        self.order = spec.order()
        self.parent = [
            -1 if link.parent is None else names.index(link.parent)
            for link in spec.links
        ]
        self.joint_type = [link.joint for link in spec.links]
        self.joint_index = []
        lower, upper, axes, origins = [], [], [], []
        for link in spec.links:
            if link.joint == "fixed":
                self.joint_index.append(-1)
            else:
                self.joint_index.append(len(lower))
                lower.append(link.lower)
                upper.append(link.upper)
            axis = np.asarray(link.axis, dtype=np.float64)
            axes.append(axis / max(np.linalg.norm(axis), 1e-300))
            T = np.eye(4)
            T[:3, :3] = rpy_to_matrix(link.rpy)
            T[:3, 3] = link.xyz
            origins.append(T)
        self.n_joint = len(lower)

        self.register_buffer("lower", numpy_to_torch(lower).reshape(-1))
        self.register_buffer("upper", numpy_to_torch(upper).reshape(-1))
        self.register_buffer("axis", numpy_to_torch(np.stack(axes)))
        self.register_buffer("origin", numpy_to_torch(np.stack(origins)))

        self.contact_link = [names.index(c.link) for c in spec.contacts]
        self.register_buffer(
            "contact_local", numpy_to_torch([c.position for c in spec.contacts])
        )
        self.sphere_link = [names.index(s.link) for s in spec.spheres]
        self.register_buffer(
            "sphere_local",
            numpy_to_torch([s.center for s in spec.spheres]).reshape(-1, 3),
        )
        self.register_buffer(
            "sphere_radius", numpy_to_torch([s.radius for s in spec.spheres])
        )

    @property
    def dim(self):
        """Dimension of the configuration."""
        return 7 + self.n_joint

    def self_collision_pairs(self):
        """Return sphere index pairs on links that are neither identical nor
        adjacent in the tree, shape (P, 2)."""
        pairs = []
        S = len(self.sphere_link)
        for i in range(S):
            for j in range(i + 1, S):
                a, b = self.sphere_link[i], self.sphere_link[j]
                if a == b or self.parent[a] == b or self.parent[b] == a:
                    continue
                pairs.append((i, j))
        return torch.as_tensor(pairs, dtype=torch.long).reshape(-1, 2)

    def neutral(self, translation=(0, 0, 0), rotation=(1, 0, 0, 0)):
        """Return the configuration with the given root pose and zero joints."""
        q = torch.zeros(self.dim, dtype=self.origin.dtype, device=self.origin.device)
        q[:3] = torch.as_tensor(translation, dtype=q.dtype)
        q[3:7] = torch.as_tensor(rotation, dtype=q.dtype)
        q[3:7] /= q[3:7].norm()
        q[7:] = torch.clamp(q[7:], self.lower, self.upper)
        return q

    def forward(self, q):
        """Pose the rig.

        Parameters
        ----------
        q : Tensor [shape=(..., 7+J)]
            Configurations.

        Returns
        -------
        out : KinematicsResult
            Link transforms, contact points, sphere centers and clamping flags.

        Examples
        --------
        >>> fk = diffgws.ForwardKinematics(diffgws.load_rig("pinch"))
        >>> q = fk.neutral(translation=(0, 0, 1))
        >>> fk(q).contacts
        tensor([[ 0.0500,  0.0000,  0.9200],
                [-0.0500,  0.0000,  0.9200]])

        """
        check_size(q.size(-1), self.dim, "dimension of configuration")

        theta = q[..., 7:]
        clamped = torch.any((theta < self.lower) | (self.upper < theta), dim=-1)
        theta = torch.minimum(torch.maximum(theta, self.lower), self.upper)

        root = torch.zeros(*q.shape[:-1], 4, 4, dtype=q.dtype, device=q.device)
        root[..., :3, :3] = quaternion_to_matrix(q[..., 3:7])
        root[..., :3, 3] = q[..., :3]
        root[..., 3, 3] = 1

        transforms = [None] * len(self.parent)
        for i in self.order:
            p = self.parent[i]
            T = root if p < 0 else transforms[p]
            T = T @ self.origin[i]
            j = self.joint_index[i]
            if 0 <= j:
                motion = torch.zeros_like(root)
                motion[..., 3, 3] = 1
                if self.joint_type[i] == "revolute":
                    R = axis_angle_to_matrix(self.axis[i], theta[..., j])
                    motion[..., :3, :3] = R
                else:
                    motion[..., :3, :3] = torch.eye(3, dtype=q.dtype, device=q.device)
                    motion[..., :3, 3] = self.axis[i] * theta[..., j, None]
                T = T @ motion
            transforms[i] = T
        transforms = torch.stack(transforms, dim=-3)

        def apply(links, local):
            T = transforms[..., links, :, :]
            return (T[..., :3, :3] @ local.unsqueeze(-1)).squeeze(-1) + T[..., :3, 3]

        contacts = apply(self.contact_link, self.contact_local)
        spheres = apply(self.sphere_link, self.sphere_local)
        return KinematicsResult(transforms, contacts, spheres, clamped)

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

import torch
import torch.nn as nn

from ..misc.utils import check_size
from ..misc.utils import safe_norm
from ..misc.utils import to_tensor


class DistanceEnergy(nn.Module):
    """Contact distance energy :math:`E_d = \\sum_i \\|\\boldsymbol{x}_i -
    \\boldsymbol{p}_i\\|^2`.

    Pass detached surface points to obtain the gradient
    :math:`2(\\boldsymbol{x}_i - \\boldsymbol{p}_i)`, which coincides with the
    gradient through the nearest-point map since its variation is tangential.

    """

    def __init__(self):
        super(DistanceEnergy, self).__init__()

    def forward(self, x, p):
        """Compute the distance energy.

        Parameters
        ----------
        x : Tensor [shape=(..., m, 3)]
            Rig contact points.

        p : Tensor [shape=(..., m, 3)]
            Nearest surface points.

        Returns
        -------
        out : Tensor [shape=(...,)]
            Energy.

        Examples
        --------
        >>> x = torch.tensor([[0.0, 0.0, 1.1]])
        >>> p = torch.tensor([[0.0, 0.0, 1.0]])
        >>> diffgws.DistanceEnergy()(x, p)
        tensor(0.0100)

        """
        check_size(x.shape, p.shape, "shape of points")
        return ((x - p) ** 2).sum((-2, -1))


class PenetrationEnergy(nn.Module):
    """Penetration and self-penetration energy of rig spheres.

    .. math::
        E_p = \\sum_s \\max(0, r_s - \\mathrm{sd}(\\boldsymbol{c}_s))^2 +
        \\sum_{(s, s')} \\max(0, r_s + r_{s'} - \\|\\boldsymbol{c}_s -
        \\boldsymbol{c}_{s'}\\|)^2,

    where the second sum runs over sphere pairs on non-adjacent links. On meshes
    that are not watertight the unsigned distance is used, which never reports a
    center as inside.

    Parameters
    ----------
    mesh : TriangleMesh
        Object mesh.

    radius : Tensor [shape=(S,)]
        Sphere radii.

    pairs : Tensor [shape=(P, 2)] or None
        Sphere index pairs checked for self-penetration.

    """

    def __init__(self, mesh, radius, pairs=None):
        super(PenetrationEnergy, self).__init__()

        self.mesh = mesh
        self.register_buffer("radius", to_tensor(radius).reshape(-1))
        if pairs is None:
            pairs = torch.zeros(0, 2, dtype=torch.long)
        self.register_buffer("pairs", torch.as_tensor(pairs, dtype=torch.long))

        assert torch.all(0 < self.radius)

    def depth(self, c):
        """Return penetration depths of spheres into the object.

        Parameters
        ----------
        c : Tensor [shape=(..., S, 3)]
            Sphere centers.

        Returns
        -------
        out : Tensor [shape=(..., S)]
            Depths, zero for spheres outside.

        """
        return torch.clamp(self.radius - self.mesh.signed_distance(c), min=0)

    def self_penetration(self, c):
        """Return the self-penetration term, shape (...,)."""
        if len(self.pairs) == 0:
            return torch.zeros_like(c[..., 0, 0])
        i, j = self.pairs.unbind(-1)
        d = safe_norm(c[..., i, :] - c[..., j, :])
        overlap = torch.clamp(self.radius[i] + self.radius[j] - d, min=0)
        return (overlap**2).sum(-1)

    def forward(self, c, split=False):
        """Compute the penetration energy.

        Parameters
        ----------
        c : Tensor [shape=(..., S, 3)]
            Sphere centers.

        split : bool [scalar]
            If True, return the object and self-penetration terms separately.

        Returns
        -------
        out : Tensor [shape=(...,)] or tuple[Tensor]
            Energy.

        """
        check_size(c.size(-2), len(self.radius), "number of spheres")
        e = (self.depth(c) ** 2).sum(-1)
        e_self = self.self_penetration(c)
        if split:
            return e, e_self
        return e + e_self

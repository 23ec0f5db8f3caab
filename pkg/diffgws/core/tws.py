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

import torch
import torch.nn as nn

from ..misc.utils import check_size
from ..misc.utils import to_tensor


class TaskWrenchSpace(nn.Module):
    """Task wrench space represented by the hyper-spherical sector
    :math:`\\{\\boldsymbol{t} \\mid \\|\\boldsymbol{t}\\| = 1,
    \\angle(\\boldsymbol{t}, \\boldsymbol{w}_t) \\le \\gamma\\}`.

    Parameters
    ----------
    w_t : list[float] [shape=(6,)]
        Task axis. It is normalized internally.

    gamma : float (0 < gamma <= pi) [scalar]
        Half-angle of the sector in radians. If pi, the sector is the whole sphere.

    """

    def __init__(self, w_t, gamma=math.radians(15)):
        super(TaskWrenchSpace, self).__init__()

        w_t = to_tensor(w_t)
        check_size(w_t.size(-1), 6, "dimension of task axis")
        length = w_t.norm()
        if length < 1e-12:
            raise ValueError("task axis must be non-zero")
        assert 0 < gamma <= math.pi

        self.gamma = gamma
        w_t = w_t / length
        self.register_buffer("w_t", w_t)

        # Perpendicular used when a direction is antipodal to the axis.
        k = w_t.abs().argmin()
        a = torch.zeros_like(w_t)
        a[k] = 1
        a = a - (a @ w_t) * w_t
        self.register_buffer("perp", a / a.norm())

    def angle(self, x):
        """Return the angle between vectors and the task axis.

        Parameters
        ----------
        x : Tensor [shape=(..., 6)]
            Non-zero vectors.

        Returns
        -------
        angle : Tensor [shape=(...,)]
            Angles in radians.

        """
        c = (x * self.w_t).sum(-1) / x.norm(dim=-1)
        return torch.acos(torch.clamp(c, min=-1, max=1))

    def contains(self, x, tol=1e-9):
        """Return True for vectors whose direction lies in the sector."""
        return self.angle(x) <= self.gamma + tol

    def forward(self, u):
        """Compute the support mapping of the sector.

        Parameters
        ----------
        u : Tensor [shape=(..., 6)]
            Directions.

        Returns
        -------
        t : Tensor [shape=(..., 6)]
            Unit vectors of the sector maximizing the inner product with `u`.

        Examples
        --------
        >>> tws = diffgws.TaskWrenchSpace([0, 0, 1, 0, 0, 0], math.radians(30))
        >>> tws(torch.tensor([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]))
        tensor([0.5000, 0.0000, 0.8660, 0.0000, 0.0000, 0.0000])

        """
        check_size(u.size(-1), 6, "dimension of direction")
        u = u / u.norm(dim=-1, keepdim=True)
        if math.pi <= self.gamma:
            return u

        c = (u * self.w_t).sum(-1, keepdim=True)
        r = u - c * self.w_t
        length = r.norm(dim=-1, keepdim=True)
        perp = torch.where(
            1e-12 < length, r / torch.clamp(length, min=1e-12), self.perp
        )
        rim = math.cos(self.gamma) * self.w_t + math.sin(self.gamma) * perp
        outside = c < math.cos(self.gamma)
        return torch.where(outside, rim, u)

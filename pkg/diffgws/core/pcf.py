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
from ..misc.utils import safe_norm
from ..misc.utils import to_tensor


def cone_angles(u, weight):
    """Angle of directions from the cone axis and angle of the cone boundary.

    Parameters
    ----------
    u : Tensor [shape=(..., N+1)]
        Directions in the contact frame, normal component first.

    weight : Tensor [shape=(..., N)]
        Tangential semi-axes of the cone at unit height.

    Returns
    -------
    theta : Tensor [shape=(...,)]
        Angle between the directions and the cone axis.

    alpha : Tensor [shape=(...,)]
        Angle beyond which the support point is the origin.

    """
    r = safe_norm(u[..., 1:])
    s = safe_norm(weight * u[..., 1:])
    theta = torch.atan2(r, u[..., 0])
    alpha = 0.5 * math.pi + torch.atan2(s, r)
    return theta, alpha


def cone_support(u, weight, delta=0, eps=1e-12):
    """Support mapping of a unit-height elliptic friction cone.

    The cone is :math:`\\{\\boldsymbol{f} \\mid 0 \\le f_1 \\le 1,
    \\|\\boldsymbol{M}^{-1} \\boldsymbol{f}_t\\| \\le f_1\\}` with
    :math:`\\boldsymbol{M} = \\mathrm{diag}(\\boldsymbol{w})`.

    Parameters
    ----------
    u : Tensor [shape=(..., N+1)]
        Directions in the contact frame, normal component first. They need not be
        unit vectors.

    weight : Tensor [shape=(..., N)]
        Tangential semi-axes of the cone at unit height.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians. Zero gives the exact mapping.

    eps : float >= 0 [scalar]
        Directions shorter than this are mapped to the origin.

    Returns
    -------
    f : Tensor [shape=(..., N+1)]
        Support points.

    """
    u1 = u[..., :1]
    ut = u[..., 1:]

    # Smooth in (p, n) only where the result is away from the origin.
    zero = (u.detach().norm(dim=-1, keepdim=True) < eps).to(u.dtype)

    mt = weight * ut
    s = safe_norm(mt, keepdim=True)
    vt = weight * mt / s
    v = torch.cat((torch.ones_like(u1), vt), dim=-1)

    if delta == 0:
        # On the set-valued branches the cone tip (theta = 0) and the rim point
        # (theta = alpha) are selected.
        active = (0 <= (u1 + s).detach()).to(u.dtype)
        return v * active * (1 - zero)

    theta, alpha = [x.unsqueeze(-1) for x in cone_angles(u, weight)]
    a = torch.clamp(theta / delta, max=1)
    b = torch.clamp((alpha - theta) / delta, min=0, max=1)

    c = torch.zeros_like(v)
    c[..., 0] = 1
    f = b * (c + a * (v - c))
    return f * (1 - zero)


class PointContactSupport(nn.Module):
    """Support mapping of the point contact with friction (PCF) model.

    The friction cone is :math:`\\{\\boldsymbol{f} \\in \\mathbb{R}^3 \\mid
    0 \\le f_1 \\le 1, f_2^2 + f_3^2 \\le \\mu^2 f_1^2\\}` in the
    :math:`\\langle \\boldsymbol{n}, \\boldsymbol{d}, \\boldsymbol{e} \\rangle`
    frame. With :math:`\\delta > 0` the mapping interpolates linearly between the
    cone tip and the rim for :math:`\\theta < \\delta`, and between the rim and the
    origin for :math:`\\alpha - \\delta < \\theta < \\alpha`, where
    :math:`\\theta` is the angle between the direction and the cone axis and
    :math:`\\alpha = \\pi/2 + \\arctan\\mu`. The origin itself is never relaxed.

    Parameters
    ----------
    mu : float > 0 or list[float] [shape=(m,)]
        Friction coefficient(s), :math:`\\mu`.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians, :math:`\\delta`.

    """

    def __init__(self, mu=0.5, delta=0):
        super(PointContactSupport, self).__init__()

        mu = to_tensor(mu)
        assert torch.all(0 < mu) and torch.all(torch.isfinite(mu))
        assert 0 <= delta <= math.pi / 4

        self.delta = delta
        self.register_buffer("weight", torch.stack((mu, mu), dim=-1))

    def forward(self, u):
        """Map directions to points of the friction cone.

        Parameters
        ----------
        u : Tensor [shape=(..., 3)]
            Directions in the contact frame, e.g.,
            :math:`\\boldsymbol{G}^\\mathsf{T} \\boldsymbol{u}`.

        Returns
        -------
        f : Tensor [shape=(..., 3)]
            Support points.

        Examples
        --------
        >>> pcf = diffgws.PointContactSupport(mu=0.5)
        >>> pcf(torch.tensor([0.0, 1.0, 0.0]))
        tensor([1.0000, 0.5000, 0.0000])

        """
        check_size(u.size(-1), 3, "dimension of direction")
        return cone_support(u, self.weight, self.delta)

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
from .pcf import cone_support


class SoftContactSupport(nn.Module):
    """Support mapping of the soft finger contact (SFC) model.

    The friction cone is :math:`\\{\\boldsymbol{f} \\in \\mathbb{R}^4 \\mid
    0 \\le f_1 \\le 1, (f_2^2 + f_3^2)/\\mu_1^2 + f_4^2/\\mu_2^2 \\le f_1^2\\}`.
    For interior angles the support point is
    :math:`(1, \\mu_1^2 u_2/s, \\mu_1^2 u_3/s, \\mu_2^2 u_4/s)` with
    :math:`s = \\sqrt{\\mu_1^2 u_2^2 + \\mu_1^2 u_3^2 + \\mu_2^2 u_4^2}`. The
    approximation reuses the interpolation of the point contact model with the
    direction-dependent cone angle :math:`\\alpha = \\pi/2 +
    \\arctan(s / \\|\\boldsymbol{u}_t\\|)`, i.e., the angle at which the support
    value :math:`u_1 + s` crosses zero.

    Parameters
    ----------
    mu1 : float > 0 or list[float] [shape=(m,)]
        Tangential friction coefficient(s), :math:`\\mu_1`.

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), :math:`\\mu_2`.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians, :math:`\\delta`.

    """

    def __init__(self, mu1=0.5, mu2=0.1, delta=0):
        super(SoftContactSupport, self).__init__()

        mu1, mu2 = torch.broadcast_tensors(to_tensor(mu1), to_tensor(mu2))
        assert torch.all(0 < mu1) and torch.all(torch.isfinite(mu1))
        assert torch.all(0 < mu2) and torch.all(torch.isfinite(mu2))
        assert 0 <= delta <= math.pi / 4

        self.delta = delta
        self.register_buffer("weight", torch.stack((mu1, mu1, mu2), dim=-1))

    def forward(self, u):
        """Map directions to points of the soft finger friction cone.

        Parameters
        ----------
        u : Tensor [shape=(..., 4)]
            Directions in the contact frame.

        Returns
        -------
        f : Tensor [shape=(..., 4)]
            Support points.

        Examples
        --------
        >>> sfc = diffgws.SoftContactSupport(mu1=0.5, mu2=0.2)
        >>> sfc(torch.tensor([0.0, 1.0, 0.0, 0.0]))
        tensor([1.0000, 0.5000, 0.0000, 0.0000])

        """
        check_size(u.size(-1), 4, "dimension of direction")
        return cone_support(u, self.weight, self.delta)

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
from .tangent import TangentFrame


class GraspMatrix(nn.Module):
    """Map contact forces expressed in the contact frame to object wrenches.

    For the point contact with friction model the columns of
    :math:`\\boldsymbol{G}_i` are :math:`(\\boldsymbol{n}_i, \\boldsymbol{p}_i
    \\times \\boldsymbol{n}_i)`, :math:`(\\boldsymbol{d}_i, \\boldsymbol{p}_i
    \\times \\boldsymbol{d}_i)` and :math:`(\\boldsymbol{e}_i, \\boldsymbol{p}_i
    \\times \\boldsymbol{e}_i)`. The soft finger model appends the torsional column
    :math:`(\\boldsymbol{0}, \\boldsymbol{n}_i)`.

    Parameters
    ----------
    model : ['pcf', 'sfc']
        Contact model.

    """

    def __init__(self, model="pcf"):
        super(GraspMatrix, self).__init__()

        if model == "pcf":
            self.n_force = 3
        elif model == "sfc":
            self.n_force = 4
        else:
            raise ValueError(f"model {model} is not supported")
        self.model = model

        self.tangent = TangentFrame()

    def forward(self, p, n, d=None, e=None):
        """Build grasp matrices.

        Parameters
        ----------
        p : Tensor [shape=(..., 3)]
            Contact positions.

        n : Tensor [shape=(..., 3)]
            Inward unit normals.

        d : Tensor [shape=(..., 3)] or None
            First tangents. If None, derived from `n`.

        e : Tensor [shape=(..., 3)] or None
            Second tangents. If None, derived from `n`.

        Returns
        -------
        G : Tensor [shape=(..., 6, 3) or (..., 6, 4)]
            Grasp matrices.

        Examples
        --------
        >>> p = torch.tensor([0.0, 1.0, 0.0])
        >>> n = torch.tensor([1.0, 0.0, 0.0])
        >>> G = diffgws.GraspMatrix()(p, n)
        >>> G @ torch.tensor([1.0, 0.0, 0.0])
        tensor([ 1.,  0.,  0.,  0.,  0., -1.])

        """
        check_size(p.size(-1), 3, "dimension of position")
        check_size(n.size(-1), 3, "dimension of normal")

        n = n / n.norm(dim=-1, keepdim=True)
        if d is None or e is None:
            d, e = self.tangent(n)

        F = torch.stack((n, d, e), dim=-1)  # (..., 3, 3)
        P = p.unsqueeze(-1).expand_as(F)
        T = torch.cross(P, F, dim=-2)
        if self.model == "sfc":
            F = torch.cat((F, torch.zeros_like(n).unsqueeze(-1)), dim=-1)
            T = torch.cat((T, n.unsqueeze(-1)), dim=-1)
        G = torch.cat((F, T), dim=-2)
        return G

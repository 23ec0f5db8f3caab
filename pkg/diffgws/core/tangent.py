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


class TangentFrame(nn.Module):
    """Build a right-handed orthonormal frame around contact normals.

    The helper axis is the coordinate axis along which the normal has the smallest
    absolute component, so the construction is deterministic and well conditioned.
    The returned tangents satisfy :math:`\\boldsymbol{n} = \\boldsymbol{d} \\times
    \\boldsymbol{e}`.

    Parameters
    ----------
    eps : float >= 0 [scalar]
        Normals shorter than this are rejected.

    """

    def __init__(self, eps=1e-12):
        super(TangentFrame, self).__init__()

        self.eps = eps

        assert 0 <= self.eps

    def forward(self, n):
        """Compute tangent vectors.

        Parameters
        ----------
        n : Tensor [shape=(..., 3)]
            Contact normals. They are normalized internally.

        Returns
        -------
        d : Tensor [shape=(..., 3)]
            First tangent.

        e : Tensor [shape=(..., 3)]
            Second tangent.

        Examples
        --------
        >>> n = torch.tensor([0.0, 0.0, 1.0])
        >>> tangent = diffgws.TangentFrame()
        >>> d, e = tangent(n)
        >>> torch.cross(d, e, dim=-1)
        tensor([0., 0., 1.])

        """
        check_size(n.size(-1), 3, "dimension of normal")
        length = n.norm(dim=-1, keepdim=True)
        if torch.any(length <= self.eps):
            raise ValueError("zero-length normal is given")
        n = n / length

        k = n.detach().abs().argmin(dim=-1)
        a = torch.nn.functional.one_hot(k, 3).to(n.dtype)
        d = torch.cross(n, a, dim=-1)
        d = d / d.norm(dim=-1, keepdim=True)
        e = torch.cross(n, d, dim=-1)
        return d, e

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

import warnings

import torch
import torch.nn as nn

from ..misc.utils import check_size
from ..misc.utils import safe_norm


class ContactPositionNormalization(nn.Module):
    """Recenter and rescale contact positions so that force and torque components
    of wrenches have comparable magnitudes.

    The normalized positions are :math:`\\boldsymbol{p}'_i = (\\boldsymbol{p}_i -
    \\bar{\\boldsymbol{p}}) / d`, where :math:`\\bar{\\boldsymbol{p}}` is the mean
    position and :math:`d` is the mean distance to it. If all contacts coincide,
    :math:`d` falls back to one and a warning is issued.

    Parameters
    ----------
    eps : float >= 0 [scalar]
        Threshold below which the scale is regarded as degenerate.

    """

    def __init__(self, eps=1e-9):
        super(ContactPositionNormalization, self).__init__()

        self.eps = eps

        assert 0 <= self.eps

    def forward(self, p):
        """Normalize contact positions.

        Parameters
        ----------
        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        Returns
        -------
        p_norm : Tensor [shape=(..., m, 3)]
            Normalized positions.

        center : Tensor [shape=(..., 3)]
            Mean position.

        scale : Tensor [shape=(...,)]
            Mean distance to the mean position, or one if degenerate.

        degenerate : Tensor [shape=(...,)]
            True where all contacts coincide.

        Examples
        --------
        >>> p = torch.tensor([[2.0, 0.0, 0.0], [4.0, 0.0, 0.0]])
        >>> cpn = diffgws.ContactPositionNormalization()
        >>> p_norm, center, scale, _ = cpn(p)
        >>> p_norm
        tensor([[-1.,  0.,  0.],
                [ 1.,  0.,  0.]])
        >>> center, scale
        (tensor([3., 0., 0.]), tensor(1.))

        """
        check_size(p.size(-1), 3, "dimension of position")
        assert 1 <= p.size(-2)

        center = p.mean(-2)
        r = p - center.unsqueeze(-2)
        scale = safe_norm(r).mean(-1)

        degenerate = scale.detach() < self.eps
        if torch.any(degenerate):
            warnings.warn("contact positions are coincident; scale is set to one")
            scale = torch.where(degenerate, torch.ones_like(scale), scale)

        p_norm = r / scale.unsqueeze(-1).unsqueeze(-1)
        return p_norm, center, scale, degenerate

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

import numpy as np
import torch
import torch.nn as nn

from .ray import BoundaryRay


class RelativeLengthError(nn.Module):
    """Relative length error of boundary samples against the discretized-cone
    oracle.

    For each sample :math:`\\boldsymbol{w}_k` the oracle gives the scale
    :math:`q_k` at which the ray through it leaves the ground-truth wrench space,
    and the error is the mean of :math:`(q_k - 1)/q_k`. Zero samples are excluded,
    and so are samples whose ray misses the oracle wrench space entirely.

    Parameters
    ----------
    n_edge : int >= 3 [scalar]
        Number of cone edges of the oracle.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    eps : float >= 0 [scalar]
        Magnitude below which a sample is excluded.

    """

    def __init__(self, n_edge=64, model="pcf", mu=0.5, mu2=0.1, eps=1e-9):
        super(RelativeLengthError, self).__init__()

        assert 0 <= eps

        self.eps = eps
        self.ray = BoundaryRay(n_edge, model, mu, mu2)

    @torch.no_grad()
    def scales(self, w, p, n):
        """Return the oracle scale of each sample, NaN for excluded ones.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples.

        p : Tensor [shape=(m, 3)]
            Contact positions the samples refer to.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        Returns
        -------
        q : ndarray [shape=(K,)]
            Scales.

        """
        q = np.full(len(w), np.nan)
        for k, x in enumerate(w):
            if self.eps <= x.norm():
                q[k] = self.ray(x, p, n).scale
        return q

    def forward(self, w, p, n):
        """Compute the relative length error.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples.

        p : Tensor [shape=(m, 3)]
            Contact positions the samples refer to.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        Returns
        -------
        rle : float
            Mean relative length error.

        Examples
        --------
        >>> p = torch.tensor([[0.0, 0.0, 0.0]])
        >>> n = torch.tensor([[1.0, 0.0, 0.0]])
        >>> w = torch.tensor([[0.5, 0.0, 0.0, 0.0, 0.0, 0.0]])
        >>> diffgws.RelativeLengthError(32)(w, p, n)
        0.5

        """
        q = self.scales(w, p, n)
        if np.all(np.isnan(q)):
            raise ValueError("all boundary samples are zero")
        missed = ~np.isnan(q) & (q <= 0)
        if np.any(missed):
            warnings.warn(f"{missed.sum()} samples lie outside the oracle wrench space")
        valid = ~np.isnan(q) & (0 < q)
        if not np.any(valid):
            raise ValueError("no boundary sample lies inside the oracle wrench space")
        q = q[valid]
        return float(np.mean((q - 1) / q))

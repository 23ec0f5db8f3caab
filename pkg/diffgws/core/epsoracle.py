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

from ..misc.sampling import sample_unit_directions
from .ray import BoundaryRay


class EpsilonOracle(nn.Module):
    """Estimate the epsilon metric of the grasp wrench space of discretized
    friction cones from its support function.

    The support function is :math:`h(\\boldsymbol{u}) = \\sum_i \\max(0, \\max_j
    \\boldsymbol{u}^\\mathsf{T} \\boldsymbol{G}_i \\boldsymbol{e}_{ij})` and the
    estimate is its minimum over sampled unit directions. This is an upper bound
    of the true value that tightens as `n_dir` grows, and zero if some direction
    has nonpositive support.

    Parameters
    ----------
    n_edge : int >= 3 [scalar]
        Number of cone edges.

    n_dir : int >= 1 [scalar]
        Number of sampled directions.

    seed : int [scalar]
        Random seed.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    chunk_size : int >= 1 [scalar]
        Number of directions processed at once.

    """

    def __init__(
        self,
        n_edge=64,
        n_dir=100000,
        seed=0,
        model="pcf",
        mu=0.5,
        mu2=0.1,
        chunk_size=8192,
    ):
        super(EpsilonOracle, self).__init__()

        assert 1 <= n_dir
        assert 1 <= chunk_size

        self.n_dir = n_dir
        self.seed = seed
        self.chunk_size = chunk_size
        self.ray = BoundaryRay(n_edge, model, mu, mu2)

    @torch.no_grad()
    def support_value(self, u, p, n):
        """Evaluate the support function.

        Parameters
        ----------
        u : Tensor [shape=(K, 6)]
            Directions.

        p : Tensor [shape=(m, 3)]
            Contact positions.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        Returns
        -------
        h : Tensor [shape=(K,)]
            Support values.

        """
        W = self.ray.wrench_edges(p, n)  # (m, d, 6)
        h = []
        for v in torch.split(u, self.chunk_size):
            score = torch.einsum("kj,mdj->kmd", v, W)
            h.append(torch.clamp(score.max(-1).values, min=0).sum(-1))
        return torch.cat(h)

    def forward(self, p, n):
        """Estimate the epsilon metric.

        Parameters
        ----------
        p : Tensor [shape=(m, 3)]
            Contact positions.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        Returns
        -------
        eps : float
            Estimated epsilon metric.

        Examples
        --------
        >>> p = torch.tensor([[0.0, 0.0, 0.0]])
        >>> n = torch.tensor([[0.0, 0.0, 1.0]])
        >>> diffgws.EpsilonOracle(n_dir=100)(p, n)
        0.0

        """
        u = sample_unit_directions(self.n_dir, self.seed).to(p)
        h = self.support_value(u, p, n)
        return max(float(h.min()), 0.0)

    def coverage(self, p, n, probes, tol=0):
        """Return True if every probe direction has positive support.

        Parameters
        ----------
        p : Tensor [shape=(m, 3)]
            Contact positions.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        probes : Tensor [shape=(K, 6)]
            Probe directions, typically drawn inside a task sector.

        tol : float >= 0 [scalar]
            Support values not exceeding this are regarded as uncovered.

        Returns
        -------
        out : bool
            Coverage flag.

        """
        return bool(torch.all(tol < self.support_value(probes.to(p), p, n)))

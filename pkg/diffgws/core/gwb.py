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
from typing import NamedTuple

import torch
import torch.nn as nn

from ..misc.sampling import sample_unit_directions
from ..misc.utils import check_size
from .cpn import ContactPositionNormalization
from .gws import GraspWrenchSupport


class BoundarySampleSet(NamedTuple):
    """Output of :class:`GraspWrenchBoundaryEstimation`."""

    #: Points on the grasp wrench boundary, shape (..., K, 6).
    w: torch.Tensor

    #: Unit directions that produced them, shape (K, 6) or (..., K, 6).
    u: torch.Tensor

    #: Contact positions the wrenches refer to (normalized if CPN is on).
    p: torch.Tensor

    #: Inward contact normals.
    n: torch.Tensor

    #: Mean contact position removed by CPN, shape (..., 3).
    cpn_center: torch.Tensor

    #: Scale removed by CPN, shape (...,).
    cpn_scale: torch.Tensor

    #: True where CPN fell back to unit scale.
    degenerate: torch.Tensor

    #: Approximation angle in radians.
    delta: float

    #: Whether CPN was applied.
    cpn: bool


class GraspWrenchBoundaryEstimation(nn.Module):
    """Estimate the grasp wrench boundary by evaluating the support mapping along
    uniformly sampled unit directions.

    The directions are drawn once at construction from `seed`, so repeated calls
    on the same contacts return identical samples.

    Parameters
    ----------
    K : int >= 1 [scalar]
        Number of directions.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians.

    cpn : bool [scalar]
        If True, apply contact position normalization first.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    seed : int [scalar]
        Random seed of directions.

    n_edge : int >= 0 [scalar]
        If positive, use discretized cones with this number of edges.

    """

    def __init__(
        self,
        K=100,
        delta=math.radians(15),
        cpn=True,
        model="pcf",
        mu=0.5,
        mu2=0.1,
        seed=0,
        n_edge=0,
    ):
        super(GraspWrenchBoundaryEstimation, self).__init__()

        assert 1 <= K

        self.K = K
        self.delta = delta
        self.cpn = cpn
        self.model = model
        self.seed = seed

        self.gws = GraspWrenchSupport(model, mu, mu2, delta, n_edge)
        self.normalize = ContactPositionNormalization()
        self.register_buffer("u", sample_unit_directions(K, seed))

    def forward(self, p, n, u=None):
        """Sample the grasp wrench boundary.

        Parameters
        ----------
        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        n : Tensor [shape=(..., m, 3)]
            Inward contact normals.

        u : Tensor [shape=(..., K', 6)] or None
            Directions to use instead of the internal ones.

        Returns
        -------
        out : BoundarySampleSet
            Boundary samples and normalization statistics.

        Examples
        --------
        >>> p = torch.tensor([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
        >>> n = torch.tensor([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
        >>> gwb = diffgws.GraspWrenchBoundaryEstimation(K=10)
        >>> gwb(p, n).w.shape
        torch.Size([10, 6])

        """
        check_size(p.size(-1), 3, "dimension of position")
        assert 1 <= p.size(-2)

        if u is None:
            u = self.u

        if self.cpn:
            p, center, scale, degenerate = self.normalize(p)
        else:
            center = torch.zeros_like(p[..., 0, :])
            scale = torch.ones_like(p[..., 0, 0])
            degenerate = torch.zeros_like(scale, dtype=torch.bool)

        w = self.gws(u, p, n)
        return BoundarySampleSet(
            w, u, p, n, center, scale, degenerate, self.delta, self.cpn
        )

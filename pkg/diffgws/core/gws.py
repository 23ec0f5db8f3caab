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
from .dcone import DiscretizedFrictionCone
from .gmat import GraspMatrix
from .pcf import PointContactSupport
from .pcf import cone_angles
from .sfc import SoftContactSupport


class GraspWrenchSupport(nn.Module):
    """Support mapping of the grasp wrench space under the per-contact
    :math:`L_\\infty` force bound.

    The grasp wrench space is the Minkowski sum of the per-contact wrench sets
    :math:`\\boldsymbol{G}_i \\mathcal{F}_i`, hence

    .. math::
        s_{\\mathcal{W}_g}(\\boldsymbol{u}) = \\sum_{i=1}^m \\boldsymbol{G}_i
        s_{\\mathcal{F}_i}(\\boldsymbol{G}_i^\\mathsf{T} \\boldsymbol{u}).

    The cost is linear in the number of contacts and directions.

    Parameters
    ----------
    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians.

    n_edge : int >= 0 [scalar]
        If positive, the exact cones are replaced by discretized cones with this
        number of edges and `delta` is ignored.

    """

    def __init__(self, model="pcf", mu=0.5, mu2=0.1, delta=0, n_edge=0):
        super(GraspWrenchSupport, self).__init__()

        assert 0 <= n_edge

        self.gmat = GraspMatrix(model)
        if 0 < n_edge:
            self.cone = DiscretizedFrictionCone(n_edge, model, mu, mu2)
        elif model == "pcf":
            self.cone = PointContactSupport(mu, delta)
        elif model == "sfc":
            self.cone = SoftContactSupport(mu, mu2, delta)
        else:
            raise ValueError(f"model {model} is not supported")

    def cone_angles(self, u, p, n):
        """Locate the per-contact directions relative to the friction cones.

        The approximate support mapping changes branch where the angle equals
        0, delta, alpha - delta or alpha.

        Parameters
        ----------
        u : Tensor [shape=(..., K, 6)]
            Unit directions.

        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        n : Tensor [shape=(..., m, 3)]
            Inward contact normals.

        Returns
        -------
        theta : Tensor [shape=(..., K, m)]
            Angle from the cone axis.

        alpha : Tensor [shape=(..., K, m)]
            Angle at which the support point reaches the origin.

        """
        if isinstance(self.cone, DiscretizedFrictionCone):
            raise ValueError("discretized cones have no cone angles")
        G = self.gmat(p, n)
        v = torch.einsum("...mjk,...Kj->...Kmk", G, u)
        return cone_angles(v, self.cone.weight)

    def forward(self, u, p, n):
        """Compute points on the grasp wrench boundary.

        Parameters
        ----------
        u : Tensor [shape=(..., K, 6)]
            Unit directions.

        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        n : Tensor [shape=(..., m, 3)]
            Inward contact normals.

        Returns
        -------
        w : Tensor [shape=(..., K, 6)]
            Support points.

        Examples
        --------
        >>> gws = diffgws.GraspWrenchSupport(mu=0.5)
        >>> u = torch.tensor([[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
        >>> p = torch.tensor([[0.0, 0.0, 0.0]])
        >>> n = torch.tensor([[1.0, 0.0, 0.0]])
        >>> gws(u, p, n)
        tensor([[1., 0., 0., 0., 0., 0.]])

        """
        check_size(u.size(-1), 6, "dimension of direction")
        check_size(p.size(-2), n.size(-2), "number of contacts")

        G = self.gmat(p, n)  # (..., m, 6, k)
        v = torch.einsum("...mjk,...Kj->...Kmk", G, u)
        f = self.cone(v)
        w = torch.einsum("...mjk,...Kmk->...Kj", G, f)
        return w

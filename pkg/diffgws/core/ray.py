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

from typing import NamedTuple

import numpy as np
import torch
import torch.nn as nn

from ..misc.linprog import linprog
from ..misc.utils import check_size
from .dcone import DiscretizedFrictionCone
from .gmat import GraspMatrix


class RayResult(NamedTuple):
    #: Largest q such that q * w lies in the discretized grasp wrench space.
    scale: float

    #: Edge multipliers, shape (m, d).
    multipliers: np.ndarray

    #: 'optimal', 'unbounded' or 'infeasible'.
    status: str

    #: Optimal value of the dual problem.
    dual_bound: float

    #: Number of simplex pivots.
    n_iter: int


class BoundaryRay(nn.Module):
    """Find where the ray spanned by a wrench leaves the grasp wrench space of
    discretized friction cones.

    The linear program is

    .. math::
        \\max_{q, \\lambda} q \\quad \\mathrm{s.t.} \\quad q \\boldsymbol{w} =
        \\sum_{i,j} \\lambda_{ij} \\boldsymbol{G}_i \\boldsymbol{e}_{ij},
        \\quad \\lambda \\ge 0, \\quad \\sum_j \\lambda_{ij} \\le 1.

    Since the discretized cones are inscribed in the exact ones, a point of the
    exact boundary gets :math:`q \\le 1`, with equality up to the discretization
    error :math:`1 - \\cos(\\pi/d)`. This module is not differentiable.

    Parameters
    ----------
    n_edge : int >= 3 [scalar]
        Number of cone edges, :math:`d`.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    tol : float > 0 [scalar]
        Scale below which the ray is regarded as outside the wrench space.

    """

    def __init__(self, n_edge=64, model="pcf", mu=0.5, mu2=0.1, tol=1e-9):
        super(BoundaryRay, self).__init__()

        assert 0 < tol

        self.tol = tol
        self.gmat = GraspMatrix(model)
        self.cone = DiscretizedFrictionCone(n_edge, model, mu, mu2)

    def wrench_edges(self, p, n):
        """Return the wrench generators :math:`\\boldsymbol{G}_i
        \\boldsymbol{e}_{ij}`.

        Parameters
        ----------
        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        n : Tensor [shape=(..., m, 3)]
            Inward contact normals.

        Returns
        -------
        W : Tensor [shape=(..., m, d, 6)]
            Wrench generators.

        """
        G = self.gmat(p, n)
        edges = self.cone.edges.expand(*p.shape[:-1], -1, -1)
        return torch.einsum("...mjk,...mdk->...mdj", G, edges)

    @torch.no_grad()
    def forward(self, w, p, n):
        """Solve the boundary ray problem.

        Parameters
        ----------
        w : Tensor [shape=(6,)]
            Non-zero wrench.

        p : Tensor [shape=(m, 3)]
            Contact positions.

        n : Tensor [shape=(m, 3)]
            Inward contact normals.

        Returns
        -------
        out : RayResult
            Scale, multipliers, status, dual bound and pivot count.

        Examples
        --------
        >>> ray = diffgws.BoundaryRay(32)
        >>> p = torch.tensor([[0.0, 0.0, 0.0]])
        >>> n = torch.tensor([[1.0, 0.0, 0.0]])
        >>> ray(torch.tensor([1.0, 0, 0, 0, 0, 0]), p, n).scale
        1.0

        """
        check_size(w.size(-1), 6, "dimension of wrench")
        w = w.detach().cpu().double().numpy()
        if not np.linalg.norm(w) > 0:
            raise ValueError("wrench must be non-zero")

        W = self.wrench_edges(p, n).detach().cpu().double().numpy()
        m, d = W.shape[:2]
        E = W.reshape(m * d, 6).T

        # Variables: (lambda_11, ..., lambda_md, q).
        N = m * d + 1
        A = np.zeros((12 + m, N))
        A[:6, :-1] = E
        A[:6, -1] = -w
        A[6:12] = -A[:6]
        for i in range(m):
            A[12 + i, i * d : (i + 1) * d] = 1
        b = np.concatenate((np.zeros(12), np.ones(m)))
        c = np.zeros(N)
        c[-1] = 1

        res = linprog(c, A, b)
        q = res.x[-1]
        status = res.status
        if status == "optimal" and q <= self.tol:
            status = "infeasible"
            q = 0.0
        dual_bound = float(b @ res.dual)
        multipliers = res.x[:-1].reshape(m, d)
        return RayResult(float(q), multipliers, status, dual_bound, res.n_iter)

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

from ..misc.utils import to_tensor


def fibonacci_sphere(n, dtype=None):
    """Return nearly uniform points on the unit 2-sphere."""
    dtype = torch.get_default_dtype() if dtype is None else dtype
    i = torch.arange(n, dtype=dtype)
    z = 1 - 2 * (i + 0.5) / n
    r = torch.sqrt(torch.clamp(1 - z * z, min=0))
    phi = math.pi * (3 - math.sqrt(5)) * i
    return torch.stack((r * torch.cos(phi), r * torch.sin(phi), z), dim=-1)


class DiscretizedFrictionCone(nn.Module):
    """Polyhedral friction cone spanned by edges lying on the exact cone surface.

    For the point contact model the edges are :math:`(1, \\mu\\cos(2\\pi j/d),
    \\mu\\sin(2\\pi j/d))`. For the soft finger model the edges are
    :math:`(1, \\mu_1 a_j, \\mu_1 b_j, \\mu_2 c_j)` where :math:`(a_j, b_j, c_j)`
    is a Fibonacci lattice on the unit sphere, so every edge satisfies the
    elliptic cone boundary with equality. The polyhedron is inscribed in the exact
    cone and its support mapping selects a single edge (or the origin).

    Parameters
    ----------
    n_edge : int >= 3 [scalar]
        Number of edges, :math:`d`.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(m,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(m,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    """

    def __init__(self, n_edge=8, model="pcf", mu=0.5, mu2=0.1):
        super(DiscretizedFrictionCone, self).__init__()

        assert 3 <= n_edge

        mu = to_tensor(mu)
        assert torch.all(0 < mu)

        if model == "pcf":
            angle = 2 * math.pi * torch.arange(n_edge, dtype=mu.dtype) / n_edge
            mu = mu.unsqueeze(-1)
            edges = torch.stack(
                torch.broadcast_tensors(
                    torch.ones_like(angle), mu * torch.cos(angle), mu * torch.sin(angle)
                ),
                dim=-1,
            )
        elif model == "sfc":
            mu2 = to_tensor(mu2)
            assert torch.all(0 < mu2)
            mu, mu2 = torch.broadcast_tensors(mu, mu2)
            a, b, c = fibonacci_sphere(n_edge, dtype=mu.dtype).unbind(-1)
            mu = mu.unsqueeze(-1)
            mu2 = mu2.unsqueeze(-1)
            edges = torch.stack(
                torch.broadcast_tensors(torch.ones_like(a), mu * a, mu * b, mu2 * c),
                dim=-1,
            )
        else:
            raise ValueError(f"model {model} is not supported")

        self.n_edge = n_edge
        self.model = model
        self.register_buffer("edges", edges)

    def forward(self, u):
        """Map directions to the best edge of the discretized cone.

        Parameters
        ----------
        u : Tensor [shape=(..., k)]
            Directions in the contact frame, where k is 3 or 4.

        Returns
        -------
        f : Tensor [shape=(..., k)]
            Edge maximizing the inner product, or the origin if no edge has a
            positive inner product.

        Examples
        --------
        >>> cone = diffgws.DiscretizedFrictionCone(4, mu=1)
        >>> cone(torch.tensor([0.0, 1.0, 0.0]))
        tensor([1., 1., 0.])

        """
        score = (u.unsqueeze(-2) * self.edges).sum(-1)
        value, index = score.max(-1)
        onehot = torch.nn.functional.one_hot(index, self.n_edge).to(u.dtype)
        f = (onehot.unsqueeze(-1) * self.edges).sum(-2)
        return f * (0 < value).unsqueeze(-1).to(u.dtype)

    def support_value(self, u):
        """Return :math:`\\max(0, \\max_j \\boldsymbol{u}^\\mathsf{T}
        \\boldsymbol{e}_j)` for each direction."""
        score = (u.unsqueeze(-2) * self.edges).sum(-1)
        return torch.clamp(score.max(-1).values, min=0)

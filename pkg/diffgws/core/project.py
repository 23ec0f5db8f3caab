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


class ContactProjection(nn.Module):
    """Project rig contact points onto the nearest points of a mesh.

    The nearest-point map is piecewise smooth and has no closed-form derivative,
    so its Jacobians with respect to the query are taken by central differences.
    The returned positions and normals equal the exact projection, and their
    gradients flow back to the query through the linearization
    :math:`\\boldsymbol{p}_0 + \\boldsymbol{J}(\\boldsymbol{x} - \\boldsymbol{x}_0)`.

    Pseudo-normals are constant on each triangle, so with `smooth` the normals
    are taken from the interpolated shading normals of the mesh instead. They
    vary continuously across soft edges and give the normal a nonzero
    derivative along the surface.

    Parameters
    ----------
    mesh : TriangleMesh
        Object mesh.

    fd_step : float > 0 [scalar] or None
        Central difference step. If None, 1e-4 times the bounding radius of the
        mesh.

    smooth : bool [scalar]
        If True, return shading normals instead of pseudo-normals.

    """

    def __init__(self, mesh, fd_step=None, smooth=True):
        super(ContactProjection, self).__init__()

        self.mesh = mesh
        self.fd_step = 1e-4 * mesh.bounding_radius if fd_step is None else fd_step
        self.smooth = smooth

        assert 0 < self.fd_step

    def surface_normal(self, hit):
        """Return the inward normal used for a closest point."""
        if self.smooth:
            return self.mesh.shading_normal(hit.face, hit.barycentric)
        return hit.inward_normal

    @torch.no_grad()
    def nearest(self, x):
        """Find the nearest surface points and the normals used by the projection.

        Parameters
        ----------
        x : Tensor [shape=(..., 3)]
            Query points.

        Returns
        -------
        p : Tensor [shape=(..., 3)]
            Nearest surface points.

        n : Tensor [shape=(..., 3)]
            Unit inward normals there.

        """
        hit = self.mesh.nearest(x)
        return hit.position.to(x), self.surface_normal(hit).to(x)

    @torch.no_grad()
    def jacobian(self, x):
        """Differentiate the nearest position and inward normal by central
        differences.

        Parameters
        ----------
        x : Tensor [shape=(..., 3)]
            Query points.

        Returns
        -------
        J_p : Tensor [shape=(..., 3, 3)]
            Jacobian of positions.

        J_n : Tensor [shape=(..., 3, 3)]
            Jacobian of inward normals.

        """
        h = self.fd_step
        offset = h * torch.eye(3, dtype=x.dtype, device=x.device)
        y = torch.stack((x.unsqueeze(-2) + offset, x.unsqueeze(-2) - offset), dim=-3)
        p, n = self.nearest(y)
        p_plus, p_minus = p.unbind(-3)
        n_plus, n_minus = n.unbind(-3)
        J_p = (p_plus - p_minus) / (2 * h)
        J_n = (n_plus - n_minus) / (2 * h)
        return J_p.transpose(-2, -1), J_n.transpose(-2, -1)

    def forward(self, x):
        """Project points.

        Parameters
        ----------
        x : Tensor [shape=(..., 3)]
            Query points.

        Returns
        -------
        p : Tensor [shape=(..., 3)]
            Nearest surface points.

        n : Tensor [shape=(..., 3)]
            Unit inward normals there.

        Examples
        --------
        >>> mesh = diffgws.TriangleMesh(*diffgws.icosphere(3))
        >>> project = diffgws.ContactProjection(mesh)
        >>> p, n = project(torch.tensor([0.0, 0.0, 2.0]))
        >>> n
        tensor([ 0.,  0., -1.])

        """
        check_size(x.size(-1), 3, "dimension of query")
        p, n = self.nearest(x)
        if not x.requires_grad:
            return p, n

        J_p, J_n = self.jacobian(x.detach())
        dx = (x - x.detach()).unsqueeze(-1)
        p = p + (J_p @ dx).squeeze(-1)
        n = n + (J_n @ dx).squeeze(-1)
        return p, n

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

from ..misc.utils import check_size
from ..misc.utils import safe_norm
from .tws import TaskWrenchSpace


class TaskEnergyReport(NamedTuple):
    #: Energy, shape (...,).
    value: torch.Tensor

    #: Cosine between each task target and boundary sample, shape (..., K).
    per_sample_cos: torch.Tensor

    #: Number of near-zero boundary samples, shape (...,).
    skipped: torch.Tensor


class TaskOrientedEnergy(nn.Module):
    """Task-oriented energy comparing grasp wrench boundary samples with the task
    wrench space along the same directions.

    The cosine variant is

    .. math::
        E_t = -\\sum_{k=1}^K \\cos\\angle\\left(s_{\\mathcal{W}_t}(\\boldsymbol{u}_k),
        s_{\\mathcal{W}_g}(\\boldsymbol{u}_k)\\right),

    which is invariant to the magnitude of the boundary samples. The L2 variant
    :math:`\\sum_k \\|s_{\\mathcal{W}_t}(\\boldsymbol{u}_k) -
    s_{\\mathcal{W}_g}(\\boldsymbol{u}_k)\\|^2` is not. Boundary samples shorter than
    `eps` contribute nothing in both variants.

    Parameters
    ----------
    w_t : list[float] [shape=(6,)]
        Task axis.

    gamma : float (0 < gamma <= pi) [scalar]
        Half-angle of the task sector in radians.

    variant : ['cos', 'l2']
        Energy variant.

    eps : float >= 0 [scalar]
        Magnitude below which a boundary sample is skipped.

    """

    def __init__(self, w_t, gamma=math.radians(15), variant="cos", eps=1e-9):
        super(TaskOrientedEnergy, self).__init__()

        if variant not in ("cos", "l2"):
            raise ValueError(f"variant {variant} is not supported")
        assert 0 <= eps

        self.variant = variant
        self.eps = eps
        self.tws = TaskWrenchSpace(w_t, gamma)

    def forward(self, w, u):
        """Compute the task-oriented energy.

        Parameters
        ----------
        w : Tensor [shape=(..., K, 6)]
            Grasp wrench boundary samples.

        u : Tensor [shape=(..., K, 6)]
            Directions that produced them.

        Returns
        -------
        out : TaskEnergyReport
            Energy, per-sample cosines, and number of skipped samples.

        Examples
        --------
        >>> energy = diffgws.TaskOrientedEnergy([0, 0, 1, 0, 0, 0], math.pi)
        >>> u = diffgws.sample_unit_directions(4)
        >>> energy(2 * u, u).value
        tensor(-4.)

        """
        check_size(w.size(-1), 6, "dimension of wrench")
        t = self.tws(u)

        length = safe_norm(w)
        valid = (self.eps <= length.detach()).to(w.dtype)
        cos = (t * w).sum(-1) / length * valid
        if self.variant == "cos":
            value = -cos.sum(-1)
        else:
            value = ((t - w) ** 2).sum(-1).mul(valid).sum(-1)
        skipped = (1 - valid).sum(-1).long()
        return TaskEnergyReport(value, cos, skipped)

    def gradient(self, estimator, p, n):
        """Differentiate the energy with respect to contact positions and normals.

        Parameters
        ----------
        estimator : GraspWrenchBoundaryEstimation
            Estimator producing the boundary samples.

        p : Tensor [shape=(..., m, 3)]
            Contact positions.

        n : Tensor [shape=(..., m, 3)]
            Inward contact normals.

        Returns
        -------
        value : Tensor [shape=(...,)]
            Energy.

        grad_p : Tensor [shape=(..., m, 3)]
            Gradient with respect to `p`.

        grad_n : Tensor [shape=(..., m, 3)]
            Gradient with respect to `n`.

        """
        with torch.enable_grad():
            p = p.detach().requires_grad_()
            n = n.detach().requires_grad_()
            samples = estimator(p, n)
            value = self.forward(samples.w, samples.u).value
            grad_p, grad_n = torch.autograd.grad(value.sum(), (p, n))
        return value.detach(), grad_p, grad_n

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
import warnings

import torch
import torch.nn as nn

from .fccheck import ForceClosureSimplexCheck
from .tws import TaskWrenchSpace


class EpsilonMetric(nn.Module):
    """Epsilon metric computed as the smallest magnitude of boundary samples.

    Parameters
    ----------
    n_trial : int >= 1 [scalar]
        Number of random subsets of the force closure check.

    seed : int [scalar]
        Random seed of the force closure check.

    """

    def __init__(self, n_trial=1000, seed=0):
        super(EpsilonMetric, self).__init__()

        self.check = ForceClosureSimplexCheck(n_trial, seed)

    @torch.no_grad()
    def forward(self, w):
        """Compute the epsilon metric.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples.

        Returns
        -------
        eps : float
            Smallest sample magnitude, or zero if the samples are not force
            closure.

        Examples
        --------
        >>> w = torch.cat((torch.eye(6), -2 * torch.eye(6)))
        >>> diffgws.EpsilonMetric()(w)
        1.0

        """
        if len(w) < 6 or not self.check(w):
            return 0.0
        return float(w.norm(dim=-1).min())


class TaskOrientedEpsilonMetric(nn.Module):
    """Task-oriented epsilon metric computed from boundary samples.

    The estimate is the smallest magnitude among samples whose direction lies in
    the task sector. It is zero if some direction of the sector is not covered,
    i.e., some sample direction :math:`\\boldsymbol{u}_k` inside the sector has a
    nonpositive support value :math:`\\boldsymbol{u}_k^\\mathsf{T}
    \\boldsymbol{w}_k`. If no sample falls in the sector the metric is undefined
    and NaN is returned.

    Parameters
    ----------
    w_t : list[float] [shape=(6,)]
        Task axis.

    gamma : float (0 < gamma <= pi) [scalar]
        Half-angle of the task sector in radians.

    eps : float >= 0 [scalar]
        Magnitude below which a sample counts as zero.

    n_trial : int >= 1 [scalar]
        Number of random subsets of the force closure check, used if the sector
        is the whole sphere.

    seed : int [scalar]
        Random seed of the force closure check.

    """

    def __init__(self, w_t, gamma=math.radians(15), eps=1e-9, n_trial=1000, seed=0):
        super(TaskOrientedEpsilonMetric, self).__init__()

        assert 0 <= eps

        self.eps = eps
        self.tws = TaskWrenchSpace(w_t, gamma)
        self.epsilon = EpsilonMetric(n_trial, seed)

    @torch.no_grad()
    def forward(self, w, u):
        """Compute the task-oriented epsilon metric.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples.

        u : Tensor [shape=(K, 6)]
            Directions that produced them.

        Returns
        -------
        eps_t : float
            Task-oriented epsilon metric.

        """
        if math.pi <= self.tws.gamma:
            return self.epsilon(w)

        u = u.expand_as(w)
        covered = self.eps < (u * w).sum(-1)
        if torch.any(self.tws.contains(u) & ~covered):
            return 0.0

        length = w.norm(dim=-1)
        nonzero = self.eps <= length
        inside = torch.zeros_like(nonzero)
        inside[nonzero] = self.tws.contains(w[nonzero])
        if not torch.any(inside):
            warnings.warn("no boundary sample lies in the task sector; increase K")
            return float("nan")
        return float(length[inside].min())

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

from ..misc.sampling import sample_unit_directions
from .fccheck import ForceClosureSimplexCheck


class Sparsity(nn.Module):
    """Expected angle between a uniformly random direction and the nearest
    boundary sample direction.

    Parameters
    ----------
    n_probe : int >= 1 [scalar]
        Number of probe directions.

    seed : int [scalar]
        Random seed of probes.

    fc_check : bool [scalar]
        If True, return NaN for samples that fail the force closure check.

    chunk_size : int >= 1 [scalar]
        Number of samples compared at once.

    """

    def __init__(self, n_probe=10000, seed=0, fc_check=True, chunk_size=65536):
        super(Sparsity, self).__init__()

        assert 1 <= n_probe
        assert 1 <= chunk_size

        self.n_probe = n_probe
        self.seed = seed
        self.fc_check = fc_check
        self.chunk_size = chunk_size
        self.check = ForceClosureSimplexCheck(seed=seed)

    @torch.no_grad()
    def forward(self, w):
        """Compute the sparsity.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples.

        Returns
        -------
        sp : float
            Mean minimum angle in radians.

        Examples
        --------
        >>> w = diffgws.sample_unit_directions(100000, seed=1)
        >>> diffgws.Sparsity(1000)(w) < 0.2
        True

        """
        w = w[0 < w.norm(dim=-1)]
        if self.fc_check and (len(w) < 6 or not self.check(w)):
            warnings.warn("boundary samples are not force closure")
            return float("nan")

        x = w / w.norm(dim=-1, keepdim=True)
        probes = sample_unit_directions(self.n_probe, self.seed + 1).to(x)
        best = torch.full((self.n_probe,), -1.0, dtype=x.dtype, device=x.device)
        for y in torch.split(x, self.chunk_size):
            best = torch.maximum(best, (probes @ y.T).max(-1).values)
        angle = torch.acos(torch.clamp(best, min=-1, max=1))
        return float(angle.mean())

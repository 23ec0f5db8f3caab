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

from ..misc.sampling import make_generator
from ..misc.utils import check_size


class ForceClosureSimplexCheck(nn.Module):
    """Decide force closure from boundary samples by testing random 6-subsets.

    The samples are regarded as force closure if each of the twelve signed basis
    wrenches :math:`\\pm\\boldsymbol{e}_i` is a nonnegative combination of the six
    vertices of at least one sampled subset. Singular subsets are skipped.

    Parameters
    ----------
    n_trial : int >= 1 [scalar]
        Number of random subsets.

    seed : int [scalar]
        Random seed.

    tol : float >= 0 [scalar]
        Coefficients above `-tol` are regarded as nonnegative.

    """

    def __init__(self, n_trial=1000, seed=0, tol=1e-9):
        super(ForceClosureSimplexCheck, self).__init__()

        assert 1 <= n_trial
        assert 0 <= tol

        self.n_trial = n_trial
        self.seed = seed
        self.tol = tol

    @torch.no_grad()
    def forward(self, w):
        """Check force closure.

        Parameters
        ----------
        w : Tensor [shape=(K, 6)]
            Boundary samples, K >= 6.

        Returns
        -------
        out : bool
            True if every signed basis wrench is covered.

        Examples
        --------
        >>> w = torch.cat((torch.eye(6), -torch.eye(6)))
        >>> diffgws.ForceClosureSimplexCheck()(w)
        True

        """
        check_size(w.size(-1), 6, "dimension of wrench")
        K = w.size(0)
        assert 6 <= K

        generator = make_generator(self.seed)
        if K <= 4096:
            r = torch.rand(self.n_trial, K, generator=generator)
            index = r.argsort(dim=-1)[:, :6]
        else:
            # Repeated indices give singular trials, which are rare here.
            index = torch.randint(K, (self.n_trial, 6), generator=generator)
        index = index.to(w.device)
        A = w[index].transpose(-2, -1)  # (T, 6, 6)
        B = torch.cat((torch.eye(6), -torch.eye(6)), dim=-1).to(w)
        coef, info = torch.linalg.solve_ex(A, B.expand(self.n_trial, -1, -1))

        ok = (0 == info).unsqueeze(-1)
        ok = ok & torch.isfinite(coef).all(-2)
        ok = ok & (-self.tol <= coef).all(-2)
        return bool(ok.any(0).all())

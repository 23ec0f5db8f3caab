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


class LinprogResult(NamedTuple):
    x: np.ndarray
    fun: float
    dual: np.ndarray
    status: str
    n_iter: int


def linprog(c, A, b, tol=1e-9, max_iter=100000):
    """Maximize :math:`\\boldsymbol{c}^\\mathsf{T}\\boldsymbol{x}` subject to
    :math:`\\boldsymbol{A}\\boldsymbol{x} \\le \\boldsymbol{b}` and
    :math:`\\boldsymbol{x} \\ge \\boldsymbol{0}`.

    The right-hand side must be nonnegative, so the slack basis is feasible and a
    single phase of the dense tableau simplex suffices. Bland's rule selects both
    the entering and the leaving variable, which rules out cycling on the
    degenerate vertices that homogeneous constraints produce.

    Parameters
    ----------
    c : array [shape=(N,)]
        Objective coefficients.

    A : array [shape=(M, N)]
        Constraint matrix.

    b : array [shape=(M,)]
        Nonnegative right-hand side.

    tol : float > 0 [scalar]
        Pivot tolerance.

    max_iter : int >= 1 [scalar]
        Maximum number of pivots.

    Returns
    -------
    out : LinprogResult
        Primal solution, optimal value, dual solution (one multiplier per row),
        status ('optimal' or 'unbounded'), and number of pivots.

    Examples
    --------
    >>> res = diffgws.linprog([2, 3], [[1, 1], [6, 3], [1, 2]], [100, 360, 120])
    >>> res.x, res.fun
    (array([40., 40.]), 200.0)

    """
    c = np.asarray(c, dtype=np.float64)
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64)
    M, N = A.shape
    assert c.shape == (N,)
    assert b.shape == (M,)
    assert np.all(0 <= b), "right-hand side must be nonnegative"
    assert 0 < tol
    assert 1 <= max_iter

    # Tableau [A I b] with reduced costs z_j - c_j in the last row.
    T = np.zeros((M + 1, N + M + 1))
    T[:M, :N] = A
    T[:M, N : N + M] = np.eye(M)
    T[:M, -1] = b
    T[M, :N] = -c
    basis = np.arange(N, N + M)

    status = "optimal"
    n_iter = 0
    while True:
        candidates = np.flatnonzero(T[M, :-1] < -tol)
        if len(candidates) == 0:
            break
        if max_iter <= n_iter:
            raise RuntimeError(f"simplex did not converge in {max_iter} pivots")

        col = candidates[0]
        rows = np.flatnonzero(tol < T[:M, col])
        if len(rows) == 0:
            status = "unbounded"
            break
        ratio = T[rows, -1] / T[rows, col]
        ties = rows[ratio <= ratio.min() + tol]
        row = ties[np.argmin(basis[ties])]

        T[row] /= T[row, col]
        others = np.arange(M + 1) != row
        T[others] -= np.outer(T[others, col], T[row])
        basis[row] = col
        n_iter += 1

    x = np.zeros(N + M)
    x[basis] = T[:M, -1]
    dual = T[M, N : N + M].copy()
    return LinprogResult(x[:N], float(T[M, -1]), dual, status, n_iter)

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


def make_generator(seed):
    """Return a CPU generator seeded deterministically.

    Parameters
    ----------
    seed : int [scalar]
        Random seed.

    Returns
    -------
    generator : torch.Generator
        Seeded generator.

    """
    generator = torch.Generator()
    generator.manual_seed(int(seed) & 0xFFFFFFFFFFFFFFFF)
    return generator


def sample_unit_directions(K, seed=0, dim=6, **kwargs):
    """Draw directions uniformly distributed on the unit sphere.

    Each direction is a vector of independent standard normals divided by its
    length, hence the distribution is rotation invariant.

    Parameters
    ----------
    K : int >= 1 [scalar]
        Number of directions.

    seed : int [scalar]
        Random seed. The same seed always gives the same directions.

    dim : int >= 1 [scalar]
        Dimension of the ambient space.

    **kwargs : additional keyword arguments
        See `torch.randn <https://pytorch.org/docs/stable/generated/torch.randn.html>`_.

    Returns
    -------
    u : Tensor [shape=(K, dim)]
        Unit directions.

    Examples
    --------
    >>> u = diffgws.sample_unit_directions(2, seed=0)
    >>> u.norm(dim=-1)
    tensor([1., 1.])

    """
    assert 1 <= K
    assert 1 <= dim

    device = kwargs.pop("device", None)
    dtype = kwargs.pop("dtype", torch.get_default_dtype())
    u = torch.randn(K, dim, generator=make_generator(seed), dtype=dtype, **kwargs)
    u = u / u.norm(dim=-1, keepdim=True)
    if device is not None:
        u = u.to(device)
    return u


def sample_sector_directions(K, w_t, gamma, seed=0, n_grid=4096):
    """Draw directions uniformly distributed inside a hyper-spherical sector.

    Parameters
    ----------
    K : int >= 1 [scalar]
        Number of directions.

    w_t : Tensor [shape=(D,)]
        Unit axis of the sector.

    gamma : float (0 < gamma <= pi) [scalar]
        Half-angle of the sector in radians.

    seed : int [scalar]
        Random seed.

    n_grid : int >= 2 [scalar]
        Resolution of the tabulated polar-angle distribution.

    Returns
    -------
    t : Tensor [shape=(K, D)]
        Unit directions whose angle to `w_t` does not exceed `gamma`.

    """
    assert 1 <= K
    assert 0 < gamma <= math.pi
    assert 2 <= n_grid

    w_t = w_t / w_t.norm()
    D = w_t.size(-1)
    generator = make_generator(seed)

    # The polar angle of a uniform point on the sphere has density sin^(D-2).
    phi = torch.linspace(0, gamma, n_grid, dtype=w_t.dtype)
    pdf = torch.sin(phi) ** (D - 2)
    cdf = torch.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * (phi[1:] - phi[:-1]), dim=0)
    cdf = torch.cat((cdf.new_zeros(1), cdf)) / cdf[-1]
    r = torch.rand(K, generator=generator, dtype=w_t.dtype)
    j = torch.clamp(torch.searchsorted(cdf, r), 1, n_grid - 1)
    w = (r - cdf[j - 1]) / torch.clamp(cdf[j] - cdf[j - 1], min=1e-300)
    angle = phi[j - 1] + w * (phi[j] - phi[j - 1])

    # Uniform azimuth: a Gaussian vector orthogonalised against the axis.
    g = torch.randn(K, D, generator=generator, dtype=w_t.dtype).to(w_t.device)
    g = g - (g @ w_t).unsqueeze(-1) * w_t
    g = g / g.norm(dim=-1, keepdim=True)

    angle = angle.to(w_t.device).unsqueeze(-1)
    t = torch.cos(angle) * w_t + torch.sin(angle) * g
    return t


def random_rotation(seed=0, dtype=None):
    """Draw a rotation matrix uniformly from SO(3).

    Parameters
    ----------
    seed : int [scalar]
        Random seed.

    Returns
    -------
    R : Tensor [shape=(3, 3)]
        Rotation matrix.

    """
    dtype = torch.get_default_dtype() if dtype is None else dtype
    q = torch.randn(4, generator=make_generator(seed), dtype=dtype)
    q = q / q.norm()
    return quaternion_to_matrix(q)


def quaternion_to_matrix(q):
    """Convert unit quaternions (w, x, y, z) to rotation matrices.

    Parameters
    ----------
    q : Tensor [shape=(..., 4)]
        Quaternions. They are normalized internally.

    Returns
    -------
    R : Tensor [shape=(..., 3, 3)]
        Rotation matrices.

    """
    q = q / q.norm(dim=-1, keepdim=True)
    w, x, y, z = q.unbind(-1)
    R = torch.stack(
        (
            1 - 2 * (y * y + z * z),
            2 * (x * y - z * w),
            2 * (x * z + y * w),
            2 * (x * y + z * w),
            1 - 2 * (x * x + z * z),
            2 * (y * z - x * w),
            2 * (x * z - y * w),
            2 * (y * z + x * w),
            1 - 2 * (x * x + y * y),
        ),
        dim=-1,
    )
    return R.reshape(*q.shape[:-1], 3, 3)


def axis_angle_to_quaternion(v):
    """Convert rotation vectors to unit quaternions (w, x, y, z).

    Parameters
    ----------
    v : Tensor [shape=(..., 3)]
        Rotation vectors (axis times angle in radians).

    Returns
    -------
    q : Tensor [shape=(..., 4)]
        Unit quaternions.

    """
    angle = v.norm(dim=-1, keepdim=True)
    half = 0.5 * angle
    # sin(x/2)/x -> 1/2 as x -> 0.
    scale = torch.where(
        1e-8 < angle, torch.sin(half) / torch.clamp(angle, min=1e-8), 0.5 + 0 * angle
    )
    return torch.cat((torch.cos(half), scale * v), dim=-1)


def quaternion_multiply(a, b):
    """Hamilton product of quaternions (w, x, y, z)."""
    aw, ax, ay, az = a.unbind(-1)
    bw, bx, by, bz = b.unbind(-1)
    return torch.stack(
        (
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ),
        dim=-1,
    )

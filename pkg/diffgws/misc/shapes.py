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

import numpy as np
import torch

from .utils import numpy_to_torch


def icosphere(subdiv=3, radius=1):
    """Generate a triangulated sphere by subdividing an icosahedron.

    Parameters
    ----------
    subdiv : int >= 0 [scalar]
        Number of subdivisions. The mesh has :math:`20 \\cdot 4^s` triangles.

    radius : float > 0 [scalar]
        Radius of sphere.

    Returns
    -------
    vertices : Tensor [shape=(V, 3)]
        Vertex positions.

    faces : Tensor [shape=(F, 3)]
        Outward-wound triangles.

    Examples
    --------
    >>> v, f = diffgws.icosphere(3)
    >>> f.shape
    torch.Size([1280, 3])

    """
    assert 0 <= subdiv
    assert 0 < radius

    t = (1 + math.sqrt(5)) / 2
    vertices = [
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ]  # fmt: skip
    faces = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]  # fmt: skip
    vertices = [np.asarray(v, dtype=np.float64) / np.linalg.norm(v) for v in vertices]

    for _ in range(subdiv):
        cache = {}

        def midpoint(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = vertices[a] + vertices[b]
                vertices.append(m / np.linalg.norm(m))
                cache[key] = len(vertices) - 1
            return cache[key]

        next_faces = []
        for a, b, c in faces:
            ab = midpoint(a, b)
            bc = midpoint(b, c)
            ca = midpoint(c, a)
            next_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = next_faces

    vertices = numpy_to_torch(radius * np.stack(vertices))
    faces = torch.as_tensor(faces, dtype=torch.long)
    return vertices, faces


def box(size=1):
    """Generate an axis-aligned box centered at the origin.

    Parameters
    ----------
    size : float > 0 or list[float] [shape=(3,)]
        Edge length(s).

    Returns
    -------
    vertices : Tensor [shape=(8, 3)]
        Vertex positions.

    faces : Tensor [shape=(12, 3)]
        Outward-wound triangles.

    Examples
    --------
    >>> v, f = diffgws.box()
    >>> v.min(0).values, v.max(0).values
    (tensor([-0.5000, -0.5000, -0.5000]), tensor([0.5000, 0.5000, 0.5000]))

    """
    size = np.broadcast_to(np.asarray(size, dtype=np.float64), (3,))
    assert np.all(0 < size)

    corners = np.asarray([[(i >> k) & 1 for k in range(3)] for i in range(8)])
    vertices = (corners - 0.5) * size
    faces = [
        [0, 4, 6], [0, 6, 2],  # -x
        [1, 3, 7], [1, 7, 5],  # +x
        [0, 1, 5], [0, 5, 4],  # -y
        [2, 6, 7], [2, 7, 3],  # +y
        [0, 2, 3], [0, 3, 1],  # -z
        [4, 5, 7], [4, 7, 6],  # +z
    ]  # fmt: skip
    return numpy_to_torch(vertices), torch.as_tensor(faces, dtype=torch.long)


def cylinder(radius=0.5, height=1, n_segment=32):
    """Generate a closed cylinder whose axis is the z-axis.

    Parameters
    ----------
    radius : float > 0 [scalar]
        Radius.

    height : float > 0 [scalar]
        Height.

    n_segment : int >= 3 [scalar]
        Number of segments around the axis.

    Returns
    -------
    vertices : Tensor [shape=(2N+2, 3)]
        Vertex positions.

    faces : Tensor [shape=(4N, 3)]
        Outward-wound triangles.

    """
    assert 0 < radius
    assert 0 < height
    assert 3 <= n_segment

    N = n_segment
    angle = 2 * np.pi * np.arange(N) / N
    ring = np.stack((radius * np.cos(angle), radius * np.sin(angle)), axis=-1)
    bottom = np.concatenate((ring, np.full((N, 1), -height / 2)), axis=-1)
    top = np.concatenate((ring, np.full((N, 1), height / 2)), axis=-1)
    centers = np.asarray([[0, 0, -height / 2], [0, 0, height / 2]])
    vertices = np.concatenate((bottom, top, centers))

    cb, ct = 2 * N, 2 * N + 1
    faces = []
    for i in range(N):
        j = (i + 1) % N
        faces.append([i, j, N + j])
        faces.append([i, N + j, N + i])
        faces.append([cb, j, i])
        faces.append([ct, N + i, N + j])
    return numpy_to_torch(vertices), torch.as_tensor(faces, dtype=torch.long)


def torus(major_radius=0.5, minor_radius=0.2, n_major=32, n_minor=16):
    """Generate a torus lying in the xy-plane.

    Parameters
    ----------
    major_radius : float > 0 [scalar]
        Distance from the center of the tube to the center of the torus.

    minor_radius : float (0 < r < R) [scalar]
        Radius of the tube.

    n_major : int >= 3 [scalar]
        Number of segments around the z-axis.

    n_minor : int >= 3 [scalar]
        Number of segments around the tube.

    Returns
    -------
    vertices : Tensor [shape=(NM, 3)]
        Vertex positions.

    faces : Tensor [shape=(2NM, 3)]
        Outward-wound triangles.

    """
    assert 0 < minor_radius < major_radius
    assert 3 <= n_major
    assert 3 <= n_minor

    u = 2 * np.pi * np.arange(n_major) / n_major
    v = 2 * np.pi * np.arange(n_minor) / n_minor
    u, v = np.meshgrid(u, v, indexing="ij")
    r = major_radius + minor_radius * np.cos(v)
    vertices = np.stack((r * np.cos(u), r * np.sin(u), minor_radius * np.sin(v)), -1)
    vertices = vertices.reshape(-1, 3)

    def index(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a, b = index(i, j), index(i + 1, j)
            c, d = index(i + 1, j + 1), index(i, j + 1)
            faces += [[a, b, c], [a, c, d]]
    return numpy_to_torch(vertices), torch.as_tensor(faces, dtype=torch.long)


def make_shape(name, scale=1, **kwargs):
    """Build a named primitive.

    Parameters
    ----------
    name : ['sphere', 'box', 'cylinder', 'torus']
        Primitive name.

    scale : float > 0 [scalar]
        Uniform scale applied to the unit-sized primitive.

    **kwargs : additional keyword arguments
        Passed to the generator.

    Returns
    -------
    vertices : Tensor [shape=(V, 3)]
        Vertex positions.

    faces : Tensor [shape=(F, 3)]
        Outward-wound triangles.

    """
    if name == "sphere":
        v, f = icosphere(**kwargs)
    elif name == "box":
        v, f = box(**kwargs)
    elif name == "cylinder":
        v, f = cylinder(**kwargs)
    elif name == "torus":
        v, f = torus(**kwargs)
    else:
        raise ValueError(f"shape {name} is not supported")
    return v * scale, f

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
from typing import NamedTuple

import numpy as np
import torch
import torch.nn as nn

from ..misc.sampling import make_generator
from ..misc.utils import check_size
from ..misc.utils import get_logger
from ..misc.utils import normalize
from ..misc.utils import read_obj
from ..misc.utils import safe_norm
from ..misc.utils import to_tensor

# Regions of a triangle in which the closest point lies.
FACE, VERTEX_A, VERTEX_B, VERTEX_C, EDGE_AB, EDGE_BC, EDGE_CA = range(7)


class SurfacePoint(NamedTuple):
    #: Closest points, shape (..., 3).
    position: torch.Tensor

    #: Unit inward normals (negated pseudo-normals), shape (..., 3).
    inward_normal: torch.Tensor

    #: Triangle indices, shape (...,).
    face: torch.Tensor

    #: Barycentric coordinates on the triangle, shape (..., 3).
    barycentric: torch.Tensor

    #: Unsigned distance from the query, shape (...,).
    distance: torch.Tensor


def closest_point_on_triangle(x, a, b, c):
    """Find the closest point on triangles by Voronoi region classification.

    Parameters
    ----------
    x : Tensor [shape=(..., 3)]
        Query points.

    a, b, c : Tensor [shape=(..., 3)]
        Triangle vertices.

    Returns
    -------
    barycentric : Tensor [shape=(..., 3)]
        Barycentric coordinates of the closest points.

    region : Tensor [shape=(...,)]
        Region index, one of FACE, VERTEX_*, EDGE_*.

    """

    def dot(s, t):
        return (s * t).sum(-1)

    def div(s, t):
        return s / torch.where(t == 0, torch.ones_like(t), t)

    ab = b - a
    ac = c - a
    ap = x - a
    bp = x - b
    cp = x - c
    d1, d2 = dot(ab, ap), dot(ac, ap)
    d3, d4 = dot(ab, bp), dot(ac, bp)
    d5, d6 = dot(ab, cp), dot(ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    one = torch.ones_like(d1)
    zero = torch.zeros_like(d1)

    # Interior.
    denom = div(one, va + vb + vc)
    v, w = vb * denom, vc * denom
    bary = torch.stack((1 - v - w, v, w), dim=-1)
    region = torch.full_like(d1, FACE, dtype=torch.long)

    # Later assignments take precedence.
    cases = []
    t = div(d4 - d3, (d4 - d3) + (d5 - d6))
    cases.append(
        (
            (va <= 0) & (0 <= d4 - d3) & (0 <= d5 - d6),
            torch.stack((zero, 1 - t, t), dim=-1),
            EDGE_BC,
        )
    )
    t = div(d2, d2 - d6)
    cases.append(
        ((vb <= 0) & (0 <= d2) & (d6 <= 0), torch.stack((1 - t, zero, t), -1), EDGE_CA)
    )
    cases.append(
        ((0 <= d6) & (d5 <= d6), torch.stack((zero, zero, one), dim=-1), VERTEX_C)
    )
    t = div(d1, d1 - d3)
    cases.append(
        ((vc <= 0) & (0 <= d1) & (d3 <= 0), torch.stack((1 - t, t, zero), -1), EDGE_AB)
    )
    cases.append(
        ((0 <= d3) & (d4 <= d3), torch.stack((zero, one, zero), dim=-1), VERTEX_B)
    )
    cases.append(
        ((d1 <= 0) & (d2 <= 0), torch.stack((one, zero, zero), dim=-1), VERTEX_A)
    )
    for mask, value, code in cases:
        bary = torch.where(mask.unsqueeze(-1), value, bary)
        region = torch.where(mask, torch.full_like(region, code), region)
    return bary, region


def build_hierarchy(centroids, leaf_size):
    """Split triangles recursively at the median of the longest centroid extent.

    Parameters
    ----------
    centroids : ndarray [shape=(F, 3)]
        Triangle centroids.

    leaf_size : int >= 1 [scalar]
        Maximum number of triangles per leaf.

    Returns
    -------
    children : ndarray [shape=(B, 2)]
        Child node indices, -1 for leaves. Node 0 is the root.

    leaf : ndarray [shape=(B,)]
        Leaf index of each node, -1 for internal nodes.

    members : list[ndarray]
        Triangle indices under each node.

    leaves : list[ndarray]
        Triangle indices of each leaf in ascending order.

    """
    children = [[-1, -1]]
    leaf = [-1]
    members = [np.arange(len(centroids))]
    leaves = []
    stack = [0]
    while stack:
        node = stack.pop()
        index = members[node]
        if len(index) <= leaf_size:
            leaf[node] = len(leaves)
            leaves.append(np.sort(index))
            continue
        c = centroids[index]
        axis = np.argmax(c.max(0) - c.min(0))
        order = np.argsort(c[:, axis], kind="stable")
        half = len(index) // 2
        for k, part in enumerate((index[order[:half]], index[order[half:]])):
            children[node][k] = len(members)
            children.append([-1, -1])
            leaf.append(-1)
            members.append(part)
        stack += children[node][::-1]
    return np.asarray(children), np.asarray(leaf), members, leaves


def crease_normals(faces, face_normal, angle, crease_angle):
    """Average face normals around each triangle corner.

    Only faces whose normals lie within `crease_angle` of the normal of the
    corner's own face contribute, weighted by their angles at the vertex.

    Parameters
    ----------
    faces : Tensor [shape=(F, 3)]
        Triangles.

    face_normal : Tensor [shape=(F, 3)]
        Unit outward face normals.

    angle : Tensor [shape=(F, 3)]
        Interior angles at the corners.

    crease_angle : float [scalar]
        Largest angle between normals that are smoothed together.

    Returns
    -------
    out : Tensor [shape=(F, 3, 3)]
        Unit outward corner normals.

    """
    vertex = faces.reshape(-1)
    face = torch.arange(len(faces), device=faces.device).repeat_interleave(3)
    count = torch.bincount(vertex)
    order = torch.argsort(vertex, stable=True)
    start = torch.cumsum(count, 0) - count
    rank = torch.arange(len(vertex), device=faces.device) - start[vertex[order]]
    table = torch.full(
        (len(count), int(count.max())), -1, dtype=torch.long, device=faces.device
    )
    table[vertex[order], rank] = order

    ring = table[vertex]  # (3F, D)
    valid = 0 <= ring
    ring = ring.clamp(min=0)
    normal = face_normal[face[ring]]
    cos = (normal * face_normal[face].unsqueeze(1)).sum(-1)
    weight = angle.reshape(-1)[ring] * (valid & (math.cos(crease_angle) <= cos))
    normal = (weight.unsqueeze(-1) * normal).sum(1)
    return normalize(normal).reshape(-1, 3, 3)


class TriangleMesh(nn.Module):
    """Triangle mesh supporting closest point, signed distance and surface
    sampling queries.

    Degenerate triangles are dropped at construction. Closest points are found
    by descending a bounding-volume hierarchy whose leaves hold at most
    `leaf_size` triangles: a node is pruned once its box is farther than a
    surface point already seen, and the triangles of the surviving leaves are
    examined exactly. Normals at closest points on edges and vertices are
    angle-weighted pseudo-normals, which makes the sign test of signed distances
    exact on closed, consistently wound meshes. Smooth shading normals, which
    interpolate corner normals across triangles, are available separately.

    Parameters
    ----------
    vertices : Tensor [shape=(V, 3)]
        Vertex positions.

    faces : Tensor [shape=(F, 3)]
        Vertex indices of triangles wound counterclockwise seen from outside.

    leaf_size : int >= 1 [scalar]
        Maximum number of triangles in a leaf.

    crease_angle : float >= 0 [scalar]
        Adjacent faces whose normals differ by more than this angle in radians
        keep a sharp edge in the shading normals.

    verbose : bool [scalar]
        If True, log a summary of the mesh.

    """

    def __init__(
        self, vertices, faces, leaf_size=8, crease_angle=math.pi / 4, verbose=False
    ):
        super(TriangleMesh, self).__init__()

        assert 1 <= leaf_size

        vertices = to_tensor(vertices).detach()
        faces = torch.as_tensor(faces, dtype=torch.long, device=vertices.device)
        check_size(vertices.size(-1), 3, "dimension of vertex")
        check_size(faces.size(-1), 3, "number of triangle corners")
        if len(faces) == 0:
            raise ValueError("mesh has no triangles")
        if faces.min() < 0 or len(vertices) <= faces.max():
            raise ValueError("triangle index out of range")

        lo = vertices.min(0).values
        hi = vertices.max(0).values
        diagonal = (hi - lo).norm()

        # Drop zero-area triangles.
        a, b, c = vertices[faces].unbind(-2)
        cross = torch.cross(b - a, c - a, dim=-1)
        area = 0.5 * cross.norm(dim=-1)
        keep = 1e-12 * diagonal**2 < area
        n_drop = int((~keep).sum())
        if 0 < n_drop:
            warnings.warn(f"{n_drop} degenerate triangles are dropped")
            faces, cross, area = faces[keep], cross[keep], area[keep]
            if len(faces) == 0:
                raise ValueError("mesh has no non-degenerate triangles")
        face_normal = cross / (2 * area.unsqueeze(-1))

        # Angle-weighted vertex pseudo-normals.
        corners = vertices[faces]  # (F, 3, 3)
        e1 = normalize(corners.roll(-1, dims=1) - corners)
        e2 = normalize(corners.roll(1, dims=1) - corners)
        angle = torch.acos(torch.clamp((e1 * e2).sum(-1), min=-1, max=1))
        vertex_normal = torch.zeros_like(vertices)
        weighted = angle.unsqueeze(-1) * face_normal.unsqueeze(1)
        vertex_normal.index_add_(0, faces.reshape(-1), weighted.reshape(-1, 3))
        vertex_normal = normalize(vertex_normal)

        # Edge pseudo-normals; local edge k joins corners k and k+1.
        V = len(vertices)
        u, v = faces, faces.roll(-1, dims=1)
        key = torch.minimum(u, v) * V + torch.maximum(u, v)
        unique, inverse, count = torch.unique(
            key.reshape(-1), return_inverse=True, return_counts=True
        )
        edge_normal = vertices.new_zeros(len(unique), 3)
        edge_normal.index_add_(
            0, inverse, face_normal.unsqueeze(1).expand(-1, 3, -1).reshape(-1, 3)
        )
        edge_normal = normalize(edge_normal)[inverse].reshape(-1, 3, 3)
        self.watertight = bool(torch.all(count == 2))
        if not self.watertight:
            warnings.warn("mesh is not watertight; signed distance is unsigned")

        # Table indexed by region: face, vertices A-C, edges AB, BC, CA.
        pseudo_normal = torch.cat(
            (face_normal.unsqueeze(1), vertex_normal[faces], edge_normal), dim=1
        )

        self.register_buffer("vertices", vertices)
        self.register_buffer("faces", faces)
        self.register_buffer("face_normal", face_normal)
        self.register_buffer("area", area)
        self.register_buffer("pseudo_normal", pseudo_normal)
        self.register_buffer(
            "corner_normal", crease_normals(faces, face_normal, angle, crease_angle)
        )

        centroids = corners.mean(1).cpu().numpy()
        children, leaf, members, leaves = build_hierarchy(centroids, leaf_size)
        face_lo = corners.min(1).values
        face_hi = corners.max(1).values
        index = [torch.as_tensor(m, device=vertices.device) for m in members]
        node_lo = torch.stack([face_lo[i].min(0).values for i in index])
        node_hi = torch.stack([face_hi[i].max(0).values for i in index])
        self.register_buffer("node_lo", node_lo)
        self.register_buffer("node_hi", node_hi)
        # Any vertex below a node bounds the distance to the surface from above.
        self.register_buffer("node_anchor", corners[[int(m[0]) for m in members], 0])
        self.register_buffer("node_children", torch.as_tensor(children).to(faces))
        self.register_buffer("node_leaf", torch.as_tensor(leaf).to(faces))
        leaf_faces = torch.stack(
            [torch.as_tensor(np.resize(m, leaf_size)) for m in leaves]
        ).to(faces)
        self.register_buffer("leaf_faces", leaf_faces)

        if verbose:
            logger = get_logger("mesh")
            logger.info(
                f"{len(faces)} triangles ({n_drop} dropped), "
                f"bounds {lo.tolist()} - {hi.tolist()}, {len(leaves)} leaves"
            )

    @classmethod
    def from_obj(cls, filename, **kwargs):
        """Load a mesh from a Wavefront OBJ file.

        Parameters
        ----------
        filename : str
            Path of OBJ file.

        **kwargs : additional keyword arguments
            Passed to the constructor.

        Returns
        -------
        mesh : TriangleMesh
            Loaded mesh.

        """
        vertices, faces = read_obj(filename)
        return cls(vertices, faces, **kwargs)

    @property
    def bounds(self):
        """Axis-aligned bounding box as a (2, 3) tensor."""
        return torch.stack((self.vertices.min(0).values, self.vertices.max(0).values))

    @property
    def bounding_radius(self):
        """Largest distance from the box center to a vertex."""
        center = self.bounds.mean(0)
        return float((self.vertices - center).norm(dim=-1).max())

    @torch.no_grad()
    def _candidates(self, x, exhaustive):
        N = len(x)
        F = len(self.faces)
        if exhaustive:
            qi = torch.arange(N, device=x.device).repeat_interleave(F)
            fi = torch.arange(F, device=x.device).repeat(N)
            return qi, fi

        # Breadth-first descent over (query, node) pairs.
        qi = torch.arange(N, device=x.device)
        node = torch.zeros_like(qi)
        best = torch.full((N,), float("inf"), dtype=x.dtype, device=x.device)
        found_q, found_leaf = [], []
        while 0 < len(qi):
            y = x[qi]
            gap = torch.clamp(self.node_lo[node] - y, min=0)
            gap = gap + torch.clamp(y - self.node_hi[node], min=0)
            lower = (gap * gap).sum(-1)
            upper = ((y - self.node_anchor[node]) ** 2).sum(-1)
            best = best.scatter_reduce(0, qi, upper, reduce="amin")
            keep = lower <= best[qi] * (1 + 1e-9)
            qi, node = qi[keep], node[keep]
            leaf = self.node_leaf[node]
            is_leaf = 0 <= leaf
            found_q.append(qi[is_leaf])
            found_leaf.append(leaf[is_leaf])
            qi = qi[~is_leaf].repeat_interleave(2)
            node = self.node_children[node[~is_leaf]].reshape(-1)
        qi = torch.cat(found_q)
        li = torch.cat(found_leaf)
        S = self.leaf_faces.size(-1)
        return qi.repeat_interleave(S), self.leaf_faces[li].reshape(-1)

    @torch.no_grad()
    def nearest(self, x, exhaustive=False):
        """Find the closest surface points.

        Parameters
        ----------
        x : Tensor [shape=(..., 3)]
            Query points.

        exhaustive : bool [scalar]
            If True, examine every triangle instead of using the hierarchy.

        Returns
        -------
        out : SurfacePoint
            Closest points. Ties are broken toward the lowest triangle index.

        Examples
        --------
        >>> mesh = diffgws.TriangleMesh(*diffgws.icosphere(3))
        >>> mesh.nearest(torch.tensor([2.0, 0.0, 0.0])).distance
        tensor(1.0000)

        """
        check_size(x.size(-1), 3, "dimension of query")
        shape = x.shape[:-1]
        x = x.detach().reshape(-1, 3).to(self.vertices)
        N = len(x)

        qi, fi = self._candidates(x, exhaustive)
        a, b, c = self.vertices[self.faces[fi]].unbind(-2)
        y = x[qi]
        bary, region = closest_point_on_triangle(y, a, b, c)
        position = bary[..., :1] * a + bary[..., 1:2] * b + bary[..., 2:] * c
        d2 = ((y - position) ** 2).sum(-1)

        inf = torch.full((N,), float("inf"), dtype=d2.dtype, device=d2.device)
        best = inf.scatter_reduce(0, qi, d2, reduce="amin")
        tie = d2 <= best[qi] * (1 + 1e-9) + 1e-30
        F = len(self.faces)
        face = torch.full((N,), F, dtype=torch.long, device=x.device)
        face = face.scatter_reduce(0, qi[tie], fi[tie], reduce="amin")
        chosen = tie & (fi == face[qi])
        P = len(qi)
        pair = torch.full((N,), P, dtype=torch.long, device=x.device)
        pair = pair.scatter_reduce(
            0, qi[chosen], torch.arange(P, device=x.device)[chosen], reduce="amin"
        )

        position = position[pair]
        bary = bary[pair]
        normal = self.pseudo_normal[face, region[pair]]
        distance = torch.sqrt(d2[pair])
        return SurfacePoint(
            position.reshape(*shape, 3),
            -normal.reshape(*shape, 3),
            face.reshape(shape),
            bary.reshape(*shape, 3),
            distance.reshape(shape),
        )

    def shading_normal(self, face, barycentric):
        """Interpolate corner normals across triangles.

        The result is continuous wherever adjacent faces meet at less than the
        crease angle and reduces to the face normal on flat regions.

        Parameters
        ----------
        face : Tensor [shape=(...,)]
            Triangle indices.

        barycentric : Tensor [shape=(..., 3)]
            Barycentric coordinates on the triangles.

        Returns
        -------
        out : Tensor [shape=(..., 3)]
            Unit inward normals.

        """
        normal = (barycentric.unsqueeze(-1) * self.corner_normal[face]).sum(-2)
        return -normalize(normal)

    def signed_distance(self, x, exhaustive=False):
        """Compute signed distances, negative inside the mesh.

        The closest point is held fixed when differentiating, so the gradient is
        the outward unit direction from the closest point. If the mesh is not
        watertight, unsigned distances are returned.

        Parameters
        ----------
        x : Tensor [shape=(..., 3)]
            Query points.

        exhaustive : bool [scalar]
            If True, examine every triangle.

        Returns
        -------
        sd : Tensor [shape=(...,)]
            Signed distances.

        Examples
        --------
        >>> mesh = diffgws.TriangleMesh(*diffgws.icosphere(3))
        >>> mesh.signed_distance(torch.zeros(3)) < 0
        tensor(True)

        """
        hit = self.nearest(x, exhaustive=exhaustive)
        r = x - hit.position
        distance = safe_norm(r)
        if not self.watertight:
            return distance
        sign = torch.where(
            0 <= -(r.detach() * hit.inward_normal).sum(-1),
            torch.ones_like(distance),
            -torch.ones_like(distance),
        )
        return sign * distance

    @torch.no_grad()
    def sample(self, n, seed=0):
        """Sample points uniformly on the surface.

        Parameters
        ----------
        n : int >= 1 [scalar]
            Number of points.

        seed : int [scalar]
            Random seed.

        Returns
        -------
        out : SurfacePoint
            Sampled points with inward facet normals and zero distances.

        """
        assert 1 <= n

        generator = make_generator(seed)
        face = torch.multinomial(
            self.area.cpu(), n, replacement=True, generator=generator
        )
        r = torch.rand(n, 2, generator=generator, dtype=self.vertices.dtype)
        s = torch.sqrt(r[:, 0])
        bary = torch.stack((1 - s, s * (1 - r[:, 1]), s * r[:, 1]), dim=-1)
        face = face.to(self.vertices.device)
        bary = bary.to(self.vertices.device)

        corners = self.vertices[self.faces[face]]
        position = (bary.unsqueeze(-1) * corners).sum(-2)
        return SurfacePoint(
            position,
            -self.face_normal[face],
            face,
            bary,
            torch.zeros_like(s).to(position),
        )

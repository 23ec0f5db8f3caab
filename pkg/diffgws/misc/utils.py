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

import hashlib
import json
import logging
import os
import tempfile

import numpy as np
import torch

SCHEMA_VERSION = 1


def default_dtype():
    t = torch.get_default_dtype()
    if t == torch.float32:  # pragma: no cover
        return np.float32
    elif t == torch.float64:  # pragma: no cover
        return np.float64
    else:
        raise RuntimeError(f"Unknown default dtype: {t}")


def numpy_to_torch(x):
    return torch.from_numpy(np.asarray(x).astype(default_dtype()))


def to_tensor(x, like=None):
    """Convert array-like input to a tensor of the default (or given) dtype."""
    if like is not None:
        return torch.as_tensor(x, dtype=like.dtype, device=like.device)
    if torch.is_tensor(x):
        if x.is_floating_point():
            return x
        return x.to(torch.get_default_dtype())
    return torch.as_tensor(x, dtype=torch.get_default_dtype())


def check_size(x, y, cause):
    assert x == y, f"Unexpected {cause} (input {x} vs target {y})"


def safe_norm(x, dim=-1, keepdim=False, eps=1e-30):
    """L2 norm whose gradient stays finite at the origin."""
    return torch.sqrt(torch.clamp((x * x).sum(dim, keepdim=keepdim), min=eps))


def normalize(x, dim=-1, eps=1e-30):
    return x / safe_norm(x, dim=dim, keepdim=True, eps=eps)


def get_logger(name, verbose=True):
    """Return a logger that prints with the package-wide format.

    Parameters
    ----------
    name : str
        Logger name.

    verbose : bool
        If True, the logger level is set to INFO, otherwise to WARNING.

    Returns
    -------
    logger : logging.Logger
        Configured logger.

    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO if verbose else logging.WARNING)
    if not logger.handlers:
        formatter = logging.Formatter(
            "%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s"
        )
        handler = logging.StreamHandler()
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def read_obj(filename):
    """Read vertices and triangles from a Wavefront OBJ file.

    Only ``v`` and ``f`` records are interpreted. Polygonal faces are fanned into
    triangles and texture/normal indices are discarded.

    Parameters
    ----------
    filename : str
        Path of OBJ file.

    Returns
    -------
    vertices : Tensor [shape=(V, 3)]
        Vertex positions.

    faces : Tensor [shape=(F, 3)]
        Zero-based vertex indices of triangles.

    Examples
    --------
    >>> diffgws.write_obj("box.obj", *diffgws.box())
    >>> v, f = diffgws.read_obj("box.obj")
    >>> f.shape
    torch.Size([12, 3])

    """
    vertices = []
    faces = []
    with open(filename) as fp:
        for lineno, line in enumerate(fp, start=1):
            tokens = line.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            if tokens[0] == "v":
                try:
                    vertices.append([float(t) for t in tokens[1:4]])
                except ValueError:
                    raise ValueError(f"{filename}:{lineno}: malformed vertex record")
                if len(vertices[-1]) != 3:
                    raise ValueError(f"{filename}:{lineno}: malformed vertex record")
            elif tokens[0] == "f":
                try:
                    idx = [int(t.split("/")[0]) for t in tokens[1:]]
                except ValueError:
                    raise ValueError(f"{filename}:{lineno}: malformed face record")
                if len(idx) < 3:
                    raise ValueError(f"{filename}:{lineno}: malformed face record")
                # Negative indices are relative to the current vertex count.
                idx = [i - 1 if 0 < i else len(vertices) + i for i in idx]
                for i in idx:
                    if i < 0 or len(vertices) <= i:
                        raise ValueError(
                            f"{filename}:{lineno}: face index out of range"
                        )
                for k in range(1, len(idx) - 1):
                    faces.append([idx[0], idx[k], idx[k + 1]])

    if len(faces) == 0:
        raise ValueError(f"{filename}: no face records found")
    vertices = numpy_to_torch(np.asarray(vertices))
    faces = torch.as_tensor(faces, dtype=torch.long)
    return vertices, faces


def write_obj(filename, vertices, faces=None):
    """Write vertices (and optionally triangles) to a Wavefront OBJ file.

    Parameters
    ----------
    filename : str
        Path of OBJ file.

    vertices : Tensor [shape=(V, 3)]
        Vertex positions.

    faces : Tensor [shape=(F, 3)] or None
        Zero-based vertex indices of triangles.

    """
    lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in _rows(vertices)]
    if faces is not None:
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in _rows(faces)]
    atomic_write(filename, "\n".join(lines) + "\n")


def write_ply(filename, points, normals=None):
    """Write a point set to an ASCII PLY file.

    Parameters
    ----------
    filename : str
        Path of PLY file.

    points : Tensor [shape=(N, 3)]
        Point positions.

    normals : Tensor [shape=(N, 3)] or None
        Point normals.

    """
    points = _rows(points)
    header = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(points)}",
        "property double x",
        "property double y",
        "property double z",
    ]
    if normals is not None:
        header += ["property double nx", "property double ny", "property double nz"]
        normals = _rows(normals)
    header.append("end_header")
    body = []
    for i, p in enumerate(points):
        values = list(p) if normals is None else list(p) + list(normals[i])
        body.append(" ".join(f"{v:.17g}" for v in values))
    atomic_write(filename, "\n".join(header + body) + "\n")


def read_json(filename):
    with open(filename) as fp:
        return json.load(fp)


def write_json(filename, obj):
    """Write JSON with sorted keys so that equal objects give equal bytes."""
    atomic_write(filename, json.dumps(obj, indent=1, sort_keys=True) + "\n")


def config_hash(obj):
    """Return a short digest of a JSON-serializable object."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def make_meta(config, seed, **kwargs):
    """Return the provenance block embedded in every emitted file."""
    meta = {
        "schema_version": SCHEMA_VERSION,
        "config_hash": config_hash(config),
        "seed": int(seed),
    }
    meta.update(kwargs)
    return meta


def atomic_write(filename, text):
    directory = os.path.dirname(os.path.abspath(filename))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fp:
            fp.write(text)
        os.replace(tmp, filename)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _rows(x):
    if torch.is_tensor(x):
        x = x.detach().cpu().numpy()
    return np.asarray(x).tolist()
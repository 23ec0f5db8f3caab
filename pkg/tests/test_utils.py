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

import logging
import os

import numpy as np
import pytest
import torch

import diffgws
import diffgws.misc.utils as utils
import tests.utils as U


def test_numpy_to_torch():
    x = utils.numpy_to_torch(np.arange(3))
    assert x.dtype == torch.get_default_dtype()
    assert U.allclose(x, [0, 1, 2])


def test_obj(tmp_path):
    filename = os.path.join(tmp_path, "box.obj")
    v, f = diffgws.box([1, 2, 3])
    diffgws.write_obj(filename, v, f)
    v2, f2 = diffgws.read_obj(filename)
    assert U.allclose(v, v2)
    assert torch.equal(f, f2)


def test_obj_records(tmp_path):
    filename = os.path.join(tmp_path, "quad.obj")
    with open(filename, "w") as fp:
        fp.write(
            "# quad\n"
            "o quad\n"
            "v 0 0 0\n"
            "v 1 0 0\n"
            "v 1 1 0\n"
            "v 0 1 0\n"
            "vn 0 0 1\n"
            "f 1/1/1 2/2/1 3/3/1 4/4/1\n"
            "f -4 -3 -1\n"
        )
    v, f = diffgws.read_obj(filename)
    assert v.shape == (4, 3)
    assert f.tolist() == [[0, 1, 2], [0, 2, 3], [0, 1, 3]]


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("v 0 0 0\nv 1 0 0\nf 1 2\n", 3),
        ("v 0 0 0\nv 1 0\n", 2),
        ("v 0 0 x\n", 1),
        ("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n", 4),
    ],
)
def test_malformed_obj(tmp_path, text, lineno):
    filename = os.path.join(tmp_path, "bad.obj")
    with open(filename, "w") as fp:
        fp.write(text)
    with pytest.raises(ValueError, match=f":{lineno}:"):
        diffgws.read_obj(filename)


def test_obj_without_faces(tmp_path):
    filename = os.path.join(tmp_path, "points.obj")
    diffgws.write_obj(filename, torch.zeros(2, 3))
    with pytest.raises(ValueError):
        diffgws.read_obj(filename)


def test_ply(tmp_path):
    filename = os.path.join(tmp_path, "points.ply")
    p = torch.tensor([[0.0, 1.0, 2.0], [3.0, 4.0, 5.0]])
    diffgws.write_ply(filename, p, -p)
    with open(filename) as fp:
        lines = fp.read().splitlines()
    assert lines[0] == "ply"
    assert lines[2] == "element vertex 2"
    assert lines[9] == "end_header"
    assert U.allclose([float(t) for t in lines[11].split()], [3, 4, 5, -3, -4, -5])


def test_json(tmp_path):
    filename = os.path.join(tmp_path, "sub", "x.json")
    obj = {"b": [1, 2], "a": {"y": 1.5, "x": None}}
    utils.write_json(filename, obj)
    assert utils.read_json(filename) == obj
    with open(filename) as fp:
        text = fp.read()
    assert text.index('"a"') < text.index('"b"')


def test_config_hash():
    h1 = utils.config_hash({"a": 1, "b": [1, 2]})
    h2 = utils.config_hash({"b": [1, 2], "a": 1})
    h3 = utils.config_hash({"a": 2, "b": [1, 2]})
    assert h1 == h2
    assert h1 != h3
    assert len(h1) == 16

    meta = utils.make_meta({"a": 1}, 3, command="estimate")
    assert meta["schema_version"] == utils.SCHEMA_VERSION
    assert meta["config_hash"] == utils.config_hash({"a": 1})
    assert meta["seed"] == 3
    assert meta["command"] == "estimate"


def test_atomic_write(tmp_path):
    filename = os.path.join(tmp_path, "a", "b", "c.txt")
    utils.atomic_write(filename, "hello\n")
    utils.atomic_write(filename, "world\n")
    with open(filename) as fp:
        assert fp.read() == "world\n"
    assert os.listdir(os.path.dirname(filename)) == ["c.txt"]


def test_get_logger():
    logger = utils.get_logger("diffgws-test")
    assert logger.level == logging.INFO
    assert len(logger.handlers) == 1
    logger = utils.get_logger("diffgws-test", verbose=False)
    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1

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

import os

import pytest

import diffgws


@pytest.mark.parametrize("name, m", [("pinch", 2), ("tripod", 3), ("fan", 5)])
def test_bundled(name, m):
    spec = diffgws.load_rig(name)
    assert spec.name == name
    assert len(spec.contacts) == m
    assert len(spec.joints) == 2 * m
    assert len(spec.spheres) == 2 * m + 1
    assert len(spec.links) == 2 * m + 1
    assert spec.joints[:2] == ["finger0_proximal", "finger0_distal"]


def test_order():
    spec = diffgws.RigSpec(
        "chain",
        [
            diffgws.Link("c", "b", "revolute"),
            diffgws.Link("b", "a", "revolute"),
            diffgws.Link("a"),
        ],
        contacts=[diffgws.ContactPoint("c", [0.0, 0.0, 0.0])],
    )
    assert spec.order() == [2, 1, 0]


def test_json(tmp_path):
    spec = diffgws.make_finger_rig("quad", 4, link_length=0.05)
    filename = os.path.join(tmp_path, "quad.json")
    spec.to_json(filename)
    loaded = diffgws.load_rig(filename)
    assert loaded == spec
    assert diffgws.RigSpec.from_dict(spec.to_dict()) == spec


def _rig(*links, **kwargs):
    obj = {
        "name": "rig",
        "links": [{"name": "palm"}] + list(links),
        "spheres": [{"link": "palm", "center": [0, 0, 0], "radius": 0.01}],
        "contacts": [{"link": "palm", "position": [0, 0, 0]}],
    }
    obj.update(kwargs)
    return obj


@pytest.mark.parametrize(
    "obj, message",
    [
        (_rig({"name": "palm", "parent": "palm"}), "links: duplicate"),
        (_rig({"name": "finger"}), "links: exactly one"),
        (_rig({"name": "finger", "parent": "wrist"}), r"links\[1\].parent"),
        (_rig({"name": "finger", "parent": "palm", "joint": "ball"}), r"\[1\].joint"),
        (
            _rig({"name": "f", "parent": "palm", "joint": "revolute", "axis": [0] * 3}),
            r"links\[1\].axis",
        ),
        (
            _rig({"name": "finger", "parent": "palm", "lower": 1.0, "upper": 0.0}),
            r"links\[1\].lower",
        ),
        (
            _rig({"name": "a", "parent": "b"}, {"name": "b", "parent": "a"}),
            "kinematic loop",
        ),
        (
            _rig(spheres=[{"link": "wrist", "center": [0, 0, 0], "radius": 0.01}]),
            r"spheres\[0\].link",
        ),
        (
            _rig(spheres=[{"link": "palm", "center": [0, 0, 0], "radius": 0.0}]),
            r"spheres\[0\].radius",
        ),
        (_rig(contacts=[]), "contacts: at least one"),
    ],
)
def test_invalid(obj, message):
    with pytest.raises(ValueError, match=message):
        diffgws.RigSpec.from_dict(obj)

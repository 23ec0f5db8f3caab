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

import dataclasses
import math
from dataclasses import dataclass
from dataclasses import field
from typing import List
from typing import Optional

from .utils import read_json
from .utils import write_json

JOINT_TYPES = ("fixed", "revolute", "prismatic")


@dataclass
class Link:
    name: str
    parent: Optional[str] = None
    joint: str = "fixed"
    axis: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])
    xyz: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    rpy: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    lower: float = 0.0
    upper: float = 0.0


@dataclass
class Sphere:
    link: str
    center: List[float]
    radius: float


@dataclass
class ContactPoint:
    link: str
    position: List[float]


@dataclass
class RigSpec:
    """Articulated contact rig: a tree of links connected by one-dimensional
    joints, collision spheres attached to links, and the designated contact
    points whose positions in their link frames stay fixed.

    The joint origin (`xyz`, roll-pitch-yaw `rpy`) places a link relative to its
    parent; the joint then rotates about or slides along `axis` expressed in the
    link frame. Exactly one link has no parent, and it is moved by the root pose.

    """

    name: str
    links: List[Link]
    spheres: List[Sphere] = field(default_factory=list)
    contacts: List[ContactPoint] = field(default_factory=list)

    def __post_init__(self):
        self.links = [x if isinstance(x, Link) else Link(**x) for x in self.links]
        self.spheres = [
            x if isinstance(x, Sphere) else Sphere(**x) for x in self.spheres
        ]
        self.contacts = [
            x if isinstance(x, ContactPoint) else ContactPoint(**x)
            for x in self.contacts
        ]
        self.validate()

    def validate(self):
        """Raise ValueError naming the offending field if the rig is invalid."""
        names = [link.name for link in self.links]
        if len(set(names)) != len(names):
            raise ValueError("links: duplicate link name")
        roots = [link.name for link in self.links if link.parent is None]
        if len(roots) != 1:
            raise ValueError("links: exactly one root link is required")
        for i, link in enumerate(self.links):
            if link.parent is not None and link.parent not in names:
                raise ValueError(f"links[{i}].parent: unknown link {link.parent}")
            if link.joint not in JOINT_TYPES:
                raise ValueError(f"links[{i}].joint: {link.joint} is not supported")
            if link.joint != "fixed" and not any(link.axis):
                raise ValueError(f"links[{i}].axis: zero joint axis")
            if link.upper < link.lower:
                raise ValueError(f"links[{i}].lower: lower limit exceeds upper")
        self.order()
        for key, items in (("spheres", self.spheres), ("contacts", self.contacts)):
            for i, x in enumerate(items):
                if x.link not in names:
                    raise ValueError(f"{key}[{i}].link: unknown link {x.link}")
        for i, s in enumerate(self.spheres):
            if not 0 < s.radius:
                raise ValueError(f"spheres[{i}].radius: must be positive")
        if len(self.contacts) == 0:
            raise ValueError("contacts: at least one contact point is required")

    def order(self):
        """Return link indices sorted so that parents precede children."""
        index = {link.name: i for i, link in enumerate(self.links)}
        done = []
        visited = set()
        for i in range(len(self.links)):
            chain = []
            j = i
            while j not in visited:
                if j in chain:
                    raise ValueError(f"links[{j}].parent: kinematic loop")
                chain.append(j)
                parent = self.links[j].parent
                if parent is None:
                    break
                j = index[parent]
            for j in reversed(chain):
                visited.add(j)
                done.append(j)
        return done

    @property
    def joints(self):
        """Names of movable links in declaration order."""
        return [link.name for link in self.links if link.joint != "fixed"]

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)

    @classmethod
    def from_json(cls, filename):
        return cls.from_dict(read_json(filename))

    def to_json(self, filename):
        write_json(filename, self.to_dict())


def make_finger_rig(
    name,
    n_finger,
    base_radius=0.05,
    link_length=0.04,
    link_radius=0.008,
    palm_radius=0.015,
):
    """Build a palm with evenly spaced two-link fingers hanging along -z.

    Each finger flexes toward the palm axis about a tangential revolute axis at
    its base and at its middle. The designated contact point is the tip of the
    distal link, which lies on the surface of its tip sphere.

    Parameters
    ----------
    name : str
        Rig name.

    n_finger : int >= 1 [scalar]
        Number of fingers.

    base_radius : float > 0 [scalar]
        Distance of finger bases from the palm axis.

    link_length : float > 0 [scalar]
        Length of each finger link.

    link_radius : float > 0 [scalar]
        Radius of finger spheres.

    palm_radius : float > 0 [scalar]
        Radius of the palm sphere.

    Returns
    -------
    spec : RigSpec
        Rig.

    """
    assert 1 <= n_finger

    L = link_length
    links = [Link("palm")]
    spheres = [Sphere("palm", [0.0, 0.0, 0.0], palm_radius)]
    contacts = []
    for i in range(n_finger):
        phi = 2 * math.pi * i / n_finger
        axis = [-math.sin(phi), math.cos(phi), 0.0]
        base = [base_radius * math.cos(phi), base_radius * math.sin(phi), 0.0]
        proximal = f"finger{i}_proximal"
        distal = f"finger{i}_distal"
        tip = [0.0, 0.0, -L]
        links.append(
            Link(proximal, "palm", "revolute", axis, base, lower=-0.5, upper=1.6)
        )
        links.append(Link(distal, proximal, "revolute", axis, tip, upper=1.6))
        spheres.append(Sphere(proximal, [0.0, 0.0, -L / 2], link_radius))
        spheres.append(Sphere(distal, [0.0, 0.0, -L + link_radius], link_radius))
        contacts.append(ContactPoint(distal, [0.0, 0.0, -L]))
    return RigSpec(name, links, spheres, contacts)


def load_rig(name):
    """Return a bundled rig ('pinch', 'tripod' or 'fan') or load a JSON file.

    Examples
    --------
    >>> len(diffgws.load_rig("tripod").contacts)
    3

    """
    if name == "pinch":
        return make_finger_rig("pinch", 2)
    elif name == "tripod":
        return make_finger_rig("tripod", 3)
    elif name == "fan":
        return make_finger_rig("fan", 5)
    return RigSpec.from_json(name)

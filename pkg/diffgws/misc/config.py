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
import os
from dataclasses import dataclass
from dataclasses import field
from typing import List
from typing import Optional
from typing import Union

from .utils import read_json

MODELS = ("pcf", "sfc")
VARIANTS = ("ours", "baseline", "l2", "nocpn")


class ConfigError(ValueError):
    """Invalid task configuration. The message starts with the dotted field
    path of the offending entry."""

    def __init__(self, path, message):
        super(ConfigError, self).__init__(f"{path}: {message}")
        self.path = path


@dataclass
class EstimatorConfig:
    K: int = 100
    delta_deg: float = 15.0
    cpn: bool = True


@dataclass
class TaskSpaceConfig:
    w_t: List[float]
    gamma_deg: float = 15.0


@dataclass
class ContactConfig:
    p: List[float]
    n: List[float]


@dataclass
class MeshConfig:
    #: OBJ file, or None for a procedural shape.
    path: Optional[str] = None
    shape: str = "sphere"
    scale: float = 1.0


@dataclass
class RigConfig:
    #: Bundled rig name or RigSpec JSON file.
    name: str = "tripod"
    translation: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    rotation: List[float] = field(default_factory=lambda: [1.0, 0.0, 0.0, 0.0])
    #: Standard deviations of translation (meters) and rotation (radians).
    perturbation: List[float] = field(default_factory=lambda: [0.0, 0.0])


@dataclass
class OptimizerConfig:
    n_iter: int = 500
    step_size: float = 1e-2
    shrink: float = 0.5
    max_backtrack: int = 8
    patience: int = 10
    weights: List[float] = field(default_factory=lambda: [1.0, 100.0, 100.0, 100.0])
    fd_step: Optional[float] = None
    variant: str = "ours"
    energy: str = "cos"
    contact_threshold: float = 5e-3


@dataclass
class OutputConfig:
    directory: str = "out"
    points: str = "ply"


@dataclass
class TaskConfig:
    """Experiment description shared by every command.

    Exactly one of `contacts` (explicit contact positions and normals) and `rig`
    (contact rig with an initial pose, for synthesis) is given. Angles are in
    degrees; `tws.w_t` is normalized on load.

    """

    tws: TaskSpaceConfig
    seed: int = 0
    contact_model: str = "pcf"
    mu: Union[float, List[float]] = 0.5
    mu2: Union[float, List[float]] = 0.1
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    mesh: Optional[MeshConfig] = None
    contacts: Optional[List[ContactConfig]] = None
    rig: Optional[RigConfig] = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def delta(self):
        return math.radians(self.estimator.delta_deg)

    @property
    def gamma(self):
        return math.radians(self.tws.gamma_deg)

    def to_dict(self):
        return dataclasses.asdict(self)


def _build(cls, obj, path):
    if isinstance(obj, cls):
        return obj
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected an object, got {type(obj).__name__}")
    names = {f.name: f for f in dataclasses.fields(cls)}
    for key in obj:
        if key not in names:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown field")
    for name, f in names.items():
        no_default = (
            f.default is dataclasses.MISSING
            and f.default_factory is dataclasses.MISSING
        )
        if no_default and name not in obj:
            raise ConfigError(f"{path}.{name}" if path else name, "missing field")
    return cls(**obj)


def _vector(x, size, path):
    if not isinstance(x, (list, tuple)) or len(x) != size:
        raise ConfigError(path, f"expected {size} numbers")
    try:
        return [float(v) for v in x]
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected {size} numbers")


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(path, "expected a number")
    return float(x)


def _normalize(x, path):
    length = math.sqrt(sum(v * v for v in x))
    if length == 0 or not math.isfinite(length):
        raise ConfigError(path, "zero vector")
    return [v / length for v in x]


def _friction(x, path):
    values = x if isinstance(x, (list, tuple)) else [x]
    for i, v in enumerate(values):
        if not isinstance(v, (int, float)) or not 0 < v:
            where = f"{path}[{i}]" if isinstance(x, (list, tuple)) else path
            raise ConfigError(where, "friction coefficient must be positive")
    return [float(v) for v in x] if isinstance(x, (list, tuple)) else float(x)


def parse_task_config(obj, base=None):
    """Validate a task configuration document.

    Parameters
    ----------
    obj : dict
        Parsed JSON document.

    base : str or None
        Directory that relative file paths are resolved against.

    Returns
    -------
    config : TaskConfig
        Configuration.

    Raises
    ------
    ConfigError
        If a field is missing, unknown or invalid.

    Examples
    --------
    >>> config = diffgws.parse_task_config({"tws": {"w_t": [0, 0, 2, 0, 0, 0]}})
    >>> config.tws.w_t
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]

    """
    obj = dict(obj)
    if isinstance(obj.get("mesh"), str):
        obj["mesh"] = {"path": obj["mesh"]}
    if isinstance(obj.get("rig"), str):
        obj["rig"] = {"name": obj["rig"]}
    if "mu1" in obj:
        if "mu" in obj:
            raise ConfigError("mu1", "give either mu or mu1")
        obj["mu"] = obj.pop("mu1")
    for key, cls in (
        ("tws", TaskSpaceConfig),
        ("estimator", EstimatorConfig),
        ("mesh", MeshConfig),
        ("rig", RigConfig),
        ("optimizer", OptimizerConfig),
        ("output", OutputConfig),
    ):
        if obj.get(key) is not None:
            obj[key] = _build(cls, obj[key], key)
    if obj.get("contacts") is not None:
        if not isinstance(obj["contacts"], list) or len(obj["contacts"]) == 0:
            raise ConfigError("contacts", "expected a non-empty list")
        obj["contacts"] = [
            _build(ContactConfig, c, f"contacts[{i}]")
            for i, c in enumerate(obj["contacts"])
        ]
    config = _build(TaskConfig, obj, "")

    seed = config.seed
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed", "must be an integer")
    if not -(2**63) <= seed < 2**63:
        raise ConfigError("seed", "must fit in a signed 64-bit integer")
    if config.contact_model not in MODELS:
        raise ConfigError(
            "contact_model", f"{config.contact_model} is not supported"
        )
    config.mu = _friction(config.mu, "mu")
    config.mu2 = _friction(config.mu2, "mu2")

    tws = config.tws
    tws.w_t = _normalize(_vector(tws.w_t, 6, "tws.w_t"), "tws.w_t")
    tws.gamma_deg = _number(tws.gamma_deg, "tws.gamma_deg")
    if not 0 < tws.gamma_deg <= 180:
        raise ConfigError("tws.gamma_deg", "must be in (0, 180]")

    est = config.estimator
    if not isinstance(est.K, int) or est.K < 1:
        raise ConfigError("estimator.K", "must be a positive integer")
    est.delta_deg = _number(est.delta_deg, "estimator.delta_deg")
    if not 0 <= est.delta_deg <= 45:
        raise ConfigError("estimator.delta_deg", "must be in [0, 45]")

    if (config.contacts is None) == (config.rig is None):
        raise ConfigError("contacts", "exactly one of contacts and rig is required")
    if config.contacts is not None:
        for i, c in enumerate(config.contacts):
            c.p = _vector(c.p, 3, f"contacts[{i}].p")
            c.n = _normalize(_vector(c.n, 3, f"contacts[{i}].n"), f"contacts[{i}].n")
        for key in ("mu", "mu2"):
            value = getattr(config, key)
            if isinstance(value, list) and len(value) != len(config.contacts):
                raise ConfigError(key, "one coefficient per contact is required")
    else:
        if config.mesh is None:
            raise ConfigError("mesh", "required with rig")
        rig = config.rig
        rig.translation = _vector(rig.translation, 3, "rig.translation")
        rig.rotation = _normalize(
            _vector(rig.rotation, 4, "rig.rotation"), "rig.rotation"
        )
        rig.perturbation = _vector(rig.perturbation, 2, "rig.perturbation")
        if min(rig.perturbation) < 0:
            raise ConfigError("rig.perturbation", "must be non-negative")
        if base is not None and rig.name.endswith(".json"):
            rig.name = os.path.join(base, rig.name)

    if config.mesh is not None:
        if config.mesh.path is not None and base is not None:
            config.mesh.path = os.path.join(base, config.mesh.path)
        if not 0 < config.mesh.scale:
            raise ConfigError("mesh.scale", "must be positive")

    opt = config.optimizer
    if not isinstance(opt.n_iter, int) or opt.n_iter < 1:
        raise ConfigError("optimizer.n_iter", "must be a positive integer")
    if not 0 < opt.shrink < 1:
        raise ConfigError("optimizer.shrink", "must be in (0, 1)")
    if not 0 < opt.step_size:
        raise ConfigError("optimizer.step_size", "must be positive")
    opt.weights = _vector(opt.weights, 4, "optimizer.weights")
    if min(opt.weights) < 0:
        raise ConfigError("optimizer.weights", "must be non-negative")
    if opt.variant not in VARIANTS:
        raise ConfigError("optimizer.variant", f"{opt.variant} is not supported")
    if opt.energy not in ("cos", "l2"):
        raise ConfigError("optimizer.energy", f"{opt.energy} is not supported")
    if config.output.points not in ("ply", "obj"):
        raise ConfigError("output.points", f"{config.output.points} is not supported")
    return config


def load_task_config(filename):
    """Read and validate a task configuration JSON file.

    Relative mesh and rig paths are resolved against the directory of the file.

    Parameters
    ----------
    filename : str
        JSON file.

    Returns
    -------
    config : TaskConfig
        Configuration.

    """
    obj = read_json(filename)
    if not isinstance(obj, dict):
        raise ConfigError("", "expected a JSON object")
    return parse_task_config(obj, base=os.path.dirname(os.path.abspath(filename)))


def apply_overrides(config, K=None, delta_deg=None, seed=None):
    """Return a copy of the configuration with command-line overrides applied."""
    obj = config.to_dict()
    if K is not None:
        obj["estimator"]["K"] = K
    if delta_deg is not None:
        obj["estimator"]["delta_deg"] = delta_deg
    if seed is not None:
        obj["seed"] = seed
    return parse_task_config(obj)

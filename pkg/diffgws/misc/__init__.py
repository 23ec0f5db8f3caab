from .config import ConfigError
from .config import TaskConfig
from .config import apply_overrides
from .config import load_task_config
from .config import parse_task_config
from .linprog import LinprogResult
from .linprog import linprog
from .rig import ContactPoint
from .rig import Link
from .rig import RigSpec
from .rig import Sphere
from .rig import load_rig
from .rig import make_finger_rig
from .sampling import axis_angle_to_quaternion
from .sampling import make_generator
from .sampling import quaternion_multiply
from .sampling import quaternion_to_matrix
from .sampling import random_rotation
from .sampling import sample_sector_directions
from .sampling import sample_unit_directions
from .shapes import box
from .shapes import cylinder
from .shapes import icosphere
from .shapes import make_shape
from .shapes import torus
from .utils import read_obj
from .utils import write_obj
from .utils import write_ply

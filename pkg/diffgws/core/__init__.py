from .cpn import ContactPositionNormalization
from .cpn import ContactPositionNormalization as CPN
from .dcone import DiscretizedFrictionCone
from .dcone import fibonacci_sphere
from .energy import DistanceEnergy
from .energy import PenetrationEnergy
from .eps import EpsilonMetric
from .eps import TaskOrientedEpsilonMetric
from .epsoracle import EpsilonOracle
from .fccheck import ForceClosureSimplexCheck
from .fk import ForwardKinematics
from .fk import KinematicsResult
from .gmat import GraspMatrix
from .gwb import BoundarySampleSet
from .gwb import GraspWrenchBoundaryEstimation
from .gwb import GraspWrenchBoundaryEstimation as GWB
from .gws import GraspWrenchSupport
from .gws import GraspWrenchSupport as GWS
from .mesh import SurfacePoint
from .mesh import TriangleMesh
from .mesh import closest_point_on_triangle
from .pcf import PointContactSupport
from .pcf import cone_angles
from .pcf import cone_support
from .project import ContactProjection
from .ray import BoundaryRay
from .ray import RayResult
from .rle import RelativeLengthError
from .rle import RelativeLengthError as RLE
from .sfc import SoftContactSupport
from .sparsity import Sparsity
from .synth import EnergyBreakdown
from .synth import SynthesisResult
from .synth import TaskOrientedGraspSynthesis
from .synth import apply_variant
from .tangent import TangentFrame
from .tenergy import TaskEnergyReport
from .tenergy import TaskOrientedEnergy
from .tws import TaskWrenchSpace
from .tws import TaskWrenchSpace as TWS

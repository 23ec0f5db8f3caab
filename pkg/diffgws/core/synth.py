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
from typing import List
from typing import NamedTuple

import torch
import torch.nn as nn

from ..misc.sampling import axis_angle_to_quaternion
from ..misc.sampling import make_generator
from ..misc.sampling import quaternion_multiply
from ..misc.sampling import sample_sector_directions
from ..misc.sampling import sample_unit_directions
from ..misc.utils import get_logger
from ..misc.utils import to_tensor
from .energy import DistanceEnergy
from .energy import PenetrationEnergy
from .epsoracle import EpsilonOracle
from .eps import TaskOrientedEpsilonMetric
from .fk import ForwardKinematics
from .gwb import GraspWrenchBoundaryEstimation
from .project import ContactProjection
from .tenergy import TaskOrientedEnergy


class EnergyBreakdown(NamedTuple):
    total: torch.Tensor
    task: torch.Tensor
    distance: torch.Tensor
    penetration: torch.Tensor
    self_penetration: torch.Tensor


class SynthesisResult(NamedTuple):
    #: Final configuration.
    q: torch.Tensor

    #: Total energy after each iteration, starting with the initial one.
    trace: List[float]

    #: Posed rig contact points, shape (C, 3).
    x: torch.Tensor

    #: Nearest surface points, shape (C, 3).
    p: torch.Tensor

    #: Inward normals there, shape (C, 3).
    n: torch.Tensor

    #: Which contact points are within the contact threshold.
    in_contact: torch.Tensor

    #: Task-oriented epsilon metric of the contacts in contact, zero without
    #: contact and NaN when no boundary sample falls in the task sector.
    eps_t: float

    #: Largest sphere penetration depth into the object.
    max_penetration: float

    #: True if every probe direction of the task sector is covered.
    coverage: bool

    #: Coverage with penetration below the tolerance.
    success: bool

    #: True if the line search failed for too many consecutive iterations.
    early_stop: bool

    #: Number of iterations performed.
    n_iter: int


def apply_variant(name, kwargs):
    """Return synthesis keyword arguments modified for an ablation variant.

    Parameters
    ----------
    name : ['ours', 'baseline', 'l2', 'nocpn']
        Variant. The baseline drops the task energy, `l2` uses the L2 task energy
        and `nocpn` turns contact position normalization off.

    kwargs : dict
        Keyword arguments of :class:`TaskOrientedGraspSynthesis`.

    Returns
    -------
    out : dict
        Modified copy.

    """
    kwargs = dict(kwargs)
    if name == "ours":
        pass
    elif name == "baseline":
        weights = list(kwargs.get("weights", (1.0, 100.0, 100.0, 100.0)))
        weights[0] = 0.0
        kwargs["weights"] = tuple(weights)
    elif name == "l2":
        kwargs["variant"] = "l2"
    elif name == "nocpn":
        kwargs["cpn"] = False
    else:
        raise ValueError(f"variant {name} is not supported")
    return kwargs


def _select(value, mask):
    value = to_tensor(value)
    if value.dim() == 0:
        return value
    return value[mask]


class TaskOrientedGraspSynthesis(nn.Module):
    """Synthesize a static rig pose whose contact grasp wrench space matches a
    task wrench space.

    The total energy is :math:`w_t E_t + w_d E_d + w_p E_p + w_s E_s`, where
    :math:`E_t` is the task-oriented energy of the boundary samples at the nearest
    surface points of the rig contact points, :math:`E_d` the contact distance
    energy, :math:`E_p` the object penetration energy and :math:`E_s` the
    self-penetration energy. The last three are squared lengths and are divided
    by the squared `length_scale` so that the weights do not depend on the size
    of the object. The energy is minimized by gradient descent with a
    backtracking line search: each iteration tries the step
    :math:`\\boldsymbol{q} - s \\nabla E / \\max(1, \\|\\nabla E\\|)` and
    shrinks :math:`s` until the energy does not increase. The step carries over
    between iterations: an accepted step is enlarged by `1 / shrink` up to
    `step_size` for the next iteration, and after a failed search the next one
    continues below the smallest step tried. The root quaternion gradient is
    projected onto the tangent space of the unit sphere and the quaternion is
    renormalized after each step; joint values are clamped to their limits.

    Parameters
    ----------
    mesh : TriangleMesh
        Object mesh.

    rig : RigSpec
        Contact rig.

    w_t : list[float] [shape=(6,)]
        Task axis.

    gamma : float (0 < gamma <= pi) [scalar]
        Half-angle of the task sector in radians.

    K : int >= 1 [scalar]
        Number of boundary samples in the task energy.

    delta : float [0 <= delta <= pi/4]
        Approximation angle in radians.

    cpn : bool [scalar]
        If True, normalize contact positions.

    model : ['pcf', 'sfc']
        Contact model.

    mu : float > 0 or list[float] [shape=(C,)]
        (Tangential) friction coefficient(s).

    mu2 : float > 0 or list[float] [shape=(C,)]
        Torsional friction coefficient(s), used only by the soft finger model.

    variant : ['cos', 'l2']
        Task energy variant.

    weights : tuple[float] [shape=(4,)]
        Weights of the task, distance, penetration and self-penetration energies.

    n_iter : int >= 1 [scalar]
        Number of iterations.

    step_size : float > 0 [scalar]
        Initial step of the line search.

    shrink : float (0 < shrink < 1) [scalar]
        Step reduction factor.

    max_backtrack : int >= 0 [scalar]
        Number of step reductions per iteration.

    patience : int >= 1 [scalar]
        Number of consecutive failed iterations that stops the optimization.

    fd_step : float > 0 [scalar] or None
        Finite difference step of the nearest-point map.

    smooth : bool [scalar]
        If True, contact normals are interpolated shading normals.

    length_scale : float > 0 [scalar] or None
        Length dividing the distance and penetration terms. If None, the bounding
        radius of the mesh.

    seed : int [scalar]
        Random seed of boundary directions.

    contact_threshold : float >= 0 [scalar]
        Distance below which a contact point counts as touching the object.

    penetration_tolerance : float >= 0 [scalar]
        Largest penetration depth of a successful result.

    n_eval : int >= 1 [scalar]
        Number of uniform directions in the final evaluation.

    n_probe : int >= 1 [scalar]
        Number of task sector probes in the final evaluation.

    verbose : bool [scalar]
        If True, log progress.

    """

    def __init__(
        self,
        mesh,
        rig,
        w_t,
        gamma=math.radians(15),
        K=100,
        delta=math.radians(15),
        cpn=True,
        model="pcf",
        mu=0.5,
        mu2=0.1,
        variant="cos",
        weights=(1.0, 100.0, 100.0, 100.0),
        n_iter=500,
        step_size=1e-2,
        shrink=0.5,
        max_backtrack=8,
        patience=10,
        fd_step=None,
        smooth=True,
        length_scale=None,
        seed=0,
        contact_threshold=5e-3,
        penetration_tolerance=1e-2,
        n_eval=10000,
        n_probe=1000,
        verbose=False,
    ):
        super(TaskOrientedGraspSynthesis, self).__init__()

        assert len(weights) == 4 and all(0 <= w for w in weights)
        assert 1 <= n_iter
        assert 0 < step_size
        assert 0 < shrink < 1
        assert 0 <= max_backtrack
        assert 1 <= patience
        assert 0 <= contact_threshold
        assert 0 <= penetration_tolerance

        self.weights = tuple(float(w) for w in weights)
        self.n_iter = n_iter
        self.step_size = step_size
        self.shrink = shrink
        self.max_backtrack = max_backtrack
        self.patience = patience
        self.seed = seed
        self.contact_threshold = contact_threshold
        self.penetration_tolerance = penetration_tolerance
        self.n_eval = n_eval
        self.n_probe = n_probe
        self.verbose = verbose
        self.model = model
        self.mu = mu
        self.mu2 = mu2
        self.cpn = cpn

        self.length_scale = (
            mesh.bounding_radius if length_scale is None else float(length_scale)
        )
        assert 0 < self.length_scale

        self.mesh = mesh
        self.fk = ForwardKinematics(rig)
        self.project = ContactProjection(mesh, fd_step, smooth)
        self.estimator = GraspWrenchBoundaryEstimation(
            K, delta, cpn, model, mu, mu2, seed
        )
        self.task = TaskOrientedEnergy(w_t, gamma, variant)
        self.distance = DistanceEnergy()
        self.penetration = PenetrationEnergy(
            mesh, self.fk.sphere_radius, self.fk.self_collision_pairs()
        )

        if self.verbose:
            self.logger = get_logger("synth")

    def initial_configuration(
        self,
        translation=(0, 0, 0),
        rotation=(1, 0, 0, 0),
        perturbation=(0.0, 0.0),
        seed=0,
    ):
        """Return the given root pose with a random perturbation and zero joints.

        Parameters
        ----------
        translation : tuple[float] [shape=(3,)]
            Root translation.

        rotation : tuple[float] [shape=(4,)]
            Root quaternion (w, x, y, z).

        perturbation : tuple[float] [shape=(2,)]
            Standard deviations of the translation (meters) and of the rotation
            vector (radians).

        seed : int [scalar]
            Random seed.

        Returns
        -------
        q : Tensor [shape=(7+J,)]
            Configuration.

        """
        q = self.fk.neutral(translation, rotation)
        generator = make_generator(seed)
        noise = torch.randn(6, generator=generator, dtype=q.dtype).to(q.device)
        q[:3] += perturbation[0] * noise[:3]
        dq = axis_angle_to_quaternion(perturbation[1] * noise[3:])
        q[3:7] = quaternion_multiply(dq, q[3:7])
        return q

    def retract(self, q):
        """Renormalize the quaternion and clamp joint values."""
        t, r, theta = q[..., :3], q[..., 3:7], q[..., 7:]
        r = r / r.norm(dim=-1, keepdim=True)
        theta = torch.minimum(torch.maximum(theta, self.fk.lower), self.fk.upper)
        return torch.cat((t, r, theta), dim=-1)

    def total_energy(self, q):
        """Evaluate the weighted total energy and its terms.

        Parameters
        ----------
        q : Tensor [shape=(..., 7+J)]
            Configurations.

        Returns
        -------
        out : EnergyBreakdown
            Total energy and unweighted terms, the length terms already divided
            by the squared length scale.

        """
        kin = self.fk(q)
        x = kin.contacts
        p, n = self.project(x)
        samples = self.estimator(p, n)
        task = self.task(samples.w, samples.u).value
        distance = self.distance(x, p.detach())
        penetration, self_penetration = self.penetration(kin.spheres, split=True)
        scale = self.length_scale**2
        distance = distance / scale
        penetration = penetration / scale
        self_penetration = self_penetration / scale
        w_t, w_d, w_p, w_s = self.weights
        total = w_t * task + w_d * distance + w_p * penetration + w_s * self_penetration
        return EnergyBreakdown(total, task, distance, penetration, self_penetration)

    def energy_gradient(self, q):
        """Differentiate the total energy.

        The task term is differentiated analytically down to the contact points
        and the nearest-point map by finite differences. The component along the
        root quaternion is removed.

        Parameters
        ----------
        q : Tensor [shape=(7+J,)]
            Configuration.

        Returns
        -------
        energy : EnergyBreakdown
            Energies at `q`.

        grad : Tensor [shape=(7+J,)]
            Gradient.

        """
        with torch.enable_grad():
            q = q.detach().requires_grad_()
            energy = self.total_energy(q)
            (grad,) = torch.autograd.grad(energy.total, q)
        r = q.detach()[3:7] / q.detach()[3:7].norm()
        grad[3:7] -= (grad[3:7] @ r) * r
        energy = EnergyBreakdown(*[e.detach() for e in energy])
        return energy, grad

    def optimize(self, q):
        """Run gradient descent with the greedy line search.

        Parameters
        ----------
        q : Tensor [shape=(7+J,)]
            Initial configuration.

        Returns
        -------
        out : SynthesisResult
            Final pose, energy trace and evaluation.

        """
        q = self.retract(q.detach())
        energy, grad = self.energy_gradient(q)
        trace = [float(energy.total)]
        failures = 0
        early_stop = False
        n = 0
        scale = self.step_size
        for n in range(1, self.n_iter + 1):
            norm = max(1.0, float(grad.norm()))
            accepted = False
            for _ in range(self.max_backtrack + 1):
                candidate = self.retract(q - (scale / norm) * grad)
                with torch.no_grad():
                    value = self.total_energy(candidate).total
                if value <= energy.total:
                    accepted = True
                    break
                scale *= self.shrink

            if accepted:
                q = candidate
                scale = min(self.step_size, scale / self.shrink)
                energy, grad = self.energy_gradient(q)
                failures = 0
            else:
                failures += 1
            trace.append(float(energy.total))

            if self.verbose:
                self.logger.info(
                    f"iter {n:5d}: {energy.total:g} (task {energy.task:g}, "
                    f"distance {energy.distance:g}, "
                    f"penetration {energy.penetration:g})"
                )
            if self.patience <= failures:
                early_stop = True
                if self.verbose:
                    self.logger.info(f"line search failed {failures} times in a row")
                break

        return self.evaluate(q, trace, early_stop, n)

    @torch.no_grad()
    def evaluate(self, q, trace=None, early_stop=False, n_iter=0):
        """Measure the task-oriented epsilon metric, sector coverage and
        penetration of a configuration.

        Only contact points within `contact_threshold` of the surface take part.
        The metric uses exact cones, uniform directions and directions drawn
        inside the task sector. If no boundary sample falls in the sector, a
        warning is issued and the metric is NaN.

        Parameters
        ----------
        q : Tensor [shape=(7+J,)]
            Configuration.

        Returns
        -------
        out : SynthesisResult
            Evaluation.

        """
        kin = self.fk(q)
        x = kin.contacts
        hit = self.mesh.nearest(x)
        normal = self.project.surface_normal(hit)
        in_contact = hit.distance <= self.contact_threshold
        max_penetration = float(self.penetration.depth(kin.spheres).max())

        eps_t = 0.0
        coverage = False
        if torch.any(in_contact):
            p = hit.position[in_contact]
            n = normal[in_contact]
            mu = _select(self.mu, in_contact)
            mu2 = _select(self.mu2, in_contact)
            tws = self.task.tws
            probes = sample_sector_directions(
                self.n_probe, tws.w_t, tws.gamma, seed=self.seed
            )
            u = sample_unit_directions(self.n_eval, self.seed).to(probes)
            u = torch.cat((u, probes))
            estimator = GraspWrenchBoundaryEstimation(
                len(u), 0, self.cpn, self.model, mu, mu2, self.seed
            )
            samples = estimator(p, n, u.to(p))
            metric = TaskOrientedEpsilonMetric(tws.w_t, tws.gamma, seed=self.seed)
            eps_t = metric(samples.w, samples.u)
            oracle = EpsilonOracle(64, model=self.model, mu=mu, mu2=mu2)
            coverage = oracle.coverage(samples.p, n, probes.to(p))

        success = coverage and max_penetration <= self.penetration_tolerance
        return SynthesisResult(
            q.detach(),
            [] if trace is None else trace,
            x,
            hit.position,
            normal,
            in_contact,
            eps_t,
            max_penetration,
            coverage,
            success,
            early_stop,
            n_iter,
        )

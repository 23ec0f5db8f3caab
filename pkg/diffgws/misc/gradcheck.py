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

import numpy as np
import torch

from ..core.gwb import GraspWrenchBoundaryEstimation
from ..core.tenergy import TaskOrientedEnergy
from .bench import make_case


def central_difference(fn, x, h=1e-5):
    """Differentiate a scalar function by central differences.

    Parameters
    ----------
    fn : callable
        Function mapping a tensor shaped like `x` to a scalar tensor.

    x : Tensor [shape=(...)]
        Point.

    h : float > 0 [scalar]
        Step.

    Returns
    -------
    grad : Tensor [shape=(...)]
        Gradient.

    """
    x = x.detach()
    grad = torch.empty_like(x).reshape(-1)
    flat = x.reshape(-1)
    for i in range(len(flat)):
        e = torch.zeros_like(flat)
        e[i] = h
        f_plus = fn((flat + e).reshape(x.shape))
        f_minus = fn((flat - e).reshape(x.shape))
        grad[i] = (f_plus - f_minus) / (2 * h)
    return grad.reshape(x.shape)


def near_kink(estimator, p, n, band):
    """Return True if a cone angle of the boundary directions is within `band`
    of a kink of the support mapping.

    Parameters
    ----------
    estimator : GraspWrenchBoundaryEstimation
        Estimator with exact cones.

    p : Tensor [shape=(m, 3)]
        Contact positions.

    n : Tensor [shape=(m, 3)]
        Inward contact normals.

    band : float >= 0 [scalar]
        Half-width of the excluded band in radians.

    Returns
    -------
    out : bool
        True if the configuration is excluded.

    """
    samples = estimator(p, n)
    theta, alpha = estimator.gws.cone_angles(estimator.u, samples.p, samples.n)
    delta = estimator.delta
    kinks = (torch.zeros_like(alpha), delta + 0 * alpha, alpha - delta, alpha)
    return any(bool(torch.any((theta - k).abs() < band)) for k in kinks)


@torch.no_grad()
def check_task_gradient(
    n_config=1000,
    n_contact=(3, 4, 5),
    K=100,
    delta=math.radians(15),
    model="pcf",
    mu2=0.1,
    w_t=(0, 0, 1, 0, 0, 0),
    gamma=math.radians(15),
    variant="cos",
    h=1e-5,
    rtol=1e-4,
    band=1e-3,
    seed=0,
):
    """Compare analytic task energy gradients with central differences at random
    contact configurations.

    The approximate cone support mapping has kinks where the angle of a
    per-contact direction from the cone axis equals 0, delta, alpha - delta or
    alpha. Configurations with an angle within `band` of a kink are skipped, as
    central differences do not approximate the gradient there.

    Parameters
    ----------
    n_config : int >= 1 [scalar]
        Number of configurations.

    n_contact : tuple[int]
        Numbers of contacts to cycle through.

    h : float > 0 [scalar]
        Finite difference step.

    rtol : float > 0 [scalar]
        Largest relative error of a passing configuration.

    band : float >= 0 [scalar]
        Distance in radians from a kink below which a configuration is skipped.

    Returns
    -------
    report : dict
        Pass rate and error statistics over the evaluated configurations,
        number of skipped configurations and per-configuration errors.

    """
    assert 1 <= n_config
    assert 0 < h
    assert 0 < rtol
    assert 0 <= band

    energy = TaskOrientedEnergy(w_t, gamma, variant)
    errors = []
    n_skipped = 0
    for i in range(n_config):
        m = n_contact[i % len(n_contact)]
        case = make_case(i, m, seed)
        estimator = GraspWrenchBoundaryEstimation(
            K, delta, True, model, case["mu"], mu2, seed + i
        )
        p, n = case["p"], case["n"]
        if near_kink(estimator, p, n, band):
            n_skipped += 1
            continue
        _, grad_p, grad_n = energy.gradient(estimator, p, n)

        def fn(x):
            return energy(estimator(x[0], x[1]).w, estimator.u).value

        x = torch.stack((p, n))
        fd = central_difference(fn, x, h)
        analytic = torch.stack((grad_p, grad_n))
        error = (analytic - fd).norm() / max(float(fd.norm()), 1e-12)
        errors.append(float(error))

    errors = np.asarray(errors)
    if len(errors) == 0:
        warnings.warn("every configuration lies near a kink")
        nan = float("nan")
        pass_rate, max_error, median_error = nan, nan, nan
    else:
        pass_rate = float((errors <= rtol).mean())
        max_error = float(errors.max())
        median_error = float(np.median(errors))
    return {
        "n_config": n_config,
        "n_skipped": n_skipped,
        "rtol": rtol,
        "h": h,
        "band": band,
        "pass_rate": pass_rate,
        "max_rel_error": max_error,
        "median_rel_error": median_error,
        "errors": errors.tolist(),
    }

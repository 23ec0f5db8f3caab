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
import multiprocessing
import time
import warnings

import numpy as np
import pandas as pd
import torch

from ..core.eps import EpsilonMetric
from ..core.eps import TaskOrientedEpsilonMetric
from ..core.fccheck import ForceClosureSimplexCheck
from ..core.gwb import GraspWrenchBoundaryEstimation
from ..core.mesh import TriangleMesh
from ..core.rle import RelativeLengthError
from ..core.sparsity import Sparsity
from .sampling import make_generator
from .shapes import make_shape
from .utils import get_logger

COLUMNS = [
    "case_id",
    "mesh",
    "m",
    "mu",
    "model",
    "method",
    "delta_deg",
    "K",
    "d_oracle",
    "rle_e2",
    "sp_rad",
    "eps",
    "eps_t",
    "time_ms",
    "fc",
    "note",
]

MESHES = ("sphere", "box", "cylinder")
FRICTIONS = (0.2, 0.3, 0.5, 1.0)
BASELINE_EDGES = (4, 6, 8)

SUITES = {
    # One estimator setting against discretized-cone baselines.
    "tableI": {
        "n_contact": (5,),
        "settings": [(15.0, 10**6)],
        "baseline": True,
    },
    # Sweeps over the approximation angle and the number of samples.
    "tableII": {
        "n_contact": (5,),
        "settings": [(d, 10**5) for d in (0.0, 15.0, 30.0, 45.0)]
        + [(15.0, K) for K in (10**3, 10**4, 10**6)],
        "baseline": False,
    },
    # Wall time against the number of contacts and samples.
    "scaling": {
        "n_contact": (5, 10),
        "settings": [(15.0, 10**5), (15.0, 2 * 10**5)],
        "baseline": False,
    },
}


def make_case(case_id, m=5, seed=0):
    """Draw a random benchmark case.

    Meshes and friction coefficients cycle through fixed lists; contact points
    are sampled uniformly on the surface.

    Parameters
    ----------
    case_id : int >= 0 [scalar]
        Case index.

    m : int >= 1 [scalar]
        Number of contacts.

    seed : int [scalar]
        Base random seed.

    Returns
    -------
    case : dict
        Case description with contact positions `p` and inward normals `n`.

    """
    name = MESHES[case_id % len(MESHES)]
    mu = FRICTIONS[case_id % len(FRICTIONS)]
    mesh = TriangleMesh(*make_shape(name))
    hit = mesh.sample(m, seed=seed * 100003 + case_id)
    return {
        "case_id": case_id,
        "mesh": name,
        "m": m,
        "mu": mu,
        "p": hit.position,
        "n": hit.inward_normal,
    }


def _median_time(fn, repeat=5):
    elapsed = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        elapsed.append(time.perf_counter() - start)
    return 1000 * float(np.median(elapsed))


def _rle(w, p, n, model, mu, n_rle, seed):
    if n_rle < len(w):
        generator = make_generator(seed)
        w = w[torch.randperm(len(w), generator=generator)[:n_rle]]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return 100 * RelativeLengthError(64, model, mu)(w, p, n)
    except ValueError:
        return float("nan")


def bench_case(
    case,
    settings,
    model="pcf",
    baseline=False,
    n_rle=200,
    n_probe=10000,
    timing=True,
    seed=0,
):
    """Measure estimators on one case.

    Parameters
    ----------
    case : dict
        Output of :func:`make_case`.

    settings : list[tuple[float, int]]
        Pairs of the approximation angle in degrees and the number of samples.

    model : ['pcf', 'sfc']
        Contact model.

    baseline : bool [scalar]
        If True, add discretized-cone rows at the first setting.

    n_rle : int >= 1 [scalar]
        Number of samples whose relative length error is measured.

    n_probe : int >= 1 [scalar]
        Number of sparsity probes.

    timing : bool [scalar]
        If False, skip timing so that reports are reproducible byte for byte.

    seed : int [scalar]
        Random seed.

    Returns
    -------
    rows : list[dict]
        Report rows.

    """
    p, n, mu = case["p"], case["n"], case["mu"]
    tws = TaskOrientedEpsilonMetric([0, 0, 1, 0, 0, 0], math.radians(15), seed=seed)
    epsilon = EpsilonMetric(seed=seed)
    check = ForceClosureSimplexCheck(seed=seed)
    sparsity = Sparsity(n_probe, seed=seed)

    runs = [("ours", delta_deg, K, 0) for delta_deg, K in settings]
    if baseline:
        K = settings[0][1]
        runs += [(f"dfc{d}", float("nan"), K, d) for d in BASELINE_EDGES]

    rows = []
    for method, delta_deg, K, n_edge in runs:
        row = {key: case[key] for key in ("case_id", "mesh", "m", "mu")}
        row.update(
            model=model,
            method=method,
            delta_deg=delta_deg,
            K=K,
            d_oracle=64,
            note="",
        )
        if 7 <= case["m"] and 8 <= n_edge:
            row.update(note="skipped")
            rows.append(row)
            continue

        delta = 0 if n_edge else math.radians(delta_deg)
        estimator = GraspWrenchBoundaryEstimation(
            K, delta, True, model, mu, seed=seed, n_edge=n_edge
        )
        with torch.no_grad():
            samples = estimator(p, n)
            w = samples.w
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                row.update(
                    rle_e2=_rle(w, samples.p, n, model, mu, n_rle, seed),
                    sp_rad=sparsity(w),
                    eps=epsilon(w),
                    eps_t=tws(w, samples.u),
                    fc=bool(check(w)),
                )
            if timing:
                row.update(time_ms=_median_time(lambda: estimator(p, n)))
        rows.append(row)
    return rows


def _init_worker():
    torch.set_default_dtype(torch.float64)
    torch.set_num_threads(1)


def _run(job):
    case_id, m, options = job
    case = make_case(case_id, m, options.pop("seed"))
    return bench_case(case, **options)


def run_suite(
    suite="tableI",
    n_case=40,
    K=None,
    model="pcf",
    n_rle=200,
    n_probe=10000,
    timing=True,
    seed=0,
    workers=1,
    verbose=False,
):
    """Run a benchmark suite.

    Parameters
    ----------
    suite : ['tableI', 'tableII', 'scaling']
        Suite name.

    n_case : int >= 1 [scalar]
        Number of cases per number of contacts.

    K : int >= 1 [scalar] or None
        If given, replaces every number of samples of the suite.

    workers : int >= 1 [scalar]
        Number of worker processes. Rows do not depend on it.

    verbose : bool [scalar]
        If True, log progress.

    Returns
    -------
    df : pandas.DataFrame
        Report sorted by case, method and setting.

    """
    if suite not in SUITES:
        raise ValueError(f"suite {suite} is not supported")
    assert 1 <= n_case
    assert 1 <= workers

    config = SUITES[suite]
    settings = [(d, k if K is None else K) for d, k in config["settings"]]
    settings = list(dict.fromkeys(settings))
    options = dict(
        settings=settings,
        model=model,
        baseline=config["baseline"],
        n_rle=n_rle,
        n_probe=n_probe,
        timing=timing,
    )
    jobs = [
        (i, m, dict(options, seed=seed))
        for m in config["n_contact"]
        for i in range(n_case)
    ]

    if verbose:
        logger = get_logger("bench")
        logger.info(f"{suite}: {len(jobs)} cases on {workers} worker(s)")

    rows = []
    if workers == 1:
        for j, job in enumerate(jobs):
            rows += _run(job)
            if verbose:
                logger.info(f"case {j + 1}/{len(jobs)} done")
    else:
        context = multiprocessing.get_context("spawn")
        with context.Pool(workers, initializer=_init_worker) as pool:
            for j, result in enumerate(pool.imap(_run, jobs)):
                rows += result
                if verbose:
                    logger.info(f"case {j + 1}/{len(jobs)} done")

    df = pd.DataFrame(rows, columns=COLUMNS)
    df["fc"] = df["fc"].astype("boolean")
    return df


def summarize(df):
    """Average a report over cases.

    Parameters
    ----------
    df : pandas.DataFrame
        Output of :func:`run_suite`.

    Returns
    -------
    out : pandas.DataFrame
        Mean RLE, sparsity and time per method and setting, and the rate of force
        closure.

    """
    df = df[df["note"] != "skipped"].copy()
    df["fc"] = df["fc"].astype(float)
    keys = ["m", "model", "method", "delta_deg", "K"]
    out = df.groupby(keys, dropna=False, sort=True)[
        ["rle_e2", "sp_rad", "time_ms", "fc"]
    ].mean()
    return out.reset_index()

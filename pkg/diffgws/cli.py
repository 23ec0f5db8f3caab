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

import argparse
import math
import multiprocessing
import os
import sys
import warnings

import numpy as np
import pandas as pd
import torch

from .core.eps import EpsilonMetric
from .core.eps import TaskOrientedEpsilonMetric
from .core.fccheck import ForceClosureSimplexCheck
from .core.gwb import GraspWrenchBoundaryEstimation
from .core.mesh import TriangleMesh
from .core.ray import BoundaryRay
from .core.rle import RelativeLengthError
from .core.sparsity import Sparsity
from .core.synth import TaskOrientedGraspSynthesis
from .core.synth import apply_variant
from .misc.bench import run_suite
from .misc.bench import summarize
from .misc.config import ConfigError
from .misc.config import apply_overrides
from .misc.config import load_task_config
from .misc.config import parse_task_config
from .misc.gradcheck import check_task_gradient
from .misc.rig import load_rig
from .misc.shapes import make_shape
from .misc.utils import _rows
from .misc.utils import atomic_write
from .misc.utils import config_hash
from .misc.utils import get_logger
from .misc.utils import make_meta
from .misc.utils import read_json
from .misc.utils import write_json
from .misc.utils import write_obj
from .misc.utils import write_ply
from .version import __version__

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class NumericalError(RuntimeError):
    pass


def _config(args):
    if args.config is None:
        raise ConfigError("--config", "required by this command")
    config = load_task_config(args.config)
    return apply_overrides(config, args.K, args.delta_deg, args.seed)


def _output(args, config, name):
    if args.out is not None:
        return args.out
    directory = "out" if config is None else config.output.directory
    return os.path.join(directory, name)


def _contacts(config, command):
    if config.contacts is None:
        raise ConfigError("contacts", f"required by {command}")
    p = torch.tensor([c.p for c in config.contacts])
    n = torch.tensor([c.n for c in config.contacts])
    return p, n


def _finite(value, name):
    if not math.isfinite(value):
        raise NumericalError(f"{name} is not finite")
    return value


def _write_csv(filename, df, meta):
    df = df.copy()
    for key, value in meta.items():
        df[key] = value
    atomic_write(filename, df.to_csv(index=False, float_format="%.17g"))


def build_mesh(config):
    """Return the object mesh of a task configuration."""
    if config.path is not None:
        return TriangleMesh.from_obj(config.path)
    return TriangleMesh(*make_shape(config.shape, config.scale))


def cmd_estimate(args, logger):
    config = _config(args)
    p, n = _contacts(config, "estimate")
    estimator = GraspWrenchBoundaryEstimation(
        config.estimator.K,
        config.delta,
        config.estimator.cpn,
        config.contact_model,
        config.mu,
        config.mu2,
        config.seed,
    )
    samples = estimator(p, n)
    eps = _finite(EpsilonMetric(seed=config.seed)(samples.w), "eps")
    eps_t = TaskOrientedEpsilonMetric(
        config.tws.w_t, config.gamma, seed=config.seed
    )(samples.w, samples.u)
    logger.info(f"K={config.estimator.K}: eps={eps:g}, eps_t={eps_t:g}")

    out = {
        "u": _rows(samples.u),
        "w": _rows(samples.w),
        "p": _rows(samples.p),
        "n": _rows(samples.n),
        "cpn": {
            "enabled": config.estimator.cpn,
            "center": _rows(samples.cpn_center),
            "scale": float(samples.cpn_scale),
            "degenerate": bool(samples.degenerate),
        },
        "eps": eps,
        "eps_t": None if math.isnan(eps_t) else eps_t,
        "meta": make_meta(
            config.to_dict(),
            config.seed,
            command="estimate",
            K=config.estimator.K,
            delta_deg=config.estimator.delta_deg,
            model=config.contact_model,
            mu=config.mu,
            mu2=config.mu2,
            w_t=config.tws.w_t,
            gamma_deg=config.tws.gamma_deg,
        ),
    }
    filename = _output(args, config, "boundary.json")
    write_json(filename, out)
    logger.info(f"wrote {filename}")


def _read_boundary(filename):
    obj = read_json(filename)
    for key in ("u", "w", "p", "n", "meta"):
        if key not in obj:
            raise ConfigError(key, f"missing in {filename}")
    w = torch.tensor(obj["w"])
    u = torch.tensor(obj["u"])
    p = torch.tensor(obj["p"])
    n = torch.tensor(obj["n"])
    return obj, u, w, p, n


def cmd_oracle(args, logger):
    if args.boundary is None:
        raise ConfigError("--boundary", "required by oracle")
    obj, _, w, p, n = _read_boundary(args.boundary)
    meta = obj["meta"]
    ray = BoundaryRay(args.n_edge, meta["model"], meta["mu"], meta["mu2"])

    index = np.arange(len(w))[: args.limit]
    verdicts = []
    for k in index:
        if float(w[k].norm()) <= 1e-9:
            verdicts.append({"index": int(k), "status": "zero"})
            continue
        result = ray(w[k], p, n)
        verdicts.append(
            {
                "index": int(k),
                "scale": result.scale if math.isfinite(result.scale) else None,
                "status": result.status,
                "dual_bound": result.dual_bound,
                "n_iter": result.n_iter,
            }
        )
    scales = np.asarray([v["scale"] for v in verdicts if v["status"] == "optimal"])
    if len(scales) == 0:
        raise NumericalError("no boundary sample lies inside the oracle")
    summary = {
        "n_sample": len(verdicts),
        "n_optimal": int(len(scales)),
        "mean_scale": float(scales.mean()),
        "min_scale": float(scales.min()),
        "max_scale": float(scales.max()),
    }
    logger.info(
        f"{summary['n_optimal']}/{summary['n_sample']} optimal, "
        f"mean scale {summary['mean_scale']:.6f}"
    )
    out = {
        "summary": summary,
        "verdicts": verdicts,
        "meta": make_meta(
            meta,
            meta["seed"],
            command="oracle",
            n_edge=args.n_edge,
            source_hash=meta["config_hash"],
        ),
    }
    filename = _output(args, None, "oracle.json")
    write_json(filename, out)
    logger.info(f"wrote {filename}")


def cmd_metrics(args, logger):
    if args.boundary is None:
        raise ConfigError("--boundary", "required by metrics")
    obj, u, w, p, n = _read_boundary(args.boundary)
    meta = obj["meta"]
    seed = meta["seed"]
    gamma = math.radians(meta["gamma_deg"])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rle = RelativeLengthError(args.n_edge, meta["model"], meta["mu"], meta["mu2"])
        try:
            rle_e2 = 100 * rle(w[: args.n_rle], p, n)
        except ValueError:
            rle_e2 = float("nan")
        eps_t = TaskOrientedEpsilonMetric(meta["w_t"], gamma, seed=seed)(w, u)
        row = {
            "K": meta["K"],
            "delta_deg": meta["delta_deg"],
            "model": meta["model"],
            "eps": EpsilonMetric(seed=seed)(w),
            "eps_t": eps_t,
            "sp_rad": Sparsity(args.n_probe, seed=seed)(w),
            "rle_e2": rle_e2,
            "fc": ForceClosureSimplexCheck(seed=seed)(w),
        }
    logger.info(", ".join(f"{k}={v}" for k, v in row.items()))
    filename = _output(args, None, "metrics.csv")
    _write_csv(
        filename,
        pd.DataFrame([row]),
        {"config_hash": meta["config_hash"], "seed": seed},
    )
    logger.info(f"wrote {filename}")


def _synthesize(job):
    obj, seed, filename, points = job
    torch.set_default_dtype(torch.float64)
    config = parse_task_config(obj)
    mesh = build_mesh(config.mesh)
    rig = load_rig(config.rig.name)
    opt = config.optimizer
    kwargs = dict(
        gamma=config.gamma,
        K=config.estimator.K,
        delta=config.delta,
        cpn=config.estimator.cpn,
        model=config.contact_model,
        mu=config.mu,
        mu2=config.mu2,
        variant=opt.energy,
        weights=opt.weights,
        n_iter=opt.n_iter,
        step_size=opt.step_size,
        shrink=opt.shrink,
        max_backtrack=opt.max_backtrack,
        patience=opt.patience,
        fd_step=opt.fd_step,
        seed=seed,
        contact_threshold=opt.contact_threshold,
    )
    kwargs = apply_variant(opt.variant, kwargs)
    synth = TaskOrientedGraspSynthesis(mesh, rig, config.tws.w_t, **kwargs)
    q0 = synth.initial_configuration(
        config.rig.translation,
        config.rig.rotation,
        config.rig.perturbation,
        seed=seed,
    )
    result = synth.optimize(q0)

    out = {
        "q": _rows(result.q),
        "trace": result.trace,
        "x": _rows(result.x),
        "p": _rows(result.p),
        "n": _rows(result.n),
        "in_contact": _rows(result.in_contact),
        "eps_t": None if math.isnan(result.eps_t) else result.eps_t,
        "max_penetration": result.max_penetration,
        "coverage": result.coverage,
        "success": result.success,
        "early_stop": result.early_stop,
        "n_iter": result.n_iter,
        "meta": make_meta(obj, seed, command="synth", variant=opt.variant),
    }
    write_json(filename, out)
    base = os.path.splitext(filename)[0]
    if points == "ply":
        write_ply(base + ".ply", result.p, result.n)
    else:
        write_obj(base + ".obj", result.p)
    return {k: out[k] for k in ("eps_t", "coverage", "success", "max_penetration")}


def cmd_synth(args, logger):
    config = _config(args)
    if config.rig is None:
        raise ConfigError("rig", "required by synth")
    if config.mesh.path is not None and not os.path.exists(config.mesh.path):
        raise ConfigError("mesh.path", f"{config.mesh.path} does not exist")
    load_rig(config.rig.name)

    obj = config.to_dict()
    if args.batch == 1:
        filename = _output(args, config, "synth.json")
        jobs = [(obj, config.seed, filename, config.output.points)]
    else:
        directory = args.out or config.output.directory
        jobs = []
        for seed in range(config.seed, config.seed + args.batch):
            filename = os.path.join(directory, f"synth-{seed}.json")
            jobs.append((obj, seed, filename, config.output.points))

    workers = int(os.environ.get("DIFFGWS_WORKERS", "1"))
    if workers <= 1 or len(jobs) == 1:
        summaries = [_synthesize(job) for job in jobs]
    else:
        context = multiprocessing.get_context("spawn")
        with context.Pool(min(workers, len(jobs))) as pool:
            summaries = pool.map(_synthesize, jobs)

    for job, summary in zip(jobs, summaries):
        logger.info(
            f"seed {job[1]}: eps_t={summary['eps_t']}, "
            f"coverage={summary['coverage']}, success={summary['success']}"
        )
    if 1 < args.batch:
        rate = float(np.mean([s["success"] for s in summaries]))
        filename = os.path.join(directory, "summary.json")
        write_json(
            filename,
            {
                "success_rate": rate,
                "runs": [dict(s, seed=job[1]) for job, s in zip(jobs, summaries)],
                "meta": make_meta(obj, config.seed, command="synth", batch=args.batch),
            },
        )
        logger.info(f"success rate {rate:.3f}")


def cmd_bench(args, logger):
    workers = int(os.environ.get("DIFFGWS_WORKERS", "1"))
    options = dict(
        suite=args.suite,
        n_case=args.n_case,
        K=args.K,
        model=args.model,
        n_rle=args.n_rle,
        n_probe=args.n_probe,
        timing=not args.no_timing,
        seed=0 if args.seed is None else args.seed,
    )
    df = run_suite(workers=workers, verbose=args.verbose, **options)
    meta = {"config_hash": config_hash(options), "seed": options["seed"]}
    filename = _output(args, None, f"{args.suite}.csv")
    _write_csv(filename, df, meta)
    if args.summary:
        base = os.path.splitext(filename)[0]
        _write_csv(base + "-summary.csv", summarize(df), meta)
    logger.info(f"wrote {filename}")


def cmd_gradcheck(args, logger):
    kwargs = {}
    if args.config is not None:
        config = _config(args)
        kwargs = dict(
            K=config.estimator.K,
            delta=config.delta,
            model=config.contact_model,
            w_t=config.tws.w_t,
            gamma=config.gamma,
            variant=config.optimizer.energy,
            seed=config.seed,
        )
        if not isinstance(config.mu2, list):
            kwargs["mu2"] = config.mu2
    else:
        if args.K is not None:
            kwargs["K"] = args.K
        if args.seed is not None:
            kwargs["seed"] = args.seed
    report = check_task_gradient(args.n_config, h=args.h, rtol=args.rtol, **kwargs)
    report["passed"] = args.min_pass_rate <= report["pass_rate"]
    report["meta"] = make_meta(kwargs, kwargs.get("seed", 0), command="gradcheck")
    logger.info(
        f"pass rate {report['pass_rate']:.3f}, "
        f"max relative error {report['max_rel_error']:.3g}"
    )
    write_json(_output(args, None, "gradcheck.json"), report)
    if not report["passed"]:
        raise NumericalError("gradient check failed")


COMMANDS = {
    "estimate": cmd_estimate,
    "oracle": cmd_oracle,
    "metrics": cmd_metrics,
    "synth": cmd_synth,
    "bench": cmd_bench,
    "gradcheck": cmd_gradcheck,
}


def get_parser():
    parser = argparse.ArgumentParser(
        prog="diffgws",
        description="Grasp wrench space estimation and task-oriented grasp synthesis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--config", help="task configuration JSON")
    parser.add_argument("--K", type=int, help="number of boundary samples")
    parser.add_argument("--delta-deg", type=float, help="approximation angle")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--out", help="output file (or directory with --batch)")
    parser.add_argument("--boundary", help="boundary JSON written by estimate")
    parser.add_argument("--n-edge", type=int, default=64, help="oracle cone edges")
    parser.add_argument("--limit", type=int, default=1000, help="oracle samples")
    parser.add_argument("--n-rle", type=int, default=200)
    parser.add_argument("--n-probe", type=int, default=10000)
    parser.add_argument("--batch", type=int, default=1, help="number of seeds")
    parser.add_argument(
        "--suite", default="tableI", choices=["tableI", "tableII", "scaling"]
    )
    parser.add_argument("--n-case", type=int, default=40)
    parser.add_argument("--model", default="pcf", choices=["pcf", "sfc"])
    parser.add_argument("--no-timing", action="store_true")
    parser.add_argument("--summary", action="store_true")
    parser.add_argument("--n-config", type=int, default=1000)
    parser.add_argument("--h", type=float, default=1e-5)
    parser.add_argument("--rtol", type=float, default=1e-4)
    parser.add_argument("--min-pass-rate", type=float, default=0.95)
    parser.add_argument("--quiet", dest="verbose", action="store_false")
    return parser


def main(argv=None):
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID

    logger = get_logger("diffgws", args.verbose)
    torch.set_default_dtype(torch.float64)
    try:
        if args.batch < 1:
            raise ConfigError("--batch", "must be positive")
        if args.K is not None and args.K < 1:
            raise ConfigError("--K", "must be positive")
        COMMANDS[args.command](args, logger)
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_INVALID
    except (RuntimeError, FloatingPointError) as e:
        logger.error(str(e))
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line front end.

Subcommands bind a flat structured-text config (``section.key = value``
lines, ``#`` comments, unknown keys rejected) or a named preset to the
library:

* ``simulate``        emit maxima / comparison / difference paths as CSV
* ``metric``          distance between two step-path CSV files, JSON line
* ``converge``        KS marginal convergence table over the n grid
* ``counterexample``  oscillation-frequency experiment table
* ``limit``           sampled limit paths and closed-form CDF tables

Presets: ``frechet-ma1`` (two-coordinate unit-Frechet moving average with
one-step lag and the component-half normalization) and ``pareto-iid``
(scalar Pareto, identity coefficients).  Every run echoes its resolved
config.  Exit codes: 2 for config/input errors, 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import metrics
from .cadlag import StepPath
from .harness import (
    ExperimentPlan,
    emit,
    frechet_ma1_a_n,
    ks_rows,
    run_counterexample,
    run_coupling_sweep,
    run_ks_marginal,
)
from .innovations import InnovationModel, sample_sequence, sequence_to_csv
from .limitproc import LimitSpec, limit_marginal_cdf, sample_limit_path
from .linproc import FiniteDeterministic, InfiniteGeometric
from .maxima import build_maxima_pair, build_vn
from .seeding import INNOVATION_STREAM, child_sequence

__all__ = ["Config", "ConfigError", "parse_config", "preset", "config_to_text", "main"]

ENV_OUT = "TAILMAX_OUT"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    innovation_model: InnovationModel
    coefficient_model: object
    n_grid: tuple = (1000,)
    replications: int = 200
    seed: int = 1
    t: float = 1.0
    component: int = 1  # 1-based in config and output
    delta: float = 0.25
    epsilon: float = 8.0
    norm_mode: str = "norm"
    target_mass: float = 1.0
    jobs: int = 1
    out_dir: str = "."

    def plan(self) -> ExperimentPlan:
        return ExperimentPlan(
            innovation_model=self.innovation_model,
            coefficient_model=self.coefficient_model,
            n_grid=tuple(self.n_grid),
            replications=self.replications,
            master_seed=self.seed,
            norm_mode=self.norm_mode,
            target_mass=self.target_mass,
            jobs=self.jobs,
        )


_KEYS = {
    "innovation.dim": int,
    "innovation.alpha": float,
    "innovation.marginal": str,
    "innovation.scale": float,
    "innovation.tail_balance_p": float,
    "innovation.dependence": str,
    "innovation.m": int,
    "innovation.noise_scale": float,
    "coefficient.kind": str,
    "coefficient.matrices": str,
    "coefficient.rho": float,
    "coefficient.base": str,
    "coefficient.truncation_order": int,
    "experiment.n_grid": str,
    "experiment.replications": int,
    "experiment.seed": int,
    "experiment.t": float,
    "experiment.component": int,
    "experiment.delta": float,
    "experiment.epsilon": float,
    "experiment.norm_mode": str,
    "experiment.target_mass": float,
    "experiment.jobs": int,
    "output.dir": str,
}


def _parse_matrix_list(text: str, dim: int, key: str) -> np.ndarray:
    mats = []
    for chunk in text.split(";"):
        entries = [float(v) for v in chunk.replace(",", " ").split()]
        if len(entries) != dim * dim:
            raise ConfigError(f"{key}: each matrix needs {dim * dim} row-major entries")
        mats.append(np.array(entries).reshape(dim, dim))
    return np.array(mats)


def parse_config(text: str) -> Config:
    """Parse flat ``section.key = value`` text into a Config."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        if key in raw:
            raise ConfigError(f"duplicate config key {key!r}")
        try:
            raw[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from exc
    return _build_config(raw)


def _build_config(raw: dict) -> Config:
    dim = raw.get("innovation.dim", 1)
    try:
        innovation = InnovationModel(
            dim=dim,
            alpha=raw.get("innovation.alpha", 1.0),
            marginal=raw.get("innovation.marginal", "unit-frechet"),
            scale=raw.get("innovation.scale", 1.0),
            tail_balance_p=raw.get("innovation.tail_balance_p", 1.0),
            dependence=raw.get("innovation.dependence", "iid"),
            m=raw.get("innovation.m", 1),
            noise_scale=raw.get("innovation.noise_scale", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"innovation.*: {exc}") from exc

    kind = raw.get("coefficient.kind", "finite-deterministic")
    try:
        if kind == "finite-deterministic":
            mats = _parse_matrix_list(raw.get("coefficient.matrices", "1"), dim, "coefficient.matrices")
            coefficient = FiniteDeterministic(mats)
        elif kind == "infinite-geometric":
            if "coefficient.rho" not in raw:
                raise ConfigError("coefficient.rho is required for infinite-geometric")
            base = _parse_matrix_list(raw.get("coefficient.base", "1"), dim, "coefficient.base")[0]
            coefficient = InfiniteGeometric(
                raw["coefficient.rho"], base, raw.get("coefficient.truncation_order", 20)
            )
        else:
            raise ConfigError(f"coefficient.kind: unsupported kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(f"coefficient.*: {exc}") from exc

    n_grid = tuple(int(v) for v in str(raw.get("experiment.n_grid", "1000")).split())
    cfg = Config(
        innovation_model=innovation,
        coefficient_model=coefficient,
        n_grid=n_grid,
        replications=raw.get("experiment.replications", 200),
        seed=raw.get("experiment.seed", 1),
        t=raw.get("experiment.t", 1.0),
        component=raw.get("experiment.component", 1),
        delta=raw.get("experiment.delta", 0.25),
        epsilon=raw.get("experiment.epsilon", 8.0),
        norm_mode=raw.get("experiment.norm_mode", "norm"),
        target_mass=raw.get("experiment.target_mass", 1.0),
        jobs=raw.get("experiment.jobs", 1),
        out_dir=raw.get("output.dir", os.environ.get(ENV_OUT, ".")),
    )
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: Config):
    if cfg.norm_mode not in ("norm", "component-half"):
        raise ConfigError("experiment.norm_mode: must be 'norm' or 'component-half'")
    if cfg.norm_mode == "component-half" and cfg.innovation_model.marginal != "unit-frechet":
        raise ConfigError("experiment.norm_mode: component-half applies to the unit-frechet marginal")
    if not (1 <= cfg.component <= cfg.innovation_model.dim):
        raise ConfigError("experiment.component: out of range for innovation.dim")
    if cfg.replications < 1:
        raise ConfigError("experiment.replications: must be >= 1")
    if any(n < 1 for n in cfg.n_grid) or list(cfg.n_grid) != sorted(cfg.n_grid):
        raise ConfigError("experiment.n_grid: must be increasing positive integers")
    if cfg.t <= 0 or cfg.t > 1:
        raise ConfigError("experiment.t: must lie in (0, 1]")
    if cfg.epsilon <= 0:
        raise ConfigError("experiment.epsilon: must be positive")
    if cfg.jobs < 1:
        raise ConfigError("experiment.jobs: must be >= 1")


def preset(name: str) -> Config:
    """Named scenario configs shipping with the package."""
    if name == "frechet-ma1":
        return Config(
            innovation_model=InnovationModel(dim=2, alpha=1.0, marginal="unit-frechet"),
            coefficient_model=FiniteDeterministic(
                [[[1.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]]]
            ),
            n_grid=(1000, 10000, 100000),
            replications=200,
            seed=20240914,
            norm_mode="component-half",
            epsilon=8.0,
        )
    if name == "pareto-iid":
        return Config(
            innovation_model=InnovationModel(dim=1, alpha=1.0, marginal="pareto"),
            coefficient_model=FiniteDeterministic([[[1.0]]]),
            n_grid=(1000, 10000, 100000),
            replications=1000,
            seed=20240915,
        )
    raise ConfigError(f"unknown preset {name!r}")


def config_to_text(cfg: Config) -> str:
    """Flat-text echo of a resolved config (round-trips through the parser)."""
    im = cfg.innovation_model
    lines = [
        f"innovation.dim = {im.dim}",
        f"innovation.alpha = {im.alpha}",
        f"innovation.marginal = {im.marginal}",
        f"innovation.scale = {im.scale}",
        f"innovation.tail_balance_p = {im.tail_balance_p}",
        f"innovation.dependence = {im.dependence}",
        f"innovation.m = {im.m}",
        f"innovation.noise_scale = {im.noise_scale}",
    ]
    cm = cfg.coefficient_model
    if isinstance(cm, FiniteDeterministic):
        mats = " ; ".join(" ".join(format(v, "g") for v in m.ravel()) for m in cm.matrices)
        lines += ["coefficient.kind = finite-deterministic", f"coefficient.matrices = {mats}"]
    elif isinstance(cm, InfiniteGeometric):
        base = " ".join(format(v, "g") for v in cm.base.ravel())
        lines += [
            "coefficient.kind = infinite-geometric",
            f"coefficient.rho = {cm.rho}",
            f"coefficient.base = {base}",
            f"coefficient.truncation_order = {cm.truncation_order}",
        ]
    else:
        lines += [f"# coefficient model: {cm!r}"]
    lines += [
        f"experiment.n_grid = {' '.join(str(n) for n in cfg.n_grid)}",
        f"experiment.replications = {cfg.replications}",
        f"experiment.seed = {cfg.seed}",
        f"experiment.t = {cfg.t}",
        f"experiment.component = {cfg.component}",
        f"experiment.delta = {cfg.delta}",
        f"experiment.epsilon = {cfg.epsilon}",
        f"experiment.norm_mode = {cfg.norm_mode}",
        f"experiment.target_mass = {cfg.target_mass}",
        f"experiment.jobs = {cfg.jobs}",
        f"output.dir = {cfg.out_dir}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _load_config(args) -> Config:
    if getattr(args, "preset", None):
        cfg = preset(args.preset)
    elif getattr(args, "config", None):
        try:
            text = open(args.config).read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = parse_config(text)
    else:
        raise ConfigError("provide --config FILE or --preset NAME")
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "n", None) is not None:
        overrides["n_grid"] = (args.n,)
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "out", None) is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "eps", None) is not None:
        overrides["epsilon"] = args.eps
    if getattr(args, "r", None) is not None:
        overrides["replications"] = args.r
    if getattr(args, "t", None) is not None:
        overrides["t"] = args.t
    if getattr(args, "k", None) is not None:
        overrides["component"] = args.k
    if overrides:
        cfg = replace(cfg, **overrides)
        _validate_config(cfg)
    return cfg


def _echo(cfg: Config):
    sys.stdout.write("# resolved config\n")
    sys.stdout.write(config_to_text(cfg))


def _an_for(cfg: Config, n: int):
    return frechet_ma1_a_n(n) if cfg.norm_mode == "component-half" else None


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    _echo(cfg)
    n = cfg.n_grid[0]
    out = args.out or cfg.out_dir
    os.makedirs(out, exist_ok=True)
    pair = build_maxima_pair(
        cfg.innovation_model,
        cfg.coefficient_model,
        n,
        cfg.seed,
        target_mass=cfg.target_mass,
        a_n=_an_for(cfg, n),
    )
    which = {"mn", "wn", "vn"} if args.emit == "all" else {args.emit}
    files = {}
    if "mn" in which:
        files["mn"] = pair.mn
    if "wn" in which:
        files["wn"] = pair.wn
    if "vn" in which:
        if pair.mn.dim != 2:
            raise ConfigError("vn needs a 2-d model")
        files["vn"] = build_vn(pair.mn)
    for name, path in files.items():
        dest = os.path.join(out, f"{name}.csv")
        with open(dest, "w") as fh:
            fh.write(path.to_csv())
        print(f"wrote {dest}")
    if args.dump_innovations:
        inner = int(child_sequence(cfg.seed, INNOVATION_STREAM).generate_state(1, np.uint64)[0])
        order = getattr(cfg.coefficient_model, "order", 0)
        z = sample_sequence(cfg.innovation_model, n + order, inner)
        with open(args.dump_innovations, "w") as fh:
            fh.write(sequence_to_csv(z))
        print(f"wrote {args.dump_innovations}")
    return 0


def _cmd_metric(args) -> int:
    try:
        a = StepPath.from_csv(open(args.file_a).read())
        b = StepPath.from_csv(open(args.file_b).read())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot parse step-path CSV: {exc}") from exc
    try:
        if args.metric == "m2":
            res = metrics.d_m2_scalar(a, b)
        elif args.metric == "m1":
            res = metrics.d_m1_monotone(a, b)
        elif args.metric == "dp":
            res = metrics.d_p(a, b)
        elif args.metric == "uniform":
            res = metrics.d_uniform(a, b)
        else:
            if args.delta is None:
                raise ConfigError("--metric osc requires --delta")
            val = metrics.oscillation(a, args.delta)
            print(json.dumps({"metric": "osc", "delta": args.delta, "value": val}))
            return 0
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(
        json.dumps(
            {
                "metric": args.metric,
                "value": res.value,
                "method": res.method,
                "tolerance": res.tolerance,
            }
        )
    )
    return 0


def _cmd_converge(args) -> int:
    cfg = _load_config(args)
    _echo(cfg)
    plan = cfg.plan()
    reports = run_ks_marginal(plan, t=cfg.t, component=cfg.component - 1)
    paths = emit({"ks": ks_rows(reports)}, args.out or cfg.out_dir, plan)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_coupling(args) -> int:
    cfg = _load_config(args)
    _echo(cfg)
    plan = cfg.plan()
    rows = run_coupling_sweep(plan, delta=cfg.delta)
    paths = emit({"coupling": rows}, args.out or cfg.out_dir, plan)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_counterexample(args) -> int:
    cfg = _load_config(args)
    _echo(cfg)
    plan = cfg.plan()
    rows = run_counterexample(plan, epsilon=cfg.epsilon)
    if rows and rows[0]["floor_warning"]:
        print("warning: analytic floor is non-positive at this epsilon", file=sys.stderr)
    paths = emit({"counterexample": rows}, args.out or cfg.out_dir, plan)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_limit(args) -> int:
    cfg = _load_config(args)
    _echo(cfg)
    out = args.out or cfg.out_dir
    os.makedirs(out, exist_ok=True)
    spec = LimitSpec.from_models(cfg.innovation_model, cfg.coefficient_model)
    written = []
    for i in range(args.samples):
        path = sample_limit_path(spec, args.floor, cfg.seed + i)
        dest = os.path.join(out, f"limit_path_{i:04d}.csv")
        with open(dest, "w") as fh:
            fh.write(path.to_csv())
        written.append(dest)
    if args.cdf_grid:
        try:
            lo, hi, count = args.cdf_grid.split(":")
            grid = np.linspace(float(lo), float(hi), int(count))
        except ValueError as exc:
            raise ConfigError(f"--cdf-grid must be lo:hi:count ({exc})") from exc
        if np.any(grid <= 0):
            raise ConfigError("--cdf-grid values must be positive")
        cdf = limit_marginal_cdf(spec, cfg.component - 1, cfg.t, grid)
        dest = os.path.join(out, "cdf.csv")
        with open(dest, "w") as fh:
            fh.write("x,cdf\n")
            for x, f in zip(grid, cdf):
                fh.write(f"{format(x, '.17g')},{format(f, '.17g')}\n")
        written.append(dest)
    for dest in written:
        print(f"wrote {dest}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tailmax", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, preset_ok=True):
        p.add_argument("--config", help="flat structured-text config file")
        if preset_ok:
            p.add_argument("--preset", choices=["frechet-ma1", "pareto-iid"], help="named scenario")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--out", help=f"output directory (default: config or ${ENV_OUT})")
        p.add_argument("--jobs", type=int, help="worker processes for replications")
        p.add_argument("--r", type=int, help="replication count override")

    p = sub.add_parser("simulate", help="emit maxima/comparison/difference paths as CSV")
    common(p)
    p.add_argument("--n", type=int, help="sample size (default: first grid entry)")
    p.add_argument("--emit", choices=["mn", "wn", "vn", "all"], default="mn")
    p.add_argument("--dump-innovations", help="also write the innovation window CSV here")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("metric", help="distance between two step-path CSV files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--metric", choices=["m2", "m1", "dp", "uniform", "osc"], required=True)
    p.add_argument("--delta", type=float, help="window width for --metric osc")
    p.set_defaults(fn=_cmd_metric)

    p = sub.add_parser("converge", help="KS marginal convergence table over the n grid")
    common(p)
    p.add_argument("--t", type=float, help="evaluation time (default 1.0)")
    p.add_argument("--k", type=int, help="component, 1-based")
    p.set_defaults(fn=_cmd_converge)

    p = sub.add_parser("coupling", help="coupled-distance sweep over the n grid")
    common(p)
    p.set_defaults(fn=_cmd_coupling)

    p = sub.add_parser("counterexample", help="oscillation-frequency experiment")
    common(p)
    p.add_argument("--eps", type=float, help="exceedance level (default 8)")
    p.set_defaults(fn=_cmd_counterexample)

    p = sub.add_parser("limit", help="limit-process samples and CDF tables")
    common(p)
    p.add_argument("--cdf-grid", help="closed-form CDF table grid, lo:hi:count")
    p.add_argument("--samples", type=int, default=1, help="number of sampled limit paths")
    p.add_argument("--floor", type=float, default=1e-3, help="radial truncation floor")
    p.set_defaults(fn=_cmd_limit)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure contract
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Monte Carlo experiment runner.

Three experiment families, all replication-parallel and deterministic
under a fixed master seed:

* marginal goodness of fit: KS distance between replicated end values of
  the maxima path and the closed-form (or sampled) limit marginal;
* coupling sweeps: distribution of the product-metric distance between the
  maxima path and its coefficient-extreme comparison path across n;
* the oscillation experiment on the two-coordinate Frechet moving average,
  whose coordinate difference keeps a non-vanishing three-point
  oscillation frequency while each coordinate still converges.

Replication r of an experiment uses the child generator
``(master seed, stream, r)`` from :mod:`.seeding`; results are reduced in
replication order, so the reported statistics are independent of the
parallelism degree or completion order.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from . import metrics
from .innovations import InnovationModel, sample_sequence
from .limitproc import LimitSpec, limit_marginal_cdf, sample_limit_path
from .maxima import build_maxima_pair, build_vn
from .seeding import INNOVATION_STREAM, child_sequence

__all__ = [
    "ExperimentPlan",
    "KSReport",
    "ks_statistic",
    "ks_two_sample",
    "run_ks_marginal",
    "run_coupling_sweep",
    "run_counterexample",
    "frechet_ma1_a_n",
    "emit",
]

# Asymptotic KS critical constants: statistic * sqrt(R) quantiles.
KS_CRIT_5PCT = 1.3581
KS_CRIT_1PCT = 1.6276


@dataclass(frozen=True)
class ExperimentPlan:
    """A full experiment: models, n grid, replication budget, master seed."""

    innovation_model: InnovationModel
    coefficient_model: object
    n_grid: tuple
    replications: int
    master_seed: int
    statistics: tuple = ()
    norm_mode: str = "norm"  # "norm" or "component-half"
    target_mass: float = 1.0
    jobs: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if list(self.n_grid) != sorted(self.n_grid):
            raise ValueError("n grid must be increasing")
        if self.norm_mode not in ("norm", "component-half"):
            raise ValueError("norm_mode must be 'norm' or 'component-half'")

    def a_n(self, n: int) -> float | None:
        if self.norm_mode == "component-half":
            return frechet_ma1_a_n(n)
        return None  # closed-form norm normalizer inside the builders

    def echo(self) -> dict:
        d = asdict(self)
        d["innovation_model"] = asdict(self.innovation_model)
        d["coefficient_model"] = repr(self.coefficient_model)
        return d


def frechet_ma1_a_n(n: int) -> float:
    """Scaling solving ``n * P(T > a_n) = 1/2`` for a unit-Frechet marginal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return -1.0 / np.log1p(-1.0 / (2.0 * n))


@dataclass(frozen=True)
class KSReport:
    """One KS comparison against a reference CDF."""

    statistic: float
    sample_size: int
    reference: str
    crit_1pct: float
    crit_5pct: float
    n: int
    t: float
    component: int

    def __post_init__(self):
        if not (0.0 <= self.statistic <= 1.0):
            raise ValueError("KS statistic must lie in [0, 1]")

    @property
    def pass_1pct(self) -> bool:
        return self.statistic <= self.crit_1pct

    @property
    def pass_5pct(self) -> bool:
        return self.statistic <= self.crit_5pct


def ks_statistic(sample: np.ndarray, cdf) -> float:
    """One-sample KS distance sup |F_hat - F| against a callable CDF."""
    x = np.sort(np.asarray(sample, dtype=float))
    r = len(x)
    f = np.asarray(cdf(x), dtype=float)
    upper = np.abs(np.arange(1, r + 1) / r - f)
    lower = np.abs(f - np.arange(0, r) / r)
    return float(np.maximum(upper, lower).max())


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample KS distance between empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate((a, b))
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.abs(fa - fb).max())


# ---------------------------------------------------------------------------
# Replication engines
# ---------------------------------------------------------------------------

_WORK_PLAN = None  # per-process plan cache for the process pool


def _rep_seed(plan: ExperimentPlan, stream: int, index: int) -> int:
    return int(child_sequence(plan.master_seed, stream, index).generate_state(1, np.uint64)[0])


def _marginal_one(args):
    plan, n, t, k, r = args
    pair = build_maxima_pair(
        plan.innovation_model,
        plan.coefficient_model,
        n,
        _rep_seed(plan, 10, r),
        target_mass=plan.target_mass,
        a_n=plan.a_n(n),
    )
    return float(pair.mn.eval(t)[k])


def _coupling_one(args):
    plan, n, r = args
    pair = build_maxima_pair(
        plan.innovation_model,
        plan.coefficient_model,
        n,
        _rep_seed(plan, 20, r),
        target_mass=plan.target_mass,
        a_n=plan.a_n(n),
    )
    return metrics.d_p(pair.mn, pair.wn).value


def _map(plan: ExperimentPlan, fn, arglist):
    if plan.jobs > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as ex:
            return list(ex.map(fn, arglist, chunksize=max(1, len(arglist) // (4 * plan.jobs))))
    return [fn(a) for a in arglist]


def run_ks_marginal(
    plan: ExperimentPlan,
    t: float = 1.0,
    component: int = 0,
    reference=None,
) -> list:
    """KS reports of the maxima-path marginal at time ``t`` per grid n.

    The reference is the closed-form limit marginal when the coefficient
    model is deterministic; otherwise a Monte Carlo reference sample of the
    limit process is drawn and a two-sample statistic is reported.  An
    explicit ``reference`` callable overrides both (negative controls).
    """
    if plan.replications < 100:
        raise ValueError("refuse to run KS with fewer than 100 replications")
    spec = LimitSpec.from_models(plan.innovation_model, plan.coefficient_model)
    reports = []
    for n in plan.n_grid:
        vals = np.array(
            _map(plan, _marginal_one, [(plan, n, t, component, r) for r in range(plan.replications)])
        )
        if reference is not None:
            stat = ks_statistic(vals, reference)
            ref_id = "explicit-override"
        elif spec.extremes is not None:
            stat = ks_statistic(vals, lambda x: limit_marginal_cdf(spec, component, t, x))
            ref_id = "closed-form-marginal"
        else:
            ref = np.array(
                [
                    sample_limit_path(spec, 1e-3, _rep_seed(plan, 30, r)).eval(t)[component]
                    for r in range(plan.replications)
                ]
            )
            stat = ks_two_sample(vals, ref)
            ref_id = "mc-limit-sample"
        r = plan.replications
        reports.append(
            KSReport(
                statistic=stat,
                sample_size=r,
                reference=ref_id,
                crit_1pct=KS_CRIT_1PCT / np.sqrt(r),
                crit_5pct=KS_CRIT_5PCT / np.sqrt(r),
                n=n,
                t=t,
                component=component,
            )
        )
    return reports


def run_coupling_sweep(plan: ExperimentPlan, delta: float = 0.25) -> list:
    """Per n: median coupled distance and exceedance frequency above delta."""
    if len(plan.n_grid) < 3:
        raise ValueError("coupling sweep wants an n grid with >= 3 points")
    rows = []
    for n in plan.n_grid:
        dists = np.array(
            _map(plan, _coupling_one, [(plan, n, r) for r in range(plan.replications)])
        )
        rows.append(
            {
                "n": n,
                "R": plan.replications,
                "delta": delta,
                "median_dp": float(np.median(dists)),
                "p_exceed": float(np.mean(dists > delta)),
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Oscillation experiment (two-coordinate Frechet moving average)
# ---------------------------------------------------------------------------


def analytic_floor(epsilon: float) -> float:
    """Limit lower bound for the oscillation frequency at level epsilon/2.

    ``(1 - exp(-1/(2 eps)))`` is the limiting probability that the largest
    of the first n-1 underlying Frechet variables exceeds ``eps * a_n``;
    ``2 / eps^2`` bounds the probability that a second variable lands
    within the collision window.  Their difference is positive only when
    ``eps^2 (1 - exp(-1/(2 eps))) > 2``.
    """
    return (1.0 - np.exp(-1.0 / (2.0 * epsilon))) - 2.0 / epsilon ** 2


def _counterexample_one(args):
    plan, n, eps, r = args
    seed = _rep_seed(plan, 40, r)
    a_n = frechet_ma1_a_n(n)
    pair = build_maxima_pair(
        plan.innovation_model, plan.coefficient_model, n, seed, a_n=a_n
    )
    vn = build_vn(pair.mn)
    osc = metrics.oscillation(vn, 2.0 / n)
    # underlying scalar sequence: coordinates interleave as (T_{2i-1}, T_{2i});
    # the window includes the burn-in pair (T_{-1}, T_0)
    window = sample_sequence(
        plan.innovation_model,
        n + 1,
        int(child_sequence(seed, INNOVATION_STREAM).generate_state(1, np.uint64)[0]),
    )
    t_seq = window.reshape(-1)  # T_{-1}, T_0, T_1, ..., T_{2n}
    first = t_seq[2 : n + 1]  # T_1 .. T_{n-1}
    i_prime = int(np.argmax(first)) + 1  # 1-based index of the running max
    t_max = first[i_prime - 1]
    event_a = t_max > eps * a_n
    event_b = False
    if event_a:
        lo = 0  # array position of T_{-1}; covers k >= -i'-1
        hi = min(i_prime + 3, 2 * n) + 1  # through T_{i'+3}
        neighborhood = np.delete(t_seq[lo : hi + 1], i_prime + 1 - lo)
        event_b = bool(np.any(neighborhood > eps * a_n / 8.0))
    return osc, event_a, event_b


def run_counterexample(plan: ExperimentPlan, epsilon: float, n_grid=None) -> list:
    """Oscillation and collision-event frequencies per n.

    Per replication: the oscillation of the coordinate difference over
    windows of width 2/n, the event that the largest of the first n-1
    underlying variables exceeds ``epsilon * a_n``, and the near-collision
    event that another variable in its index neighborhood exceeds an
    eighth of that level.  The analytic floor column is
    :func:`analytic_floor`; a non-positive floor triggers a warning entry.
    """
    if plan.innovation_model.marginal != "unit-frechet" or plan.innovation_model.dim != 2:
        raise ValueError("oscillation experiment expects the 2-d unit-Frechet pair model")
    grid = tuple(n_grid) if n_grid is not None else plan.n_grid
    floor = float(analytic_floor(epsilon))
    rows = []
    for n in grid:
        out = _map(plan, _counterexample_one, [(plan, n, epsilon, r) for r in range(plan.replications)])
        osc = np.array([o for o, _, _ in out])
        ev_a = np.array([a for _, a, _ in out])
        ev_b = np.array([b for _, _, b in out])
        rows.append(
            {
                "n": n,
                "R": plan.replications,
                "epsilon": epsilon,
                "p_osc": float(np.mean(osc > epsilon / 2.0)),
                "p_A": float(np.mean(ev_a)),
                "p_B": float(np.mean(ev_b)),
                "analytic_floor": floor,
                "floor_warning": floor <= 0.0,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Output sinks
# ---------------------------------------------------------------------------

_CSV_COLUMNS = {
    "ks": ["n", "R", "t", "k", "D", "crit1", "crit5", "pass"],
    "coupling": ["n", "R", "delta", "median_dp", "p_exceed"],
    "counterexample": ["n", "R", "epsilon", "p_osc", "p_A", "p_B", "analytic_floor"],
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def ks_rows(reports) -> list:
    return [
        {
            "n": r.n,
            "R": r.sample_size,
            "t": r.t,
            "k": r.component + 1,
            "D": r.statistic,
            "crit1": r.crit_1pct,
            "crit5": r.crit_5pct,
            "pass": r.pass_1pct,
        }
        for r in reports
    ]


def emit(results: dict, sink, plan: ExperimentPlan) -> list:
    """Write one CSV per statistic plus a JSON-lines run log; returns paths.

    Reruns with the same plan and master seed produce byte-identical files.
    """
    sink = Path(sink)
    sink.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in sorted(results.items()):
        cols = _CSV_COLUMNS.get(name) or (list(rows[0].keys()) if rows else [])
        path = sink / f"{name}.csv"
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in cols))
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    log = sink / "runlog.jsonl"
    entry = {"plan": plan.echo(), "statistics": sorted(results.keys())}
    log.write_text(json.dumps(entry, sort_keys=True, default=str) + "\n")
    written.append(log)
    return written

"""Acceptance criteria, one test per criterion, each printing a verdict line.

Every tolerance and scale below is pinned; master seeds are fixed so the
whole suite is deterministic.  Runtime bounds are asserted where stated.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from tailmax import (
    CoefficientExtremes,
    ExperimentPlan,
    FiniteDeterministic,
    InfiniteGeometric,
    InnovationModel,
    LimitSpec,
    d_m2_scalar,
    d_p,
    d_uniform,
    extremes,
    generate_path,
    karamata_diagnostic,
    ks_statistic,
    limit_marginal_cdf,
    normalizer,
    run_counterexample,
    run_coupling_sweep,
    run_ks_marginal,
    running_max,
    sample_limit_path,
    sample_sequence,
    truncate,
)
from tailmax.harness import KS_CRIT_1PCT, analytic_floor
from tailmax.metrics import d_m2_bruteforce
from tailmax.seeding import INNOVATION_STREAM, child_sequence
from conftest import random_step_path

MA1 = FiniteDeterministic([[[1.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]]])
FRECHET2 = InnovationModel(dim=2, alpha=1.0, marginal="unit-frechet")
PARETO1 = InnovationModel(dim=1, alpha=1.0, marginal="pareto")


def _verdict(name: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", flush=True)
    assert ok, f"{name}: {detail}"


def test_criterion_1_metric_oracle_equivalence():
    rng = np.random.default_rng(11001)
    start = time.time()
    worst = 0.0
    for _ in range(200):
        x = random_step_path(rng, max_jumps=12)
        y = random_step_path(rng, max_jumps=12)
        exact = d_m2_scalar(x, y).value
        oracle = d_m2_bruteforce(x, y, spacing=1.5e-3).value
        worst = max(worst, abs(exact - oracle))
    elapsed = time.time() - start
    _verdict(
        "criterion-1 metric-oracle equivalence",
        worst <= 5e-3 and elapsed < 30.0,
        f"max |exact - oracle| = {worst:.2e} over 200 pairs, {elapsed:.1f}s",
    )


def test_criterion_2_metric_axioms():
    rng = np.random.default_rng(11002)
    start = time.time()
    sym_ok = ident_ok = True
    worst_tri = -np.inf
    metrics_under_test = (
        ("d_m2", lambda a, b: d_m2_scalar(a.component(0), b.component(0)).value),
        ("d_p", lambda a, b: d_p(a, b).value),
        ("d_uniform", lambda a, b: d_uniform(a, b).value),
    )
    for _ in range(500):
        x = random_step_path(rng, dim=2)
        y = random_step_path(rng, dim=2)
        z = random_step_path(rng, dim=2)
        for _, m in metrics_under_test:
            dxy, dyx = m(x, y), m(y, x)
            sym_ok &= dxy == dyx
            ident_ok &= m(x, x) == 0.0
            worst_tri = max(worst_tri, m(x, z) - (dxy + m(y, z)))
    elapsed = time.time() - start
    _verdict(
        "criterion-2 metric axioms",
        sym_ok and ident_ok and worst_tri <= 1e-9 and elapsed < 30.0,
        f"symmetry exact: {sym_ok}, identity: {ident_ok}, "
        f"max triangle excess = {worst_tri:.2e}, {elapsed:.1f}s over 500 triples",
    )


def test_criterion_3_classical_frechet_marginal():
    start = time.time()
    plan = ExperimentPlan(
        innovation_model=PARETO1,
        coefficient_model=FiniteDeterministic([[[1.0]]]),
        n_grid=(10**3, 10**4, 10**5),
        replications=1000,
        master_seed=31007,
    )
    reports = {r.n: r for r in run_ks_marginal(plan)}
    elapsed = time.time() - start
    d4 = reports[10**4].statistic
    trend_ok = reports[10**5].statistic < reports[10**3].statistic
    _verdict(
        "criterion-3 classical marginal",
        d4 <= 0.08 and trend_ok and elapsed < 180.0,
        f"KS(n=1e4) = {d4:.4f} (<= 0.08), "
        f"KS(1e5) = {reports[10**5].statistic:.4f} < KS(1e3) = "
        f"{reports[10**3].statistic:.4f}: {trend_ok}, {elapsed:.1f}s",
    )


def test_criterion_4_ma1_marginals_both_components():
    start = time.time()
    plan = ExperimentPlan(
        innovation_model=FRECHET2,
        coefficient_model=MA1,
        n_grid=(10**4,),
        replications=1000,
        master_seed=41001,
        norm_mode="component-half",
    )
    stats = {}
    for k in (0, 1):
        (rep,) = run_ks_marginal(plan, component=k)
        assert rep.reference == "closed-form-marginal"
        stats[k + 1] = rep.statistic
    elapsed = time.time() - start
    _verdict(
        "criterion-4 coupled-pair marginals",
        max(stats.values()) <= 0.08 and elapsed < 300.0,
        f"KS(k=1) = {stats[1]:.4f}, KS(k=2) = {stats[2]:.4f} (<= 0.08), {elapsed:.1f}s",
    )


def test_criterion_5_coupling_decay():
    start = time.time()
    plan = ExperimentPlan(
        innovation_model=FRECHET2,
        coefficient_model=MA1,
        n_grid=(10**3, 10**4, 10**5),
        replications=200,
        master_seed=51003,
        norm_mode="component-half",
    )
    rows = run_coupling_sweep(plan, delta=0.25)
    elapsed = time.time() - start
    p = [row["p_exceed"] for row in rows]
    decreasing = p[0] > p[1] > p[2]
    _verdict(
        "criterion-5 coupling decay",
        decreasing and p[2] <= 0.05 and elapsed < 600.0,
        f"P(d_p > 0.25) = {p[0]:.3f} > {p[1]:.3f} > {p[2]:.3f}, "
        f"final <= 0.05, {elapsed:.1f}s",
    )


def test_criterion_6_oscillation_floor():
    start = time.time()
    plan = ExperimentPlan(
        innovation_model=FRECHET2,
        coefficient_model=MA1,
        n_grid=(10**3, 10**4, 10**5),
        replications=2000,
        master_seed=61001,
        norm_mode="component-half",
    )
    rows = run_counterexample(plan, epsilon=8.0)
    elapsed = time.time() - start
    p_osc = [row["p_osc"] for row in rows]
    p_a_final = rows[-1]["p_A"]
    limit_a = 1.0 - np.exp(-1.0 / 16.0)
    osc_ok = all(p >= 0.02 for p in p_osc)
    a_ok = abs(p_a_final - limit_a) <= 0.01
    _verdict(
        "criterion-6 oscillation floor",
        osc_ok and a_ok and elapsed < 600.0,
        f"P(osc > 4) = {p_osc} (each >= 0.02), "
        f"P(A) at n=1e5 = {p_a_final:.4f} vs {limit_a:.4f} (+-0.01), "
        f"analytic floor {rows[-1]['analytic_floor']:.4f}, {elapsed:.1f}s",
    )


def test_criterion_7_limit_process_self_consistency():
    start = time.time()
    spec = LimitSpec(
        alpha=1.0,
        p_plus=[0.5, 0.5],
        p_minus=[0.0, 0.0],
        extremes=CoefficientExtremes(np.ones((2, 2)), np.zeros((2, 2))),
    )
    floor = 1e-3
    draws = np.array(
        [sample_limit_path(spec, floor, seed=s).eval(1.0)[0] for s in range(5000)]
    )
    stat = ks_statistic(draws, lambda x: limit_marginal_cdf(spec, 0, 1.0, x))
    allow = KS_CRIT_1PCT / np.sqrt(5000) + floor * spec.extremes.d_max
    elapsed = time.time() - start
    _verdict(
        "criterion-7 limit-process self-consistency",
        stat <= allow and elapsed < 60.0,
        f"KS = {stat:.4f} <= {allow:.4f} over 5000 seeds, {elapsed:.1f}s",
    )


def test_criterion_8_truncation():
    start = time.time()
    model = InfiniteGeometric(0.5, np.eye(1), truncation_order=40)
    ident_ok = True
    for order in range(2, 13):
        full, trunc = extremes(model), extremes(truncate(model, order))
        ident_ok &= np.array_equal(full.d_plus, trunc.d_plus)
        ident_ok &= np.array_equal(full.d_minus, trunc.d_minus)

    innov = InnovationModel(dim=1, alpha=0.8, marginal="pareto")
    n = 400
    a_n = normalizer(innov, n, 1.0)
    gaps = {5: [], 20: []}
    for seed in range(100):
        inner = int(child_sequence(seed, INNOVATION_STREAM).generate_state(1, np.uint64)[0])
        window40 = sample_sequence(innov, n + 40, inner)
        ref = running_max(generate_path(truncate(model, 40).matrices, window40, n), a_n)
        for order in (5, 20):
            win = window40[40 - order:]
            path = running_max(generate_path(truncate(model, order).matrices, win, n), a_n)
            gaps[order].append(d_uniform(path, ref).value)
    med5, med20 = np.median(gaps[5]), np.median(gaps[20])
    elapsed = time.time() - start
    _verdict(
        "criterion-8 truncation",
        ident_ok and med20 <= med5 and elapsed < 120.0,
        f"extremes identity m=2..12: {ident_ok}; median gap m=20 ({med20:.2e}) "
        f"<= median gap m=5 ({med5:.2e}) over 100 seeds, {elapsed:.1f}s",
    )


def test_criterion_9_karamata_diagnostics():
    start = time.time()
    below = karamata_diagnostic(
        InnovationModel(dim=1, alpha=0.7, marginal="pareto"),
        0.9, n=10**6, sample_count=2 * 10**8, seed=91001,
    )
    above = karamata_diagnostic(
        PARETO1, 0.5, n=10**6, sample_count=4 * 10**8, seed=91002,
    )
    elapsed = time.time() - start
    ok_below = abs(below - 3.5) / 3.5 <= 0.2
    ok_above = abs(above - 2.0) / 2.0 <= 0.2
    _verdict(
        "criterion-9 karamata diagnostics",
        ok_below and ok_above and elapsed < 60.0,
        f"truncated-moment estimate {below:.3f} vs 3.5 (+-20%), "
        f"exceedance estimate {above:.3f} vs 2.0 (+-20%), {elapsed:.1f}s",
    )

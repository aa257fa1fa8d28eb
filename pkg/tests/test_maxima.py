"""Coupled maxima/comparison path construction."""

import numpy as np
import pytest

from tailmax import (
    FiniteDeterministic,
    InnovationModel,
    build_maxima_pair,
    build_mn,
    build_vn,
    build_wn,
    d_p,
    normalizer,
    sample_sequence,
    step_path,
)
from tailmax.harness import frechet_ma1_a_n
from tailmax.seeding import INNOVATION_STREAM, child_sequence

FRECHET2 = InnovationModel(dim=2, alpha=1.0, marginal="unit-frechet")
PARETO1 = InnovationModel(dim=1, alpha=1.0, marginal="pareto")
MA1 = FiniteDeterministic([[[1.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]]])
IDENT = FiniteDeterministic([[[1.0]]])


def _window(model, n, order, seed):
    inner = int(child_sequence(seed, INNOVATION_STREAM).generate_state(1, np.uint64)[0])
    return sample_sequence(model, n + order, inner)


class TestBuildMn:
    def test_n_equals_one_constant(self):
        path = build_mn(PARETO1, IDENT, n=1, seed=4, a_n=2.0)
        w = _window(PARETO1, 1, 0, 4)
        assert np.array_equal(path.breakpoints, [0.0])
        assert path.eval(0.9)[0] == w[0, 0] / 2.0

    def test_identity_filter_end_value(self):
        n = 500
        a_n = normalizer(PARETO1, n, 1.0)
        path = build_mn(PARETO1, IDENT, n=n, seed=5)
        w = _window(PARETO1, n, 0, 5)
        assert np.isclose(path.eval(1.0)[0], w.max() / a_n)

    def test_ma1_matches_bruteforce(self):
        n, seed = 8, 11
        a_n = frechet_ma1_a_n(n)
        path = build_mn(FRECHET2, MA1, n=n, seed=seed, a_n=a_n)
        t = _window(FRECHET2, n, 1, seed).reshape(-1)
        x = np.array(
            [[t[2 * i] + t[2 * i + 1], t[2 * i - 2] + t[2 * i - 1]] for i in range(1, n + 1)]
        )
        m = np.maximum.accumulate(x, axis=0) / a_n
        for i in range(1, n + 1):
            assert np.allclose(path.eval(i / n), m[i - 1])
        assert np.allclose(path.eval(0.5 / n), x[0] / a_n)  # t < 1/n convention

    def test_monotone_on_grid(self):
        path = build_mn(FRECHET2, MA1, n=200, seed=6, a_n=frechet_ma1_a_n(200))
        assert path.is_monotone()


class TestBuildWn:
    def test_identity_nonnegative_collapses_to_mn(self):
        pair = build_maxima_pair(PARETO1, IDENT, n=300, seed=7)
        assert d_p(pair.mn, pair.wn).value == 0.0

    def test_negative_part_contribution(self):
        # single innovation -3 with D- = 2 contributes 6 / a_n
        model = FiniteDeterministic([[[-2.0]]])
        two_sided = InnovationModel(dim=1, alpha=1.0, marginal="two-sided-pareto",
                                    tail_balance_p=0.5)
        n, seed = 50, 8
        pair = build_maxima_pair(two_sided, model, n=n, seed=seed)
        w = _window(two_sided, n, 0, seed)  # order 0: window is Z_1..Z_n
        expected = np.maximum.accumulate(2.0 * np.maximum(-w[:, 0], 0.0)) / pair.a_n
        for i in (1, n // 2, n):
            assert np.isclose(pair.wn.eval(i / n)[0], expected[i - 1])

    def test_ma1_wn_is_running_max_of_pairs(self):
        n, seed = 40, 9
        a_n = frechet_ma1_a_n(n)
        wn = build_wn(FRECHET2, MA1, n=n, seed=seed, a_n=a_n)
        z = _window(FRECHET2, n, 1, seed)[1:]
        m = np.maximum.accumulate(np.maximum(z[:, 0], z[:, 1])) / a_n
        for i in (1, 7, n):
            assert np.isclose(wn.eval(i / n)[0], m[i - 1])
            assert np.isclose(wn.eval(i / n)[1], m[i - 1])

    def test_wn_nonnegative_and_monotone(self):
        pair = build_maxima_pair(
            InnovationModel(dim=2, alpha=1.0, marginal="two-sided-pareto", tail_balance_p=0.6),
            FiniteDeterministic([np.array([[1.0, -0.5], [0.2, 0.1]])]),
            n=200,
            seed=10,
        )
        assert pair.wn.is_monotone()
        assert np.all(pair.wn.values >= 0.0)


class TestBuildVn:
    def test_identical_components_zero(self):
        p = step_path([0.0, 0.5], [[0.0, 0.0], [1.0, 1.0]])
        v = build_vn(p)
        assert np.all(v.values == 0.0)

    def test_single_jump_difference(self):
        p = step_path([0.0, 0.5], [[0.0, 0.0], [1.0, 0.0]])
        v = build_vn(p)
        assert v.eval(0.4)[0] == 0.0 and v.eval(0.6)[0] == 1.0

    def test_ma1_matches_bruteforce(self):
        n, seed = 16, 12
        a_n = frechet_ma1_a_n(n)
        mn = build_mn(FRECHET2, MA1, n=n, seed=seed, a_n=a_n)
        vn = build_vn(mn)
        t = _window(FRECHET2, n, 1, seed).reshape(-1)
        x = np.array(
            [[t[2 * i] + t[2 * i + 1], t[2 * i - 2] + t[2 * i - 1]] for i in range(1, n + 1)]
        )
        m = np.maximum.accumulate(x, axis=0) / a_n
        for i in (1, 5, 11, n):
            assert np.isclose(vn.eval(i / n)[0], m[i - 1, 0] - m[i - 1, 1])

    def test_requires_two_components(self):
        with pytest.raises(ValueError):
            build_vn(step_path([0.0], [[1.0]]))


class TestScaling:
    def test_scale_equivariance(self):
        a = build_mn(PARETO1, IDENT, n=100, seed=13, a_n=5.0)
        b = build_mn(PARETO1, IDENT, n=100, seed=13, a_n=10.0)
        assert np.array_equal(a.breakpoints, b.breakpoints)
        assert np.array_equal(a.values, 2.0 * b.values)

    def test_pair_carries_provenance(self):
        pair = build_maxima_pair(PARETO1, IDENT, n=20, seed=14)
        assert pair.n == 20 and pair.seed == 14 and pair.a_n > 0

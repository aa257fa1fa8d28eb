"""Coefficient models and sample paths of linear (moving-average) processes.

A process path is ``X_i = sum_j C_j Z_{i-j}`` for d x d coefficient
matrices ``C_j`` applied to an innovation window.  Coefficients are
deterministic, drawn once per path from a finite mixture (the "random
environment" case, independent of the innovations), or an infinite
geometric family ``C_j = rho^j B`` handled through closed forms.

The entrywise positive/negative coefficient extremes drive everything
downstream: the coupled comparison process and the limit law both consume
``D_plus[k, j] = sup_i max(C_{i;k,j}, 0)`` and its negative-part twin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seeding import rng_for

__all__ = [
    "FiniteDeterministic",
    "FiniteRandomMixture",
    "InfiniteGeometric",
    "InfinitePowerDecay",
    "CoefficientExtremes",
    "MomentReport",
    "validate_moments",
    "extremes",
    "truncate",
    "generate_path",
    "realize_coefficients",
    "operator_norm",
]


def operator_norm(mat: np.ndarray) -> float:
    """Operator norm induced by the max-norm: the maximum absolute row sum."""
    return float(np.abs(mat).sum(axis=1).max())


def _as_matrices(mats) -> np.ndarray:
    a = np.asarray(mats, dtype=float)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("coefficients must be a list of square matrices")
    return a


@dataclass(frozen=True)
class FiniteDeterministic:
    """Fixed matrices ``C_0 ... C_m``."""

    matrices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrices", _as_matrices(self.matrices))

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def order(self) -> int:
        return self.matrices.shape[0] - 1


@dataclass(frozen=True)
class FiniteRandomMixture:
    """Finite mixture of coefficient sequences, drawn once per path.

    One scenario (a full list of matrices) is selected with the given
    weights, independently of the innovations.  This keeps the law of the
    coefficient extremes available in closed form for verification.
    """

    scenarios: tuple  # of FiniteDeterministic
    weights: np.ndarray

    def __post_init__(self):
        scenarios = tuple(
            s if isinstance(s, FiniteDeterministic) else FiniteDeterministic(s)
            for s in self.scenarios
        )
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "scenarios", scenarios)
        object.__setattr__(self, "weights", w)
        if len(scenarios) != len(w) or len(w) == 0:
            raise ValueError("need one weight per scenario")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be a probability vector")
        dims = {s.dim for s in scenarios}
        orders = {s.order for s in scenarios}
        if len(dims) != 1 or len(orders) != 1:
            raise ValueError("scenarios must share dim and order")

    @property
    def dim(self) -> int:
        return self.scenarios[0].dim

    @property
    def order(self) -> int:
        return self.scenarios[0].order


@dataclass(frozen=True)
class InfiniteGeometric:
    """Infinite family ``C_j = rho^j * base`` with ``|rho| < 1``.

    Closed forms exist for the moment sums, the coefficient extremes, and
    the tail sup/inf matrices used by truncation, so this family is exact
    end to end.  ``truncation_order`` is the default order used when a
    finite realization is required.
    """

    rho: float
    base: np.ndarray
    truncation_order: int = 20

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        if not abs(self.rho) < 1:
            raise ValueError("|rho| must be < 1")
        if self.base.ndim != 2 or self.base.shape[0] != self.base.shape[1]:
            raise ValueError("base must be a square matrix")
        if self.truncation_order < 2:
            raise ValueError("truncation order must be >= 2")

    @property
    def dim(self) -> int:
        return self.base.shape[0]


@dataclass(frozen=True)
class InfinitePowerDecay:
    """Validation-only family ``C_j = (j + 1)^-beta * base``.

    Accepted by :func:`validate_moments` (the moment sums reduce to exact
    p-series convergence tests); path generation and truncation are not
    provided for it.
    """

    beta: float
    base: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def dim(self) -> int:
        return self.base.shape[0]


@dataclass(frozen=True)
class CoefficientExtremes:
    """Entrywise positive/negative suprema of a coefficient sequence."""

    d_plus: np.ndarray
    d_minus: np.ndarray

    def __post_init__(self):
        dp = np.asarray(self.d_plus, dtype=float)
        dm = np.asarray(self.d_minus, dtype=float)
        object.__setattr__(self, "d_plus", dp)
        object.__setattr__(self, "d_minus", dm)
        if np.any(dp < 0) or np.any(dm < 0):
            raise ValueError("extremes must be non-negative")

    @property
    def d_max(self) -> float:
        return float(max(self.d_plus.max(), self.d_minus.max()))


# ---------------------------------------------------------------------------
# Moment-condition validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentReport:
    """Which summability conditions hold, with witness exponents."""

    conditions: tuple  # of (name, holds, witness)

    def all_hold(self) -> bool:
        return all(h for _, h, _ in self.conditions)

    def __str__(self) -> str:
        lines = []
        for name, holds, witness in self.conditions:
            tag = "ok" if holds else "FAIL"
            w = f" (witness {witness})" if witness is not None else ""
            lines.append(f"{name}: {tag}{w}")
        return "\n".join(lines)


def _norm_sum_finite(model, exponent: float) -> bool:
    """Whether sum_j ||C_j||^exponent converges, by closed form."""
    if isinstance(model, (FiniteDeterministic, FiniteRandomMixture)):
        return True
    if isinstance(model, InfiniteGeometric):
        return True  # geometric series converge for every positive exponent
    if isinstance(model, InfinitePowerDecay):
        return model.beta * exponent > 1.0
    raise TypeError(f"unsupported coefficient model {type(model).__name__}")


def validate_moments(model, alpha: float) -> MomentReport:
    """Report the coefficient summability conditions at tail index alpha.

    Checks, in report order: summability of ``E||C_j||^delta`` for some
    ``delta < min(alpha, 1)`` (almost-sure convergence of the series);
    for ``alpha < 1`` additionally ``E||C_j||^gamma`` summable for some
    ``gamma in (alpha, 1)``; for ``alpha >= 1`` absolute summability
    ``sum E||C_j|| < infinity``.  Finite models pass trivially.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    conditions = []
    delta = min(alpha, 1.0) / 2.0
    conditions.append(
        ("series-convergence (delta < min(alpha,1))", _norm_sum_finite(model, delta), delta)
    )
    if alpha < 1.0:
        gamma = (alpha + 1.0) / 2.0
        conditions.append(
            ("intermediate exponent (gamma in (alpha,1))", _norm_sum_finite(model, gamma), gamma)
        )
    else:
        conditions.append(
            ("absolute summability (exponent 1)", _norm_sum_finite(model, 1.0), None)
        )
    return MomentReport(tuple(conditions))


# ---------------------------------------------------------------------------
# Extremes, truncation, realization
# ---------------------------------------------------------------------------


def _finite_extremes(matrices: np.ndarray) -> CoefficientExtremes:
    return CoefficientExtremes(
        np.maximum(matrices, 0.0).max(axis=0), np.maximum(-matrices, 0.0).max(axis=0)
    )


def extremes(model, realized: np.ndarray | None = None) -> CoefficientExtremes:
    """Entrywise sup of positive/negative coefficient parts.

    For the geometric family the tail supremum is closed form: with
    ``rho >= 0`` it sits at j = 0; with ``rho < 0`` the even/odd split
    makes it ``max(B+, |rho| B-)`` entrywise (and symmetrically for the
    negative parts).  Random mixtures require a realized draw.
    """
    if realized is not None:
        return _finite_extremes(_as_matrices(realized))
    if isinstance(model, FiniteDeterministic):
        return _finite_extremes(model.matrices)
    if isinstance(model, InfiniteGeometric):
        bp = np.maximum(model.base, 0.0)
        bm = np.maximum(-model.base, 0.0)
        if model.rho >= 0:
            return CoefficientExtremes(bp, bm)
        r = abs(model.rho)
        return CoefficientExtremes(np.maximum(bp, r * bm), np.maximum(bm, r * bp))
    if isinstance(model, FiniteRandomMixture):
        raise ValueError("random mixture needs a realized draw; pass realized=...")
    raise TypeError(f"unsupported coefficient model {type(model).__name__}")


def tail_sup_inf(model: InfiniteGeometric, start: int):
    """Entrywise sup and inf of ``{C_i : i >= start}`` for geometric models.

    The tail accumulates at the zero matrix, so both closed forms include 0:
    sup = max(rho^start B, rho^(start+1) B, 0) entrywise, inf symmetric.
    """
    c0 = model.rho ** start * model.base
    c1 = model.rho ** (start + 1) * model.base
    sup = np.maximum(np.maximum(c0, c1), 0.0)
    inf = np.minimum(np.minimum(c0, c1), 0.0)
    return sup, inf


def truncate(model: InfiniteGeometric, order: int) -> FiniteDeterministic:
    """Finite order-``order`` model absorbing the infinite tail.

    Coefficients are ``C_0 ... C_{order-2}`` followed by the entrywise sup
    and inf matrices of the remaining tail ``{C_i : i >= order - 1}``.
    This choice preserves the coefficient extremes exactly at every order.
    """
    if not isinstance(model, InfiniteGeometric):
        raise TypeError("truncate applies to the infinite geometric family")
    if order < 2:
        raise ValueError("truncation order must be >= 2")
    head = [model.rho ** j * model.base for j in range(order - 1)]
    sup, inf = tail_sup_inf(model, order - 1)
    return FiniteDeterministic(np.array(head[: order - 1] + [sup, inf]))


def realize_coefficients(model, seed: int) -> FiniteDeterministic:
    """Draw a concrete finite coefficient sequence for one path.

    Deterministic models pass through; mixtures draw one scenario with the
    given weights; the geometric family truncates at its configured order.
    The caller seeds the draw independently of the innovation stream.
    """
    if isinstance(model, FiniteDeterministic):
        return model
    if isinstance(model, FiniteRandomMixture):
        rng = rng_for(seed, 0)
        idx = rng.choice(len(model.scenarios), p=model.weights)
        return model.scenarios[idx]
    if isinstance(model, InfiniteGeometric):
        return truncate(model, model.truncation_order)
    raise TypeError(f"unsupported coefficient model {type(model).__name__}")


def generate_path(matrices, window: np.ndarray, n: int) -> np.ndarray:
    """Exact linear-process path ``X_1..X_n`` from a pre-sampled window.

    ``window`` must hold the innovations ``Z_{1-m} ... Z_n`` (length
    ``n + m``) so that ``X_1`` is exact rather than zero-padded.
    """
    mats = _as_matrices(matrices)
    m = mats.shape[0] - 1
    window = np.asarray(window, dtype=float)
    if window.ndim == 1:
        window = window[:, None]
    if window.shape[0] != n + m:
        raise ValueError(f"window must have length n + m = {n + m}")
    if window.shape[1] != mats.shape[1]:
        raise ValueError("window dimension does not match coefficient dimension")
    x = np.zeros((n, mats.shape[1]))
    for j in range(m + 1):
        x += window[m - j : m - j + n] @ mats[j].T
    return x

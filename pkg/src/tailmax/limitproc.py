"""Simulation and closed forms for the limiting maxima process.

The limit of the scaled partial maxima is assembled from a Poisson process
on ``[0, 1] x (0, infinity)`` with intensity ``Leb x nu``,
``nu(dx) = alpha x^(-alpha-1) dx`` (extremal index 1 for the supported
innovation families), marked with i.i.d. unit-norm directions Q drawn from
the spectral atoms, and weighted through the coefficient extremes:

    M(t)[k] = max_j ( D+[k,j] M_j+(t)  or  D-[k,j] M_j-(t) ),
    M_j+-(t) = max over points with T_i <= t of P_i Q_i^(j)+-.

With deterministic extremes each coordinate is an extremal process whose
marginal law is ``P(M(t)[k] <= x) = exp(-t E[S_k^alpha] x^-alpha)`` with
``S_k = max_j (D+[k,j] Q^(j)+  or  D-[k,j] Q^(j)-)``; the exponent scalars
``E[S_k^alpha]`` reduce to finite sums over the spectral atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cadlag import PointMeasure, StepPath, max_functional
from .innovations import InnovationModel
from .linproc import CoefficientExtremes, extremes, realize_coefficients
from .seeding import COEFFICIENT_STREAM, MARK_STREAM, POISSON_STREAM, child_sequence, rng_for

__all__ = [
    "LimitSpec",
    "ExponentScalars",
    "sample_poisson_marks",
    "extremal_path",
    "sample_limit_path",
    "limit_marginal_cdf",
    "exponent_scalars",
]


@dataclass(frozen=True)
class LimitSpec:
    """Everything needed to simulate or evaluate the limit process.

    ``p_plus[j]``/``p_minus[j]`` are the spectral atom masses on the signed
    coordinate axes (summing to 1 overall).  ``extremes`` carries the
    deterministic coefficient extremes; for random coefficients supply
    ``coefficient_model`` instead and each sampled path redraws its own
    extremes, independently of the Poisson randomness.  The extremal index
    is pinned to 1: the supported innovation families have no clustering of
    large values, and specs describing clustered input are rejected.
    """

    alpha: float
    p_plus: np.ndarray
    p_minus: np.ndarray
    extremes: CoefficientExtremes | None = None
    coefficient_model: object = None
    theta: float = 1.0

    def __post_init__(self):
        pp = np.atleast_1d(np.asarray(self.p_plus, dtype=float))
        pm = np.atleast_1d(np.asarray(self.p_minus, dtype=float))
        object.__setattr__(self, "p_plus", pp)
        object.__setattr__(self, "p_minus", pm)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.theta != 1.0:
            raise ValueError("extremal index is fixed at 1 for supported models")
        if pp.shape != pm.shape:
            raise ValueError("p_plus and p_minus must have equal shape")
        if np.any(pp < 0) or np.any(pm < 0) or abs(pp.sum() + pm.sum() - 1.0) > 1e-9:
            raise ValueError("atom probabilities must be non-negative and sum to 1")
        if self.extremes is None and self.coefficient_model is None:
            raise ValueError("need deterministic extremes or a coefficient model")

    @property
    def dim(self) -> int:
        return self.p_plus.size

    @classmethod
    def from_models(cls, innovation_model: InnovationModel, coefficient_model) -> "LimitSpec":
        """Derive the limit spec of a linear process from its two models."""
        p_plus, p_minus = innovation_model.spectral_atoms()
        try:
            ext = extremes(coefficient_model)
            return cls(innovation_model.alpha, p_plus, p_minus, extremes=ext)
        except ValueError:
            return cls(
                innovation_model.alpha, p_plus, p_minus, coefficient_model=coefficient_model
            )


@dataclass(frozen=True)
class ExponentScalars:
    """Closed-form scalars of the limit marginals.

    ``q_plus[j] = E[(Q^(j)+)^alpha]`` and ``q_minus[j]`` likewise;
    ``s_alpha[k] = E[S_k^alpha]`` turns coefficient extremes into the
    exponent of the k-th marginal.
    """

    q_plus: np.ndarray
    q_minus: np.ndarray
    s_alpha: np.ndarray | None


def exponent_scalars(spec: LimitSpec, mc_directions: np.ndarray | None = None) -> ExponentScalars:
    """Exponent scalars from the spectral atoms (or an empirical sample).

    Under single-axis atoms ``E[(Q^(j)+-)^alpha]`` equals the atom mass and

        E[S_k^alpha] = sum_j ( p_plus[j] D+[k,j]^alpha + p_minus[j] D-[k,j]^alpha ).

    ``mc_directions`` (an (N, d) array of unit-max-norm directions) switches
    to the Monte Carlo average of ``S_k^alpha`` for arbitrary empirical
    angular samples; it requires deterministic extremes.
    """
    a = spec.alpha
    if mc_directions is not None:
        if spec.extremes is None:
            raise ValueError("Monte Carlo scalars need deterministic extremes")
        q = np.asarray(mc_directions, dtype=float)
        qp, qm = np.maximum(q, 0.0), np.maximum(-q, 0.0)
        s = np.maximum(
            spec.extremes.d_plus[None] * qp[:, None, :],
            spec.extremes.d_minus[None] * qm[:, None, :],
        ).max(axis=2)
        return ExponentScalars(
            (qp ** a).mean(axis=0), (qm ** a).mean(axis=0), (s ** a).mean(axis=0)
        )
    s_alpha = None
    if spec.extremes is not None:
        s_alpha = (
            spec.p_plus[None, :] * spec.extremes.d_plus ** a
            + spec.p_minus[None, :] * spec.extremes.d_minus ** a
        ).sum(axis=1)
    return ExponentScalars(spec.p_plus.copy(), spec.p_minus.copy(), s_alpha)


def sample_poisson_marks(spec: LimitSpec, floor: float, seed: int) -> PointMeasure:
    """Sample the marked Poisson points with radial part above ``floor``.

    The restricted intensity has total mass ``floor^-alpha``; radial parts
    are Pareto above the floor, times are uniform on the open unit
    interval, and each mark is the radial part times an axis direction
    drawn from the spectral atoms.  Deterministic given the seed.
    """
    if floor <= 0:
        raise ValueError("floor must be positive")
    rng = rng_for(seed, POISSON_STREAM)
    k = rng.poisson(floor ** -spec.alpha)
    if k == 0:
        return PointMeasure.empty(spec.dim)
    times = rng.uniform(0.0, 1.0, k)
    times[times == 0.0] = 0.5  # uniform on the open interval; p = 0 guard
    radial = floor * (1.0 - rng.random(k)) ** (-1.0 / spec.alpha)
    mark_rng = rng_for(seed, MARK_STREAM)
    d = spec.dim
    probs = np.concatenate((spec.p_plus, spec.p_minus))
    axes = np.concatenate((np.eye(d), -np.eye(d)), axis=0)
    idx = mark_rng.choice(2 * d, size=k, p=probs / probs.sum())
    marks = radial[:, None] * axes[idx]
    return PointMeasure(times, marks)


def extremal_path(measure: PointMeasure) -> StepPath:
    """Running componentwise maxima of non-negative marks; empty max is 0."""
    if len(measure) and np.any(measure.marks < 0):
        raise ValueError("marks must be non-negative")
    path = max_functional(measure, measure.dim)
    # positive-part components carry everything for non-negative marks
    return StepPath(path.breakpoints, path.values[:, 0::2])


def _realized_extremes(spec: LimitSpec, seed: int) -> CoefficientExtremes:
    if spec.extremes is not None:
        return spec.extremes
    realized = realize_coefficients(
        spec.coefficient_model,
        int(child_sequence(seed, COEFFICIENT_STREAM).generate_state(1, np.uint64)[0]),
    )
    return extremes(None, realized.matrices)


def sample_limit_path(spec: LimitSpec, floor: float, seed: int) -> StepPath:
    """One sampled limit path; truncation bias at most ``floor * D_max``.

    Discarded points have radial part at most ``floor`` and therefore can
    change no coordinate by more than ``floor`` times the largest extreme.
    Random coefficient extremes are redrawn per path from a stream
    independent of the Poisson points.
    """
    ext = _realized_extremes(spec, seed)
    pm = sample_poisson_marks(spec, floor, seed)
    if len(pm) == 0:
        return StepPath(np.zeros(1), np.zeros((1, ext.d_plus.shape[0])))
    qp = np.maximum(pm.marks, 0.0)
    qm = np.maximum(-pm.marks, 0.0)
    weighted = np.maximum(
        ext.d_plus[None] * qp[:, None, :], ext.d_minus[None] * qm[:, None, :]
    ).max(axis=2)
    return extremal_path(PointMeasure(pm.times, weighted))


def truncation_error_bound(spec: LimitSpec, floor: float) -> float:
    """Componentwise bound on the effect of discarding radial parts <= floor."""
    if spec.extremes is None:
        raise ValueError("error bound needs deterministic extremes")
    return floor * spec.extremes.d_max


def limit_marginal_cdf(spec: LimitSpec, k: int, t: float, x) -> np.ndarray:
    """Closed-form marginal ``P(M(t)[k] <= x)`` for deterministic extremes.

    Equals ``exp(-t E[S_k^alpha] x^-alpha)`` for x > 0; a zero exponent
    scalar gives the unit CDF (the zero process).
    """
    if spec.extremes is None:
        raise ValueError("closed-form marginal needs deterministic extremes")
    if not (0.0 < t <= 1.0):
        raise ValueError("t must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    s = exponent_scalars(spec).s_alpha[k]
    return np.exp(-t * s * x ** -spec.alpha)

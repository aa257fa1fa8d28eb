"""Partial-maxima paths and the coupled comparison path.

``build_mn`` assembles the scaled running-maxima step path of a linear
process; ``build_wn`` assembles, from the same innovations and the same
realized coefficients, the comparison path driven by the coefficient
extremes:

    W_n(t)[k] = max_{i <= floor(nt)} max_j (D+[k,j] Z_i^(j)+ + D-[k,j] Z_i^(j)-) / a_n

Coupling is the point: both paths share one innovation window and one
coefficient draw, so their distance can be studied pathwise.  For
``t < 1/n`` both use the i = 1 term, keeping the two paths comparable on
all of [0, 1] (an O(1/n) convention at the origin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cadlag import StepPath, combine, running_max
from .innovations import InnovationModel, normalizer, sample_sequence
from .linproc import CoefficientExtremes, extremes, generate_path, realize_coefficients
from .seeding import COEFFICIENT_STREAM, INNOVATION_STREAM, child_sequence

__all__ = ["MaximaPair", "build_maxima_pair", "build_mn", "build_wn", "build_vn"]


@dataclass(frozen=True)
class MaximaPair:
    """Coupled (M_n, W_n) built from shared randomness.

    Both paths live on the grid family i/n with breakpoints only at value
    changes; W_n is componentwise non-decreasing and non-negative.
    """

    mn: StepPath
    wn: StepPath
    n: int
    a_n: float
    seed: int


def _inner_seed(ss) -> int:
    # collapse a SeedSequence to one integer usable as a sampler seed
    return int(ss.generate_state(1, np.uint64)[0])


def _wn_values(z: np.ndarray, ext: CoefficientExtremes, a_n: float) -> np.ndarray:
    zp = np.maximum(z, 0.0)
    zm = np.maximum(-z, 0.0)
    # score[i, k] = max_j (D+[k,j] zp[i,j] + D-[k,j] zm[i,j])
    contrib = ext.d_plus[None, :, :] * zp[:, None, :] + ext.d_minus[None, :, :] * zm[:, None, :]
    return contrib.max(axis=2) / a_n


def build_maxima_pair(
    innovation_model: InnovationModel,
    coefficient_model,
    n: int,
    seed: int,
    target_mass: float = 1.0,
    a_n: float | None = None,
) -> MaximaPair:
    """Build the coupled (M_n, W_n) pair for one replication.

    The innovation window covers indices ``1-m .. n`` so the first process
    value is exact.  ``a_n`` overrides the closed-form normalizer when a
    different normalization convention is wanted.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    realized = realize_coefficients(
        coefficient_model, _inner_seed(child_sequence(seed, COEFFICIENT_STREAM))
    )
    order = realized.order
    window = sample_sequence(
        innovation_model, n + order, _inner_seed(child_sequence(seed, INNOVATION_STREAM))
    )
    if a_n is None:
        a_n = normalizer(innovation_model, max(n, 2), target_mass)
    x = generate_path(realized.matrices, window, n)
    mn = running_max(x, a_n)
    ext = extremes(None, realized.matrices)
    wn = running_max(_wn_values(window[order:], ext, 1.0), a_n)
    return MaximaPair(mn=mn, wn=wn, n=n, a_n=float(a_n), seed=seed)


def build_mn(innovation_model, coefficient_model, n, seed, **kw) -> StepPath:
    """Scaled partial-maxima path of the linear process."""
    return build_maxima_pair(innovation_model, coefficient_model, n, seed, **kw).mn


def build_wn(innovation_model, coefficient_model, n, seed, **kw) -> StepPath:
    """Coefficient-extreme comparison path coupled to :func:`build_mn`."""
    return build_maxima_pair(innovation_model, coefficient_model, n, seed, **kw).wn


def build_vn(mn: StepPath) -> StepPath:
    """Difference of the two coordinates of a 2-d maxima path."""
    if mn.dim != 2:
        raise ValueError("component difference is defined for dim 2")
    return combine([mn.component(0), mn.component(1)], reducer="difference")
